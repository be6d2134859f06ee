//! Acceptance suite: one test per criterion, exact rational comparisons
//! throughout (tolerance zero), one PASS line printed per criterion.

use feas_core::derivation::{check_derivation, Derivation};
use feas_core::fis::{
    check_fis, check_weak_closure_values, defuzzify, dominates, feasibility_radius, DefuzzCut,
    FisDescriptor,
};
use feas_core::formula::Formula;
use feas_core::measure::{credibility, CredibilityMeasure};
use feas_core::nat::nat;
use feas_core::normalize::normalize_trace;
use feas_core::rat::UnitRational;
use feas_core::search::{
    and_forward_close, build_universe, feasible_consequence, feasibly_consistent,
    ConsequenceStatus, ConsistencyStatus, SearchBudget,
};
use feas_core::semantics::{check_t_model, soundness_audit, FuzzyStructure};
use feas_core::term::{Interpretation, Signature, Term};
use feas_core::term_model::{build_term_model, CompletionPolicy};
use feas_core::theory::{feasibility_theory, Theory};
use feas_core::ttp::{validate_ttp, PolicyKind, TruthTransferPolicy, TtpCondition};
use feas_core::RuleId;
use std::collections::{BTreeMap, BTreeSet};

fn ur(n: u64, d: u64) -> UnitRational {
    UnitRational::from_u64_ratio(n, d).unwrap()
}

fn erosion(n: u64, d: u64) -> CredibilityMeasure {
    CredibilityMeasure::FromTtp(TruthTransferPolicy::erosion(ur(n, d)).unwrap())
}

fn goal_f(n: u64) -> Formula {
    Formula::atom("F", vec![Term::num(n)])
}

/// The stepwise proof of `F(n)` by iterated modus ponens.
fn chain(theory: &Theory, n: u64) -> Derivation {
    let mut proof = Derivation::axiom(theory, "f0").unwrap();
    for k in 0..n {
        let step = Derivation::schema_instance(theory, "step", vec![nat(k)]).unwrap();
        proof = Derivation::mp(step, proof);
    }
    proof
}

/// Independent oracle for the chain credibility: iterate the one-step
/// erosion recursion directly.
fn chain_credibility_oracle(n: u64, erosion: &UnitRational) -> UnitRational {
    let mut cred = UnitRational::one();
    for _ in 0..n {
        cred = cred.min(UnitRational::one()).saturating_sub(erosion);
    }
    cred
}

#[test]
fn acceptance_1_scaled_feasible_consistency() {
    let theory = feasibility_theory(10);
    let step = ur(1, 1024);
    let measure = erosion(1, 1024);

    // (a) best found credibility of F(n) equals max(0, 1 - n/2^10) exactly
    let budget = SearchBudget::with_depth(1100);
    for n in [0u64, 1, 10, 100, 1023] {
        let oracle = chain_credibility_oracle(n, &step);
        let closed_form = UnitRational::one_minus_ratio(&nat(n), &nat(1024)).unwrap();
        assert_eq!(oracle, closed_form, "oracle agrees with the closed form at {n}");
        let report = feasible_consequence(&theory, &measure, &goal_f(n), &budget).unwrap();
        let found = match report.status {
            ConsequenceStatus::Strong { witness } => {
                assert!(check_derivation(&witness, &theory).valid);
                UnitRational::one()
            }
            ConsequenceStatus::Feasible { credibility: c, witness } => {
                assert!(check_derivation(&witness, &theory).valid);
                c
            }
            ConsequenceStatus::NotFound { .. } => panic!("F({n}) should be feasible"),
        };
        assert_eq!(found, oracle, "best credibility at {n}");
    }

    // (b) exhaustive search to depth 12 finds no feasible proof of falsum
    let consistency =
        feasibly_consistent(&theory, &measure, &SearchBudget::with_depth(12)).unwrap();
    assert!(matches!(
        consistency.status,
        ConsistencyStatus::ConsistentWithinBudget { .. }
    ));

    // (c) the 2^10-step chain proving F(2^10) has credibility exactly zero
    let full = chain(&theory, 1 << 10);
    assert!(check_derivation(&full, &theory).valid);
    assert_eq!(full.conclusion, goal_f(1 << 10));
    let cred = credibility(&measure, &full).unwrap();
    assert!(cred.is_zero(), "the horizon chain must have credibility exactly 0");

    println!("PASS: criterion 1 (scaled feasible consistency, erosion 1/2^10)");
}

#[test]
fn acceptance_2_multiplication_closure_after_rescale() {
    let horizon = 1u64 << 10;
    for width in [8u64, 100, 1024] {
        let g = FisDescriptor::linear(width);
        // value-level weak closure of the base segment under m + n + 2
        let violation =
            check_weak_closure_values(&g, 2, |args| &args[0] + &args[1] + 2u32, horizon)
                .unwrap();
        assert!(violation.is_none(), "plus-two closure violated for width {width}");

        // the rescaled segment is weakly closed under multiplication:
        // degree-1 points below the horizon multiply into positive degree
        let rescaled = g.clone().log_rescale();
        let mut strong = Vec::new();
        for m in 0..=horizon {
            if rescaled.evaluate(&nat(m)).unwrap().is_one() {
                strong.push(m);
            }
        }
        let mut checked = 0u64;
        for &m in &strong {
            for &n in &strong {
                let product = nat(m) * nat(n);
                assert!(
                    !rescaled.evaluate(&product).unwrap().is_zero(),
                    "rescaled closure violated at {m} * {n} (width {width})"
                );
                checked += 1;
            }
        }
        assert!(checked > 0);

        // weak domination over the same range
        let report = dominates(&g, &rescaled, horizon).unwrap();
        assert!(report.weak, "rescale must weakly dominate at width {width}");
    }
    println!("PASS: criterion 2 (rescaled segments closed under multiplication)");
}

#[test]
fn acceptance_3_small_numbers_closed_under_addition() {
    let g = FisDescriptor::table(
        vec![
            (nat(0), ur(1, 1)),
            (nat(1), ur(1, 1)),
            (nat(2), ur(1, 1)),
            (nat(3), ur(3, 4)),
            (nat(4), ur(1, 2)),
        ],
        UnitRational::zero(),
    )
    .unwrap();
    // premises: degree 1 at 2, and value-level weak closure under product
    assert!(g.evaluate(&nat(2)).unwrap().is_one());
    let mult = check_weak_closure_values(&g, 2, |args| &args[0] * &args[1], 64).unwrap();
    assert!(mult.is_none(), "premise: weak multiplication closure");

    let small = g.small_cut();
    let mut strong = Vec::new();
    for m in 0..=64u64 {
        if small.evaluate(&nat(m)).unwrap().is_one() {
            strong.push(m);
        }
    }
    assert!(!strong.is_empty());
    for &m in &strong {
        for &n in &strong {
            assert!(
                !small.evaluate(&nat(m + n)).unwrap().is_zero(),
                "small-cut addition closure violated at {m} + {n}"
            );
        }
    }
    println!("PASS: criterion 3 (small-number cut closed under addition)");
}

#[test]
fn acceptance_4_radius_regression() {
    let interp = Interpretation::standard();
    let sig = Signature::unary();
    for width in [2u64, 5, 17] {
        let g = FisDescriptor::linear(width);
        let report = feasibility_radius(&g, &sig, &interp, 24).unwrap();
        assert_eq!(report.radius, nat(width - 1), "radius of linear width {width}");
        assert!(!report.horizon_limited);
    }
    let strong = defuzzify(&FisDescriptor::linear(5), DefuzzCut::Strong, 64).unwrap();
    assert_eq!(strong.element_count(), nat(2), "only 0 is strongly feasible");
    println!("PASS: criterion 4 (feasibility radius and strong-cut collapse)");
}

/// The three-theory corpus with bundled models for the soundness audit.
fn audit_corpus() -> Vec<(Theory, FuzzyStructure, CredibilityMeasure, SearchBudget)> {
    let mut corpus = Vec::new();

    // T1: crisp, zero decay: the classical limit
    let mut t1 = Theory::new("crisp");
    t1.add_axiom("pq", Formula::and(Formula::atom0("P"), Formula::atom0("Q"))).unwrap();
    t1.add_axiom("nr", Formula::not(Formula::atom0("R"))).unwrap();
    t1.add_axiom("e0", Formula::atom("E", vec![Term::zero()])).unwrap();
    t1.add_axiom(
        "ex",
        Formula::exists("x", Formula::atom("E", vec![Term::Var("x".into())])),
    )
    .unwrap();
    let zero_decay = TruthTransferPolicy::zero_decay();
    let mut m1 = FuzzyStructure::new("crisp", vec!["a".into(), "b".into()], zero_decay.clone())
        .unwrap();
    m1.add_constant("0", "a").unwrap();
    m1.add_function(
        "S",
        1,
        vec![
            (vec!["a".into()], "b".into()),
            (vec!["b".into()], "b".into()),
        ],
    )
    .unwrap();
    for (pred, degree) in [("P", 1u64), ("Q", 1), ("R", 0)] {
        m1.add_predicate(pred, 0, vec![(vec![], ur(degree, 1))], UnitRational::zero())
            .unwrap();
    }
    m1.add_predicate(
        "E",
        1,
        vec![(vec!["a".into()], UnitRational::one())],
        UnitRational::zero(),
    )
    .unwrap();
    let mut b1 = SearchBudget::with_depth(4);
    b1.max_formula_size = 5;
    b1.term_bound = 4;
    corpus.push((t1, m1, CredibilityMeasure::zero_decay(), b1));

    // T2: graded atoms under a per-rule policy (erosion on the eliminations)
    let per_rule = TruthTransferPolicy::zero_decay()
        .with_rule(RuleId::Mp, PolicyKind::Erosion(ur(1, 16)))
        .with_rule(RuleId::NotElim, PolicyKind::Erosion(ur(1, 16)));
    let mut t2 = Theory::new("graded");
    t2.add_axiom("f0", goal_f(0)).unwrap();
    t2.add_axiom("nf4", Formula::not(goal_f(4))).unwrap();
    t2.add_axiom("both", Formula::and(goal_f(0), goal_f(0))).unwrap();
    t2.add_axiom(
        "exf",
        Formula::exists("x", Formula::atom("F", vec![Term::Var("x".into())])),
    )
    .unwrap();
    let mut m2 = FuzzyStructure::saturating_cut("cut4", 4, per_rule.clone());
    let fis = FisDescriptor::linear(4);
    let mut entries = Vec::new();
    for k in 0..=4u64 {
        entries.push((vec![k.to_string()], fis.evaluate(&nat(k)).unwrap()));
    }
    entries.push((vec!["top".to_string()], UnitRational::zero()));
    m2.add_predicate("F", 1, entries, UnitRational::zero()).unwrap();
    let mut b2 = SearchBudget::with_depth(4);
    b2.max_formula_size = 8;
    b2.term_bound = 5;
    corpus.push((t2, m2, CredibilityMeasure::FromTtp(per_rule), b2));

    // T3: uniform erosion; only literal axioms can be strongly true
    let eroding = TruthTransferPolicy::erosion(ur(1, 8)).unwrap();
    let mut t3 = Theory::new("eroding");
    t3.add_axiom("a", Formula::atom0("A")).unwrap();
    t3.add_axiom("b", Formula::atom0("B")).unwrap();
    t3.add_axiom("nc", Formula::not(Formula::atom0("C"))).unwrap();
    let mut m3 =
        FuzzyStructure::new("abc", vec!["o".into()], eroding.clone()).unwrap();
    for (pred, degree) in [("A", 1u64), ("B", 1), ("C", 0)] {
        m3.add_predicate(pred, 0, vec![(vec![], ur(degree, 1))], UnitRational::zero())
            .unwrap();
    }
    let mut b3 = SearchBudget::with_depth(4);
    b3.max_formula_size = 7;
    b3.term_bound = 4;
    corpus.push((t3, m3, CredibilityMeasure::FromTtp(eroding), b3));

    corpus
}

#[test]
fn acceptance_5_soundness_exhaustive_at_depth_4() {
    let mut total = 0usize;
    for (theory, structure, measure, budget) in audit_corpus() {
        assert!(check_t_model(&structure, &theory).unwrap().is_model);
        let report = soundness_audit(&structure, &theory, &measure, &budget).unwrap();
        assert!(
            report.violations.is_empty(),
            "soundness violated in {}: {:?}",
            theory.name,
            report.violations.first().map(|v| (&v.conclusion, &v.degree, &v.credibility))
        );
        assert!(report.derivations_checked > 0);
        total += report.derivations_checked;
    }
    assert!(total > 100, "the corpus should exercise a real derivation count, got {total}");

    // the adversarial raw-table structure must be flagged
    let zero_decay = TruthTransferPolicy::zero_decay();
    let mut adversarial =
        FuzzyStructure::new("adversarial", vec!["a".into()], zero_decay).unwrap();
    for pred in ["P", "Q"] {
        adversarial
            .add_predicate(pred, 0, vec![(vec![], UnitRational::one())], UnitRational::zero())
            .unwrap();
    }
    let broken = Formula::and(Formula::atom0("P"), Formula::atom0("Q"));
    adversarial.add_override(broken.clone(), UnitRational::zero());
    let mut theory = Theory::new("pair");
    theory.add_axiom("p", Formula::atom0("P")).unwrap();
    theory.add_axiom("q", Formula::atom0("Q")).unwrap();
    let mut budget = SearchBudget::with_depth(3);
    budget.max_formula_size = 8;
    let report =
        soundness_audit(&adversarial, &theory, &CredibilityMeasure::zero_decay(), &budget)
            .unwrap();
    assert!(!report.violations.is_empty(), "override must be flagged");
    assert_eq!(report.violations[0].conclusion, broken);

    println!("PASS: criterion 5 (exhaustive soundness audit at depth <= 4, {total} derivations)");
}

/// Independent two-valued evaluator for the classical-limit comparison.
/// The structure is given directly as closures over element indices.
fn classical_eval(
    f: &Formula,
    env: &BTreeMap<String, usize>,
    domain: usize,
    pred: &dyn Fn(&str, &[usize]) -> bool,
    constant: &dyn Fn(&str) -> usize,
) -> bool {
    match f {
        Formula::Falsum => false,
        Formula::Atom { pred: name, args } => {
            let values: Vec<usize> = args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => env[v],
                    Term::App(c, a) if a.is_empty() => constant(c),
                    _ => panic!("classical oracle only handles constants and variables"),
                })
                .collect();
            pred(name, &values)
        }
        Formula::And(l, r) => {
            classical_eval(l, env, domain, pred, constant)
                && classical_eval(r, env, domain, pred, constant)
        }
        Formula::Not(b) => !classical_eval(b, env, domain, pred, constant),
        Formula::Implies(l, r) => {
            !classical_eval(l, env, domain, pred, constant)
                || classical_eval(r, env, domain, pred, constant)
        }
        Formula::Exists(v, b) => (0..domain).any(|d| {
            let mut inner = env.clone();
            inner.insert(v.clone(), d);
            classical_eval(b, &inner, domain, pred, constant)
        }),
    }
}

#[test]
fn acceptance_6_classical_limit() {
    // (i) zero-decay plus crisp tables reproduce two-valued truth on every
    // closed formula of depth <= 4 over a 3-element domain
    let domain_names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let mut structure =
        FuzzyStructure::new("crisp3", domain_names, TruthTransferPolicy::zero_decay()).unwrap();
    structure
        .add_predicate(
            "P",
            1,
            vec![
                (vec!["a".into()], UnitRational::one()),
                (vec!["b".into()], UnitRational::zero()),
                (vec!["c".into()], UnitRational::one()),
            ],
            UnitRational::zero(),
        )
        .unwrap();
    structure.add_constant("ca", "a").unwrap();

    let oracle_pred = |name: &str, args: &[usize]| -> bool {
        assert_eq!(name, "P");
        args[0] == 0 || args[0] == 2
    };
    let oracle_const = |name: &str| -> usize {
        assert_eq!(name, "ca");
        0
    };

    // closed and open pools by depth; open formulas may use the variable x
    let var_atom = Formula::atom("P", vec![Term::Var("x".into())]);
    let const_atom = Formula::atom("P", vec![Term::App("ca".into(), vec![])]);
    let mut closed: Vec<Formula> = vec![const_atom.clone()];
    let mut open: Vec<Formula> = vec![const_atom, var_atom];
    for _depth in 1..=3 {
        let mut next_closed = closed.clone();
        let mut next_open = open.clone();
        for f in &closed {
            next_closed.push(Formula::not(f.clone()));
        }
        for f in &closed {
            for g in &closed {
                next_closed.push(Formula::and(f.clone(), g.clone()));
            }
        }
        for f in &open {
            next_closed.push(Formula::exists("x", f.clone()));
            next_open.push(Formula::not(f.clone()));
        }
        for f in &open {
            for g in &open {
                next_open.push(Formula::and(f.clone(), g.clone()));
            }
        }
        for f in &open {
            next_open.push(Formula::exists("x", f.clone()));
        }
        next_closed.sort();
        next_closed.dedup();
        next_open.sort();
        next_open.dedup();
        closed = next_closed;
        open = next_open;
    }

    // every closed formula of depth <= 3 end-to-end through eval_degree
    let mut compared = 0u64;
    for f in &closed {
        let degree = structure.eval_degree(f).unwrap();
        let truth = classical_eval(f, &BTreeMap::new(), 3, &oracle_pred, &oracle_const);
        assert_eq!(!degree.is_zero(), truth, "disagreement on {f:?}");
        compared += 1;
    }

    // the depth-4 layer: negations, conjunctions and existentials over the
    // depth-3 pools, each one still evaluated end-to-end
    for f in &closed {
        let g = Formula::not(f.clone());
        let degree = structure.eval_degree(&g).unwrap();
        let truth = classical_eval(&g, &BTreeMap::new(), 3, &oracle_pred, &oracle_const);
        assert_eq!(!degree.is_zero(), truth, "disagreement on {g:?}");
        compared += 1;
    }
    for f in &open {
        let g = Formula::exists("x", f.clone());
        let degree = structure.eval_degree(&g).unwrap();
        let truth = classical_eval(&g, &BTreeMap::new(), 3, &oracle_pred, &oracle_const);
        assert_eq!(!degree.is_zero(), truth, "disagreement on {g:?}");
        compared += 1;
    }
    for f in &closed {
        for g in &closed {
            let h = Formula::and(f.clone(), g.clone());
            let degree = structure.eval_degree(&h).unwrap();
            let truth = classical_eval(&h, &BTreeMap::new(), 3, &oracle_pred, &oracle_const);
            assert_eq!(!degree.is_zero(), truth, "disagreement on {h:?}");
            compared += 1;
        }
    }
    assert!(compared > 3_000_000, "expected millions of comparisons, got {compared}");

    // (ii) with zero decay, feasible consequence coincides with an
    // independent bounded classical prover on the same budget
    let measure = CredibilityMeasure::zero_decay();
    for (theory, _, _, budget) in audit_corpus() {
        let mut universe = build_universe(&theory, None, &budget).unwrap();
        and_forward_close(&mut universe, budget.max_depth, &budget).unwrap();
        let formulas: Vec<Formula> = universe.formulas().cloned().collect();

        // independent prover: boolean forward chaining to a fixpoint
        let mut derived: BTreeSet<Formula> = theory
            .expanded_axioms()
            .into_iter()
            .map(|(_, f)| f)
            .filter(|f| universe.contains(f))
            .collect();
        for _round in 0..budget.max_depth {
            let mut fresh: Vec<Formula> = Vec::new();
            for f in &formulas {
                if derived.contains(f) {
                    continue;
                }
                let provable = match f {
                    Formula::And(l, r) => derived.contains(l) && derived.contains(r),
                    Formula::Exists(v, body) => (0..budget.term_bound as u64).any(|k| {
                        let mut env = BTreeMap::new();
                        env.insert(v.clone(), Term::Num(nat(k)));
                        derived.contains(&body.substitute(&env))
                    }),
                    _ => false,
                } || derived.iter().any(|d| match d {
                    // eliminations and modus ponens from anything derived
                    Formula::And(l, r) => **l == *f || **r == *f,
                    Formula::Implies(l, r) => **r == *f && derived.contains(l),
                    _ => false,
                }) || (*f == Formula::Falsum
                    && derived.iter().any(|d| {
                        matches!(d, Formula::Not(inner) if derived.contains(inner))
                    }));
                if provable {
                    fresh.push(f.clone());
                }
            }
            if fresh.is_empty() {
                break;
            }
            derived.extend(fresh);
        }

        for goal in &formulas {
            let report = feasible_consequence(&theory, &measure, goal, &budget).unwrap();
            let found = report.status.found();
            let oracle = derived.contains(goal);
            assert_eq!(
                found, oracle,
                "prover disagreement on {goal:?} in {}",
                theory.name
            );
        }
    }

    println!("PASS: criterion 6 (classical limit, {compared} formula comparisons)");
}

#[test]
fn acceptance_7_non_transitivity_at_the_horizon() {
    let theory = feasibility_theory(10);
    let measure = erosion(1, 1024);

    // F(2^10 - 1) is feasible
    let barely = chain(&theory, (1 << 10) - 1);
    let barely_cred = credibility(&measure, &barely).unwrap();
    assert_eq!(barely_cred, ur(1, 1024));

    // its step axiom is strong
    let step = Derivation::schema_instance(&theory, "step", vec![nat((1 << 10) - 1)]).unwrap();
    assert!(credibility(&measure, &step).unwrap().is_one());

    // merging the two feasible proofs falls off the horizon
    let merged = Derivation::mp(step, barely);
    assert!(check_derivation(&merged, &theory).valid);
    assert_eq!(merged.conclusion, goal_f(1 << 10));
    let merged_cred = credibility(&measure, &merged).unwrap();
    assert!(merged_cred.is_zero(), "feasible modus ponens fails at the horizon");

    println!("PASS: criterion 7 (non-transitivity exhibit at the horizon)");
}

#[test]
fn acceptance_8_policy_validator() {
    // admissible: erosion and product pass the grid at denominator 16
    for policy in [
        TruthTransferPolicy::erosion(ur(1, 1024)).unwrap(),
        TruthTransferPolicy::product(),
    ] {
        let report = validate_ttp(&policy, 16).unwrap();
        assert!(report.ok, "{policy:?} must pass: {:?}", report.violations.first());
    }

    // three violators, one per condition, each rejected with a witness point
    let cases = [
        (
            TruthTransferPolicy::uniform(PolicyKind::Constant(ur(1, 2))),
            TtpCondition::VanishesAtZero,
        ),
        (
            TruthTransferPolicy::uniform(PolicyKind::Erosion(UnitRational::one())),
            TtpCondition::PositiveAtOne,
        ),
        (
            TruthTransferPolicy::uniform(PolicyKind::MaxPremise),
            TtpCondition::BoundedByMin,
        ),
    ];
    for (policy, condition) in cases {
        let report = validate_ttp(&policy, 16).unwrap();
        assert!(!report.ok);
        let witness = report
            .violations
            .iter()
            .find(|v| v.condition == condition)
            .unwrap_or_else(|| panic!("expected a {condition:?} witness"));
        assert!(!witness.point.is_empty() || witness.rule.arity() == 0);
    }

    println!("PASS: criterion 8 (policy validator, grid denominator 16)");
}

/// Tiny deterministic generator.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

#[test]
fn acceptance_9_normalization_family() {
    let mut theory = Theory::new("detours");
    theory.add_axiom("a", Formula::atom0("A")).unwrap();
    theory.add_axiom("b", Formula::atom0("B")).unwrap();
    theory.add_axiom("na", Formula::not(Formula::atom0("A"))).unwrap();

    let base = |rng: &mut XorShift, theory: &Theory| -> Derivation {
        match rng.below(3) {
            0 => Derivation::axiom(theory, "a").unwrap(),
            1 => Derivation::axiom(theory, "b").unwrap(),
            _ => Derivation::and_intro(
                Derivation::axiom(theory, "a").unwrap(),
                Derivation::axiom(theory, "b").unwrap(),
            ),
        }
    };

    let mut rng = XorShift(0x5eed_cafe_f00d_0001);
    let mut families = 0usize;
    for case in 0..100 {
        // start from a base proof or a falsum proof, then pile on detours
        let mut proof = if rng.below(4) == 0 {
            Derivation::not_elim(
                Derivation::axiom(&theory, "a").unwrap(),
                Derivation::axiom(&theory, "na").unwrap(),
            )
        } else {
            base(&mut rng, &theory)
        };
        let wraps = 1 + rng.below(4);
        for w in 0..wraps {
            proof = match rng.below(3) {
                0 => Derivation::and_elim_l(Derivation::and_intro(
                    proof,
                    base(&mut rng, &theory),
                )),
                1 => Derivation::and_elim_r(Derivation::and_intro(
                    base(&mut rng, &theory),
                    proof,
                )),
                _ => {
                    // a negation detour around a fresh falsum proof, glued
                    // in front of the current proof through a conjunction
                    let label = format!("u{case}_{w}");
                    let bot = Derivation::not_elim(
                        Derivation::assumption(&label, Formula::atom0("A")),
                        Derivation::axiom(&theory, "na").unwrap(),
                    );
                    let detour = Derivation::not_elim(
                        Derivation::axiom(&theory, "a").unwrap(),
                        Derivation::not_intro(&label, Formula::atom0("A"), bot),
                    );
                    // keep the conclusion: elim-l of (proof and detour-bot)
                    let _ = detour.conclusion.clone();
                    Derivation::and_elim_l(Derivation::and_intro(proof, detour))
                }
            };
        }

        assert!(check_derivation(&proof, &theory).valid, "generated proof {case}");
        let before = proof.conclusion.clone();
        let (normal, trace) = normalize_trace(&proof).unwrap();
        assert_eq!(normal.conclusion, before, "conclusion preserved ({case})");
        assert!(check_derivation(&normal, &theory).valid, "normal form valid ({case})");
        assert!(
            trace.windows(2).all(|w| w[1] < w[0]),
            "node count strictly decreases per step ({case}): {trace:?}"
        );
        assert!(trace.len() >= 2, "the family must actually contain detours ({case})");
        let (again, idem_trace) = normalize_trace(&normal).unwrap();
        assert_eq!(again, normal, "idempotence ({case})");
        assert_eq!(idem_trace.len(), 1);
        families += 1;
    }
    assert_eq!(families, 100);

    println!("PASS: criterion 9 (normalization family of 100 detour-laden derivations)");
}

/// The term-model construction at the Parikh scale, exercised alongside the
/// acceptance criteria: chain credibilities become degrees.
#[test]
fn term_model_degrees_match_chain_credibilities() {
    let theory = feasibility_theory(10);
    let measure = erosion(1, 1024);
    let mut budget = SearchBudget::with_depth(1100);
    budget.term_bound = 32;
    let model = build_term_model(&theory, &measure, &budget, CompletionPolicy::AdjoinNegation)
        .unwrap();
    for n in [0u64, 1, 10, 31, 32] {
        let degree = model.structure.eval_degree(&goal_f(n)).unwrap();
        assert_eq!(degree, UnitRational::one_minus_ratio(&nat(n), &nat(1024)).unwrap());
    }
    // the denied endpoint lands in the collapsed class: degree 0
    assert!(model.structure.eval_degree(&goal_f(1 << 10)).unwrap().is_zero());
    // degree equals credibility along the chain (equality attained)
    for n in [1u64, 10, 31] {
        let cred = credibility(&measure, &chain(&theory, n)).unwrap();
        assert_eq!(model.structure.eval_degree(&goal_f(n)).unwrap(), cred);
    }
    // the fading step instances are reported, not swallowed
    assert!(!model.model_report.is_model);
    assert!(model.model_report.failures.iter().all(|(n, _)| n.starts_with("step[")));
    println!("PASS: term-model degrees equal best chain credibilities");
}

/// Built-in constructors satisfy the segment conditions at depth; kept with
/// the acceptance suite because it sweeps a 2^12 horizon.
#[test]
fn builtins_pass_the_segment_check_at_depth() {
    for g in [
        FisDescriptor::linear(4096),
        FisDescriptor::SharpTower { index: 4 },
        FisDescriptor::linear(5).log_rescale(),
        FisDescriptor::linear(64).shifted(nat(4)).small_cut(),
    ] {
        let report = check_fis(&g, 1 << 12).unwrap();
        assert!(report.is_fis, "{g:?}: {:?}", report.first_violation);
    }
    println!("PASS: built-in constructors are segments out to 2^12");
}
