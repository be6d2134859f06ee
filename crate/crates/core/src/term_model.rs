//! The desk-scale term model of a feasibly consistent theory.
//!
//! The domain collapses closed-term values at a bound: classes `0..=bound`
//! plus one absorbing top, with saturating arithmetic acting on
//! representatives. Each atomic sentence receives the supremum of the
//! credibilities of its discovered feasible proofs; atoms whose negation has
//! a strong proof are pinned to 0; everything undecided is completed by
//! policy (the default adjoins the negation, i.e. degree 0).

use crate::formula::Formula;
use crate::measure::CredibilityMeasure;
use crate::rat::UnitRational;
use crate::search::{saturate_theory, SearchBudget, SearchError};
use crate::semantics::{check_t_model, FuzzyStructure, SemanticsError, TModelReport};
use crate::term::{eval_term, Interpretation, TermError};
use crate::theory::Theory;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermModelError {
    #[error("term models need a policy-generated credibility measure")]
    NonTtpMeasure,
    #[error("theory is refuted within the budget: falsum has credibility {credibility}")]
    RefutedTheory { credibility: UnitRational },
    #[error("predicate `{0}` is used with conflicting arities")]
    PredicateArityConflict(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// What to do with atoms that have no discovered proof either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionPolicy {
    /// Degree 0: the negation joins the theory strongly. The default.
    AdjoinNegation,
    /// Degree 1: the atom itself joins strongly.
    AdjoinAffirmation,
}

/// The built structure together with the final model check. Axioms that are
/// not strongly satisfied are reported, not swallowed: a stepwise
/// implication axiom over strictly fading degrees can never reach degree 1,
/// at any budget.
#[derive(Debug, Clone)]
pub struct TermModel {
    pub structure: FuzzyStructure,
    pub model_report: TModelReport,
}

pub fn build_term_model(
    theory: &Theory,
    measure: &CredibilityMeasure,
    budget: &SearchBudget,
    completion: CompletionPolicy,
) -> Result<TermModel, TermModelError> {
    let policy = measure.ttp().ok_or(TermModelError::NonTtpMeasure)?;
    let outcome = saturate_theory(theory, policy, None, budget)?;

    // feasible consistency is the precondition of the whole construction
    if let Some((_, entry)) = outcome.best(&Formula::Falsum) {
        if !entry.credibility.is_zero() {
            return Err(TermModelError::RefutedTheory {
                credibility: entry.credibility.clone(),
            });
        }
    }

    let bound = budget.term_bound;
    let top = bound + 1;
    let mut structure = FuzzyStructure::saturating_cut(
        &format!("term-model-{}", theory.name),
        bound,
        policy.clone(),
    );

    let interp = Interpretation::standard();
    let class_of = |args: &[crate::term::Term]| -> Result<Option<Vec<usize>>, TermModelError> {
        let mut tuple = Vec::with_capacity(args.len());
        for a in args {
            if !a.is_closed() {
                return Ok(None);
            }
            let value = eval_term(a, &interp)?;
            tuple.push(match usize::try_from(&value) {
                Ok(k) if k <= bound => k,
                _ => top,
            });
        }
        Ok(Some(tuple))
    };

    // supremum of discovered proof credibilities per atom class, and the
    // strong-negation pins
    let mut arity: BTreeMap<String, usize> = BTreeMap::new();
    let mut positive: BTreeMap<(String, Vec<usize>), UnitRational> = BTreeMap::new();
    let mut negated: BTreeMap<(String, Vec<usize>), UnitRational> = BTreeMap::new();

    let mut visit = |formula: &Formula, cred: &UnitRational| -> Result<(), TermModelError> {
        let (target, pred, args) = match formula {
            Formula::Atom { pred, args } => (&mut positive, pred, args),
            Formula::Not(inner) => match &**inner {
                Formula::Atom { pred, args } => (&mut negated, pred, args),
                _ => return Ok(()),
            },
            _ => return Ok(()),
        };
        if pred == "=" {
            return Ok(());
        }
        let Some(tuple) = class_of(args)? else {
            return Ok(());
        };
        match arity.get(pred.as_str()) {
            Some(&a) if a != tuple.len() => {
                return Err(TermModelError::PredicateArityConflict(pred.clone()))
            }
            Some(_) => {}
            None => {
                arity.insert(pred.clone(), tuple.len());
            }
        }
        let key = (pred.clone(), tuple);
        match target.get(&key) {
            Some(existing) if existing >= cred => {}
            _ => {
                target.insert(key, cred.clone());
            }
        }
        Ok(())
    };

    let mut formulas: Vec<&Formula> = Vec::new();
    for (f, _) in outcome.hilbert.entries() {
        formulas.push(f);
    }
    for (f, _) in outcome.nd.entries() {
        formulas.push(f);
    }
    formulas.sort();
    formulas.dedup();
    for f in formulas {
        let (_, entry) = outcome.best(f).expect("listed formula has an entry");
        visit(f, &entry.credibility)?;
    }

    // mention-only predicates (never derived) still need an interpretation
    for (_, axiom_formula) in theory.expanded_axioms_capped(1 << 22).map_err(SemanticsError::from)? {
        collect_predicates(&axiom_formula, &mut arity)?;
    }

    let default = match completion {
        CompletionPolicy::AdjoinNegation => UnitRational::zero(),
        CompletionPolicy::AdjoinAffirmation => UnitRational::one(),
    };

    for (pred, pred_arity) in &arity {
        let mut entries: BTreeMap<Vec<usize>, UnitRational> = BTreeMap::new();
        for ((p, tuple), cred) in &positive {
            if p == pred {
                entries.insert(tuple.clone(), cred.clone());
            }
        }
        // a strong proof of the negation pins the atom to 0, whatever the
        // positive supremum said (the collapse can identify a provable atom
        // with a denied one; denial wins)
        for ((p, tuple), cred) in &negated {
            if p == pred && cred.is_one() {
                entries.insert(tuple.clone(), UnitRational::zero());
            }
        }
        structure.add_predicate_raw(pred, *pred_arity, entries, default.clone());
    }

    let model_report = check_t_model(&structure, theory)?;
    Ok(TermModel { structure, model_report })
}

fn collect_predicates(
    formula: &Formula,
    arity: &mut BTreeMap<String, usize>,
) -> Result<(), TermModelError> {
    match formula {
        Formula::Falsum => Ok(()),
        Formula::Atom { pred, args } => {
            if pred == "=" {
                return Ok(());
            }
            match arity.get(pred.as_str()) {
                Some(&a) if a != args.len() => {
                    Err(TermModelError::PredicateArityConflict(pred.clone()))
                }
                Some(_) => Ok(()),
                None => {
                    arity.insert(pred.clone(), args.len());
                    Ok(())
                }
            }
        }
        Formula::And(l, r) | Formula::Implies(l, r) => {
            collect_predicates(l, arity)?;
            collect_predicates(r, arity)
        }
        Formula::Not(b) | Formula::Exists(_, b) => collect_predicates(b, arity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::nat;
    use crate::term::Term;
    use crate::theory::feasibility_theory;
    use crate::ttp::TruthTransferPolicy;

    fn ur(n: u64, d: u64) -> UnitRational {
        UnitRational::from_u64_ratio(n, d).unwrap()
    }

    #[test]
    fn axiom_atom_gets_full_degree() {
        let mut t = Theory::new("p");
        t.add_axiom("p0", Formula::atom("P", vec![Term::zero()])).unwrap();
        let model = build_term_model(
            &t,
            &CredibilityMeasure::zero_decay(),
            &SearchBudget::with_depth(4),
            CompletionPolicy::AdjoinNegation,
        )
        .unwrap();
        assert!(model.model_report.is_model);
        let deg = model
            .structure
            .eval_degree(&Formula::atom("P", vec![Term::zero()]))
            .unwrap();
        assert!(deg.is_one());
    }

    #[test]
    fn chain_credibilities_become_degrees() {
        let t = feasibility_theory(10);
        let m = CredibilityMeasure::FromTtp(
            TruthTransferPolicy::erosion(ur(1, 1024)).unwrap(),
        );
        let mut budget = SearchBudget::with_depth(1100);
        budget.term_bound = 32;
        let model =
            build_term_model(&t, &m, &budget, CompletionPolicy::AdjoinNegation).unwrap();
        for n in [0u64, 1, 7, 31, 32] {
            let deg = model
                .structure
                .eval_degree(&Formula::atom("F", vec![Term::num(n)]))
                .unwrap();
            assert_eq!(
                deg,
                UnitRational::one_minus_ratio(&nat(n), &nat(1024)).unwrap(),
                "degree at {n}"
            );
        }
        // the denied endpoint collapses onto the top class: degree 0 there
        let top_deg = model
            .structure
            .eval_degree(&Formula::atom("F", vec![Term::num(1 << 10)]))
            .unwrap();
        assert!(top_deg.is_zero());
        // literal axioms hold; the graded step instances cannot, and the
        // report says exactly that
        assert!(!model.model_report.is_model);
        assert!(model
            .model_report
            .failures
            .iter()
            .all(|(name, _)| name.starts_with("step[")));
    }

    #[test]
    fn undecided_atoms_follow_the_completion_policy() {
        let mut t = Theory::new("q");
        t.add_axiom("p0", Formula::atom("P", vec![Term::zero()])).unwrap();
        t.add_axiom("nq", Formula::not(Formula::atom0("Q"))).unwrap();
        // R is mentioned but never derivable either way
        t.add_axiom(
            "r-or-not",
            Formula::not(Formula::and(Formula::atom0("R"), Formula::not(Formula::atom0("R")))),
        )
        .unwrap();
        let model = build_term_model(
            &t,
            &CredibilityMeasure::zero_decay(),
            &SearchBudget::with_depth(4),
            CompletionPolicy::AdjoinNegation,
        )
        .unwrap();
        let deg_r = model.structure.eval_degree(&Formula::atom0("R")).unwrap();
        assert!(deg_r.is_zero());
        let deg_q = model.structure.eval_degree(&Formula::atom0("Q")).unwrap();
        assert!(deg_q.is_zero());
    }

    #[test]
    fn term_models_round_trip_as_structure_files() {
        let mut t = Theory::new("rt");
        t.add_axiom("p0", Formula::atom("P", vec![Term::zero()])).unwrap();
        t.add_axiom("nq", Formula::not(Formula::atom0("Q"))).unwrap();
        let mut budget = SearchBudget::with_depth(4);
        budget.term_bound = 3;
        let model = build_term_model(
            &t,
            &CredibilityMeasure::zero_decay(),
            &budget,
            CompletionPolicy::AdjoinNegation,
        )
        .unwrap();
        let text = crate::syntax::print_structure(&model.structure);
        let reparsed = crate::syntax::parse_structure(&text).unwrap();
        assert_eq!(reparsed, model.structure);
    }

    #[test]
    fn refuted_theories_are_rejected() {
        let mut t = Theory::new("bad");
        t.add_axiom("a", Formula::atom0("A")).unwrap();
        t.add_axiom("na", Formula::not(Formula::atom0("A"))).unwrap();
        let err = build_term_model(
            &t,
            &CredibilityMeasure::zero_decay(),
            &SearchBudget::with_depth(4),
            CompletionPolicy::AdjoinNegation,
        );
        assert!(matches!(err, Err(TermModelError::RefutedTheory { .. })));
    }

    #[test]
    fn lowering_the_budget_never_raises_a_degree() {
        let t = feasibility_theory(6);
        let m = CredibilityMeasure::FromTtp(
            TruthTransferPolicy::erosion(ur(1, 64)).unwrap(),
        );
        let mut degrees = Vec::new();
        for depth in [4usize, 16, 80] {
            let mut budget = SearchBudget::with_depth(depth);
            budget.term_bound = 8;
            let model =
                build_term_model(&t, &m, &budget, CompletionPolicy::AdjoinNegation).unwrap();
            let row: Vec<UnitRational> = (0..=8u64)
                .map(|n| {
                    model
                        .structure
                        .eval_degree(&Formula::atom("F", vec![Term::num(n)]))
                        .unwrap()
                })
                .collect();
            degrees.push(row);
        }
        for window in degrees.windows(2) {
            for (lo, hi) in window[0].iter().zip(window[1].iter()) {
                assert!(lo <= hi, "budget increase must not lower degrees");
            }
        }
    }
}
