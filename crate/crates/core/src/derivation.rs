//! Derivations: finite trees of rule applications, and the checking kernel.
//!
//! Two calculi share the tree shape and never mix inside one derivation:
//!
//! * the Hilbert calculus: modus ponens over axioms plus the logical axiom
//!   schemas K, S and double-negation elimination, with `¬A` usable wherever
//!   an implication `A ⇒ ⊥` is expected;
//! * the natural-deduction fragment for `{∧, ¬, ∃}`: conjunction
//!   introduction/elimination, negation elimination, negation introduction
//!   with labelled assumption discharge, and existential introduction.

use crate::formula::Formula;
use crate::nat::Natural;
use crate::theory::Theory;

use std::fmt;

/// Rule identifiers, in the fixed tie-breaking order used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Axiom,
    Mp,
    AndIntro,
    AndElimL,
    AndElimR,
    NotElim,
    NotIntro,
    ExistsIntro,
}

impl RuleId {
    pub fn arity(self) -> usize {
        match self {
            RuleId::Axiom => 0,
            RuleId::Mp | RuleId::AndIntro | RuleId::NotElim => 2,
            RuleId::AndElimL | RuleId::AndElimR | RuleId::NotIntro | RuleId::ExistsIntro => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Axiom => "axiom",
            RuleId::Mp => "mp",
            RuleId::AndIntro => "and-intro",
            RuleId::AndElimL => "and-elim-l",
            RuleId::AndElimR => "and-elim-r",
            RuleId::NotElim => "not-elim",
            RuleId::NotIntro => "not-intro",
            RuleId::ExistsIntro => "exists-intro",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// What a leaf stands on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeafKind {
    /// A named theory axiom.
    TheoryAxiom(String),
    /// A schema instance, identified by name and variable values.
    SchemaInstance(String, Vec<Natural>),
    /// Hilbert logical axiom `A ⇒ (B ⇒ A)`.
    LogicalK(Formula, Formula),
    /// Hilbert logical axiom `(A ⇒ (B ⇒ C)) ⇒ ((A ⇒ B) ⇒ (A ⇒ C))`.
    LogicalS(Formula, Formula, Formula),
    /// Hilbert logical axiom `¬¬A ⇒ A`.
    LogicalDne(Formula),
    /// A labelled assumption, to be discharged by negation introduction.
    Assumption(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf(LeafKind),
    Rule {
        id: RuleId,
        premises: Vec<Derivation>,
        /// Assumption label discharged here (negation introduction only).
        discharge: Option<String>,
    },
}

/// A derivation tree; every node carries its conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Formula,
    pub node: Node,
}

impl Derivation {
    pub fn axiom(theory: &Theory, name: &str) -> Option<Derivation> {
        theory.axiom(name).map(|a| Derivation {
            conclusion: a.formula.clone(),
            node: Node::Leaf(LeafKind::TheoryAxiom(name.into())),
        })
    }

    pub fn schema_instance(
        theory: &Theory,
        name: &str,
        values: Vec<Natural>,
    ) -> Option<Derivation> {
        let conclusion = theory.instantiate_schema(name, &values).ok()?;
        Some(Derivation {
            conclusion,
            node: Node::Leaf(LeafKind::SchemaInstance(name.into(), values)),
        })
    }

    pub fn assumption(label: &str, formula: Formula) -> Derivation {
        Derivation {
            conclusion: formula,
            node: Node::Leaf(LeafKind::Assumption(label.into())),
        }
    }

    pub fn mp(implication: Derivation, antecedent: Derivation) -> Derivation {
        let conclusion = implication
            .conclusion
            .as_implication()
            .map(|(_, c)| c.to_formula())
            .unwrap_or(Formula::Falsum);
        Derivation {
            conclusion,
            node: Node::Rule { id: RuleId::Mp, premises: vec![implication, antecedent], discharge: None },
        }
    }

    pub fn and_intro(left: Derivation, right: Derivation) -> Derivation {
        let conclusion = Formula::and(left.conclusion.clone(), right.conclusion.clone());
        Derivation {
            conclusion,
            node: Node::Rule { id: RuleId::AndIntro, premises: vec![left, right], discharge: None },
        }
    }

    pub fn and_elim_l(premise: Derivation) -> Derivation {
        let conclusion = match &premise.conclusion {
            Formula::And(l, _) => (**l).clone(),
            _ => Formula::Falsum,
        };
        Derivation {
            conclusion,
            node: Node::Rule { id: RuleId::AndElimL, premises: vec![premise], discharge: None },
        }
    }

    pub fn and_elim_r(premise: Derivation) -> Derivation {
        let conclusion = match &premise.conclusion {
            Formula::And(_, r) => (**r).clone(),
            _ => Formula::Falsum,
        };
        Derivation {
            conclusion,
            node: Node::Rule { id: RuleId::AndElimR, premises: vec![premise], discharge: None },
        }
    }

    pub fn not_elim(affirmation: Derivation, negation: Derivation) -> Derivation {
        Derivation {
            conclusion: Formula::Falsum,
            node: Node::Rule {
                id: RuleId::NotElim,
                premises: vec![affirmation, negation],
                discharge: None,
            },
        }
    }

    pub fn not_intro(label: &str, assumed: Formula, falsum_proof: Derivation) -> Derivation {
        Derivation {
            conclusion: Formula::not(assumed),
            node: Node::Rule {
                id: RuleId::NotIntro,
                premises: vec![falsum_proof],
                discharge: Some(label.into()),
            },
        }
    }

    pub fn exists_intro(target: Formula, premise: Derivation) -> Derivation {
        Derivation {
            conclusion: target,
            node: Node::Rule { id: RuleId::ExistsIntro, premises: vec![premise], discharge: None },
        }
    }

    pub fn node_count(&self) -> usize {
        match &self.node {
            Node::Leaf(_) => 1,
            Node::Rule { premises, .. } => {
                1 + premises.iter().map(Derivation::node_count).sum::<usize>()
            }
        }
    }

    /// Total symbol occurrences over all conclusions in the tree; the
    /// standard number-of-symbols complexity measure.
    pub fn symbol_count(&self) -> Natural {
        let own = self.conclusion.symbol_count();
        match &self.node {
            Node::Leaf(_) => own,
            Node::Rule { premises, .. } => premises
                .iter()
                .fold(own, |acc, p| acc + p.symbol_count()),
        }
    }

    pub fn rule(&self) -> RuleId {
        match &self.node {
            Node::Leaf(_) => RuleId::Axiom,
            Node::Rule { id, .. } => *id,
        }
    }

    /// Which calculus the derivation uses, if consistent.
    pub fn calculus(&self) -> Option<Calculus> {
        let mut seen = Calculus::Either;
        if self.collect_calculus(&mut seen) {
            Some(seen)
        } else {
            None
        }
    }

    fn collect_calculus(&self, seen: &mut Calculus) -> bool {
        let own = match &self.node {
            Node::Leaf(kind) => match kind {
                LeafKind::TheoryAxiom(_) | LeafKind::SchemaInstance(..) => Calculus::Either,
                LeafKind::LogicalK(..) | LeafKind::LogicalS(..) | LeafKind::LogicalDne(_) => {
                    Calculus::Hilbert
                }
                LeafKind::Assumption(_) => Calculus::NaturalDeduction,
            },
            Node::Rule { id, .. } => match id {
                RuleId::Axiom => Calculus::Either,
                RuleId::Mp => Calculus::Hilbert,
                _ => Calculus::NaturalDeduction,
            },
        };
        if !seen.absorb(own) {
            return false;
        }
        match &self.node {
            Node::Leaf(_) => true,
            Node::Rule { premises, .. } => {
                premises.iter().all(|p| p.collect_calculus(seen))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Calculus {
    Either,
    Hilbert,
    NaturalDeduction,
}

impl Calculus {
    fn absorb(&mut self, other: Calculus) -> bool {
        match other {
            Calculus::Either => true,
            o => match *self {
                Calculus::Either => {
                    *self = o;
                    true
                }
                current => current == o,
            },
        }
    }
}

/// Outcome of checking: valid, or a path to the first offending node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    /// Child indices from the root to the failing node.
    pub path: Vec<usize>,
    pub reason: Option<String>,
}

impl CheckReport {
    fn ok() -> CheckReport {
        CheckReport { valid: true, path: Vec::new(), reason: None }
    }

    fn fail(path: Vec<usize>, reason: String) -> CheckReport {
        CheckReport { valid: false, path, reason: Some(reason) }
    }
}

/// Check every node of a derivation against a theory.
///
/// Leaves must be theory axioms, in-bound schema instances, Hilbert logical
/// axioms, or assumptions that some negation introduction above them
/// discharges. Rule nodes must conclude exactly what their rule licenses,
/// and the tree must stay inside a single calculus.
pub fn check_derivation(derivation: &Derivation, theory: &Theory) -> CheckReport {
    if derivation.calculus().is_none() {
        return CheckReport::fail(
            Vec::new(),
            "derivation mixes Hilbert and natural-deduction rules".into(),
        );
    }
    let mut open: Vec<(String, Formula)> = Vec::new();
    let report = check_node(derivation, theory, &mut Vec::new(), &mut open);
    if !report.valid {
        return report;
    }
    if let Some((label, _)) = open.first() {
        return CheckReport::fail(
            Vec::new(),
            format!("assumption `{label}` is never discharged"),
        );
    }
    CheckReport::ok()
}

fn check_node(
    d: &Derivation,
    theory: &Theory,
    path: &mut Vec<usize>,
    open: &mut Vec<(String, Formula)>,
) -> CheckReport {
    match &d.node {
        Node::Leaf(kind) => check_leaf(d, kind, theory, path, open),
        Node::Rule { id, premises, discharge } => {
            if premises.len() != id.arity() {
                return CheckReport::fail(
                    path.clone(),
                    format!("{id} expects {} premises, got {}", id.arity(), premises.len()),
                );
            }
            if discharge.is_some() && *id != RuleId::NotIntro {
                return CheckReport::fail(path.clone(), format!("{id} cannot discharge"));
            }
            // premises first: assumptions in them become visible here
            let mut inner_open: Vec<(String, Formula)> = Vec::new();
            for (i, p) in premises.iter().enumerate() {
                path.push(i);
                let r = check_node(p, theory, path, &mut inner_open);
                path.pop();
                if !r.valid {
                    return r;
                }
            }
            let shape_ok = check_shape(d, *id, premises, discharge, &mut inner_open, path);
            if let Some(fail) = shape_ok {
                return fail;
            }
            open.append(&mut inner_open);
            CheckReport::ok()
        }
    }
}

fn check_leaf(
    d: &Derivation,
    kind: &LeafKind,
    theory: &Theory,
    path: &mut Vec<usize>,
    open: &mut Vec<(String, Formula)>,
) -> CheckReport {
    let fail = |reason: String, path: &Vec<usize>| CheckReport::fail(path.clone(), reason);
    match kind {
        LeafKind::TheoryAxiom(name) => match theory.axiom(name) {
            Some(ax) if ax.formula == d.conclusion => CheckReport::ok(),
            Some(_) => fail(format!("leaf does not match axiom `{name}`"), path),
            None => fail(format!("`{name}` is not an axiom of {}", theory.name), path),
        },
        LeafKind::SchemaInstance(name, values) => {
            match theory.instantiate_schema(name, values) {
                Ok(f) if f == d.conclusion => CheckReport::ok(),
                Ok(_) => fail(format!("leaf does not match instance of `{name}`"), path),
                Err(e) => fail(e.to_string(), path),
            }
        }
        LeafKind::LogicalK(a, b) => {
            let want = Formula::implies(
                a.clone(),
                Formula::implies(b.clone(), a.clone()),
            );
            if want == d.conclusion {
                CheckReport::ok()
            } else {
                fail("malformed K axiom".into(), path)
            }
        }
        LeafKind::LogicalS(a, b, c) => {
            let want = Formula::implies(
                Formula::implies(a.clone(), Formula::implies(b.clone(), c.clone())),
                Formula::implies(
                    Formula::implies(a.clone(), b.clone()),
                    Formula::implies(a.clone(), c.clone()),
                ),
            );
            if want == d.conclusion {
                CheckReport::ok()
            } else {
                fail("malformed S axiom".into(), path)
            }
        }
        LeafKind::LogicalDne(a) => {
            let want = Formula::implies(
                Formula::not(Formula::not(a.clone())),
                a.clone(),
            );
            if want == d.conclusion {
                CheckReport::ok()
            } else {
                fail("malformed double-negation axiom".into(), path)
            }
        }
        LeafKind::Assumption(label) => {
            // the same label may occur several times; one discharge takes
            // them all, provided the assumed formula agrees
            open.push((label.clone(), d.conclusion.clone()));
            CheckReport::ok()
        }
    }
}

fn check_shape(
    d: &Derivation,
    id: RuleId,
    premises: &[Derivation],
    discharge: &Option<String>,
    open: &mut Vec<(String, Formula)>,
    path: &[usize],
) -> Option<CheckReport> {
    let fail = |reason: String| Some(CheckReport::fail(path.to_vec(), reason));
    match id {
        RuleId::Axiom => fail("axiom rule cannot have a rule node".into()),
        RuleId::Mp => {
            let (antecedent, consequent) = match premises[0].conclusion.as_implication() {
                Some(pair) => pair,
                None => return fail("left premise of mp is not an implication".into()),
            };
            if antecedent != &premises[1].conclusion {
                return fail("mp premise does not match the antecedent".into());
            }
            if !consequent.matches(&d.conclusion) {
                return fail("mp conclusion does not match the consequent".into());
            }
            None
        }
        RuleId::AndIntro => {
            let want = Formula::and(
                premises[0].conclusion.clone(),
                premises[1].conclusion.clone(),
            );
            if want != d.conclusion {
                return fail("and-intro conclusion mismatch".into());
            }
            None
        }
        RuleId::AndElimL | RuleId::AndElimR => match &premises[0].conclusion {
            Formula::And(l, r) => {
                let want = if id == RuleId::AndElimL { l } else { r };
                if **want != d.conclusion {
                    return fail(format!("{id} conclusion mismatch"));
                }
                None
            }
            _ => fail(format!("premise of {id} is not a conjunction")),
        },
        RuleId::NotElim => {
            match &premises[1].conclusion {
                Formula::Not(inner) if **inner == premises[0].conclusion => {}
                _ => return fail("not-elim premises are not a formula and its negation".into()),
            }
            if d.conclusion != Formula::Falsum {
                return fail("not-elim must conclude falsum".into());
            }
            None
        }
        RuleId::NotIntro => {
            let label = match discharge {
                Some(l) => l,
                None => return fail("not-intro requires a discharge label".into()),
            };
            if premises[0].conclusion != Formula::Falsum {
                return fail("not-intro premise must conclude falsum".into());
            }
            let assumed = match &d.conclusion {
                Formula::Not(inner) => (**inner).clone(),
                _ => return fail("not-intro must conclude a negation".into()),
            };
            // discharge removes every open assumption carrying the label;
            // discharging nothing is legal (vacuous discharge)
            if open.iter().any(|(l, f)| l == label && f != &assumed) {
                return fail(format!(
                    "discharge of `{label}` does not match the assumed formula"
                ));
            }
            open.retain(|(l, _)| l != label);
            None
        }
        RuleId::ExistsIntro => {
            let (var, body) = match &d.conclusion {
                Formula::Exists(v, b) => (v, b),
                _ => return fail("exists-intro must conclude an existential".into()),
            };
            if witness_for(var, body, &premises[0].conclusion).is_none() {
                return fail("premise is not an instance of the existential body".into());
            }
            None
        }
    }
}

/// Find a closed witness term `t` with `body[var := t] == instance`.
pub fn witness_for(var: &str, body: &Formula, instance: &Formula) -> Option<crate::term::Term> {
    use crate::term::Term;
    fn go(
        var: &str,
        body: &Formula,
        instance: &Formula,
        witness: &mut Option<Term>,
    ) -> bool {
        match (body, instance) {
            (Formula::Falsum, Formula::Falsum) => true,
            (Formula::Atom { pred: p, args: pa }, Formula::Atom { pred: q, args: qa }) => {
                p == q
                    && pa.len() == qa.len()
                    && pa.iter().zip(qa).all(|(a, b)| go_term(var, a, b, witness))
            }
            (Formula::And(a, b), Formula::And(c, d))
            | (Formula::Implies(a, b), Formula::Implies(c, d)) => {
                go(var, a, c, witness) && go(var, b, d, witness)
            }
            (Formula::Not(a), Formula::Not(b)) => go(var, a, b, witness),
            (Formula::Exists(v1, b1), Formula::Exists(v2, b2)) => {
                if v1 != v2 {
                    return false;
                }
                if v1 == var {
                    // inner binder shadows: bodies must agree verbatim
                    b1 == b2
                } else {
                    go(var, b1, b2, witness)
                }
            }
            _ => false,
        }
    }
    fn go_term(var: &str, pat: &Term, t: &Term, witness: &mut Option<Term>) -> bool {
        match pat {
            Term::Var(v) if v == var => {
                if !t.is_closed() {
                    return false;
                }
                match witness {
                    Some(w) => w == t,
                    None => {
                        *witness = Some(t.clone());
                        true
                    }
                }
            }
            Term::Var(_) => pat == t,
            Term::Num(_) => pat == t,
            Term::App(f, fa) => match t {
                Term::App(g, ga) => {
                    f == g
                        && fa.len() == ga.len()
                        && fa.iter().zip(ga).all(|(a, b)| go_term(var, a, b, witness))
                }
                Term::Num(n) => {
                    use crate::term::SUCC_SYMBOL;
                    use num_traits::Zero;
                    if f == SUCC_SYMBOL && fa.len() == 1 && !n.is_zero() {
                        go_term(var, &fa[0], &Term::Num(n - 1u32), witness)
                    } else {
                        false
                    }
                }
                _ => false,
            },
        }
    }
    let mut witness = None;
    if go(var, body, instance, &mut witness) {
        // a body with no occurrence of the variable matches any instance
        // equal to itself; report the canonical witness 0
        Some(witness.unwrap_or_else(Term::zero))
    } else {
        None
    }
}
