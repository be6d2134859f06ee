//! Detour removal for natural-deduction derivations.
//!
//! An introduction immediately consumed by the matching elimination proves
//! nothing that its subproof did not already prove; normalization rewrites
//! such detours away until none remain:
//!
//! * `and-elim-l(and-intro(a, b))` becomes `a` (and symmetrically for the
//!   right projection);
//! * `not-elim(p, not-intro(u, bot))` becomes `bot` with every assumption
//!   labelled `u` replaced by `p`.
//!
//! Conclusions are preserved and validity is preserved. A reduction step on
//! a conjunction detour, or on a negation detour whose assumption is used at
//! most once, strictly shrinks the node count; a negation detour that
//! duplicates a large subproof can grow the tree momentarily, but the
//! innermost-first strategy still terminates on the fragment.

use crate::derivation::{Derivation, LeafKind, Node, RuleId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("normalization is defined for natural-deduction derivations only")]
    HilbertDerivation,
    #[error("derivation mixes calculi")]
    MixedCalculus,
}

/// Fully normalize a natural-deduction derivation.
pub fn normalize(d: &Derivation) -> Result<Derivation, NormalizeError> {
    Ok(normalize_trace(d)?.0)
}

/// Normalize and report the node count after each reduction step, starting
/// with the input's count.
pub fn normalize_trace(d: &Derivation) -> Result<(Derivation, Vec<usize>), NormalizeError> {
    match d.calculus() {
        None => return Err(NormalizeError::MixedCalculus),
        Some(crate::derivation::Calculus::Hilbert) => {
            return Err(NormalizeError::HilbertDerivation)
        }
        _ => {}
    }
    let mut current = d.clone();
    let mut trace = vec![current.node_count()];
    while let Some(next) = reduce_once(&current) {
        current = next;
        trace.push(current.node_count());
    }
    Ok((current, trace))
}

/// Perform one innermost-leftmost detour reduction, if any exists.
fn reduce_once(d: &Derivation) -> Option<Derivation> {
    let (premises, id, discharge) = match &d.node {
        Node::Leaf(_) => return None,
        Node::Rule { id, premises, discharge } => (premises, *id, discharge.clone()),
    };
    // innermost first: try the children before the root
    for (i, p) in premises.iter().enumerate() {
        if let Some(reduced) = reduce_once(p) {
            let mut new_premises = premises.clone();
            new_premises[i] = reduced;
            return Some(Derivation {
                conclusion: d.conclusion.clone(),
                node: Node::Rule { id, premises: new_premises, discharge },
            });
        }
    }
    match id {
        RuleId::AndElimL | RuleId::AndElimR => match &premises[0].node {
            Node::Rule { id: RuleId::AndIntro, premises: inner, .. } => {
                let picked = if id == RuleId::AndElimL { &inner[0] } else { &inner[1] };
                Some(picked.clone())
            }
            _ => None,
        },
        RuleId::NotElim => match &premises[1].node {
            Node::Rule { id: RuleId::NotIntro, premises: inner, discharge: Some(label) } => {
                Some(substitute_assumption(&inner[0], label, &premises[0]))
            }
            _ => None,
        },
        _ => None,
    }
}

/// Replace every assumption leaf labelled `label` by `replacement`.
fn substitute_assumption(d: &Derivation, label: &str, replacement: &Derivation) -> Derivation {
    match &d.node {
        Node::Leaf(LeafKind::Assumption(l)) if l == label => replacement.clone(),
        Node::Leaf(_) => d.clone(),
        Node::Rule { id, premises, discharge } => {
            if discharge.as_deref() == Some(label) {
                // an inner discharge of the same label shadows it
                return d.clone();
            }
            Derivation {
                conclusion: d.conclusion.clone(),
                node: Node::Rule {
                    id: *id,
                    premises: premises
                        .iter()
                        .map(|p| substitute_assumption(p, label, replacement))
                        .collect(),
                    discharge: discharge.clone(),
                },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::check_derivation;
    use crate::formula::Formula;
    use crate::theory::Theory;

    fn atom(name: &str) -> Formula {
        Formula::atom0(name)
    }

    fn toy_theory() -> Theory {
        let mut t = Theory::new("toy");
        t.add_axiom("a", atom("A")).unwrap();
        t.add_axiom("b", atom("B")).unwrap();
        t.add_axiom("na", Formula::not(atom("A"))).unwrap();
        t
    }

    #[test]
    fn canonical_conjunction_detour() {
        let t = toy_theory();
        let a = Derivation::axiom(&t, "a").unwrap();
        let b = Derivation::axiom(&t, "b").unwrap();
        let detour = Derivation::and_elim_l(Derivation::and_intro(a.clone(), b));
        let normal = normalize(&detour).unwrap();
        assert_eq!(normal, a);
    }

    #[test]
    fn normal_forms_are_fixpoints() {
        let t = toy_theory();
        let d = Derivation::and_intro(
            Derivation::axiom(&t, "a").unwrap(),
            Derivation::axiom(&t, "b").unwrap(),
        );
        let n = normalize(&d).unwrap();
        assert_eq!(n, d);
        // idempotence on a reducible input
        let detour = Derivation::and_elim_r(d.clone());
        let once = normalize(&detour).unwrap();
        assert_eq!(normalize(&once).unwrap(), once);
    }

    #[test]
    fn nested_detours_shrink_stepwise() {
        let t = toy_theory();
        let a = Derivation::axiom(&t, "a").unwrap();
        let b = Derivation::axiom(&t, "b").unwrap();
        // elim-l(intro(elim-r(intro(b, a)), b)): 7 nodes down to 1
        let inner = Derivation::and_elim_r(Derivation::and_intro(b.clone(), a.clone()));
        let outer = Derivation::and_elim_l(Derivation::and_intro(inner, b));
        assert_eq!(outer.node_count(), 7);
        let (normal, trace) = normalize_trace(&outer).unwrap();
        assert_eq!(normal, a);
        assert!(trace.windows(2).all(|w| w[1] < w[0]), "trace {trace:?}");
        assert_eq!(*trace.last().unwrap(), 1);
    }

    #[test]
    fn negation_detour_substitutes_the_proof() {
        let t = toy_theory();
        let a = Derivation::axiom(&t, "a").unwrap();
        // not-intro u. not-elim(assume u A, axiom na) : proves not A
        let bot = Derivation::not_elim(
            Derivation::assumption("u", atom("A")),
            Derivation::axiom(&t, "na").unwrap(),
        );
        let not_a = Derivation::not_intro("u", atom("A"), bot);
        let detour = Derivation::not_elim(a.clone(), not_a);
        assert!(check_derivation(&detour, &t).valid);
        let (normal, trace) = normalize_trace(&detour).unwrap();
        let expected = Derivation::not_elim(a, Derivation::axiom(&t, "na").unwrap());
        assert_eq!(normal, expected);
        assert!(check_derivation(&normal, &t).valid);
        assert!(trace.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn conclusions_survive_normalization() {
        let t = toy_theory();
        let a = Derivation::axiom(&t, "a").unwrap();
        let b = Derivation::axiom(&t, "b").unwrap();
        let d = Derivation::and_intro(
            Derivation::and_elim_l(Derivation::and_intro(a.clone(), b.clone())),
            b.clone(),
        );
        let n = normalize(&d).unwrap();
        assert_eq!(n.conclusion, d.conclusion);
    }

    #[test]
    fn hilbert_derivations_are_rejected() {
        let mut t = Theory::new("h");
        t.add_axiom("i", Formula::implies(atom("A"), atom("B"))).unwrap();
        t.add_axiom("a", atom("A")).unwrap();
        let d = Derivation::mp(
            Derivation::axiom(&t, "i").unwrap(),
            Derivation::axiom(&t, "a").unwrap(),
        );
        assert_eq!(normalize(&d), Err(NormalizeError::HilbertDerivation));
    }
}
