//! Credibility measures over derivations.
//!
//! A measure grades each derivation in `[0, 1]`. Policy-generated measures
//! recurse over the tree: leaves get 1, each rule node filters its premises'
//! credibilities through the transfer policy. Factorable measures compose a
//! complexity gauge with a fuzzy initial segment; composed measures rewrite
//! the derivation first (normalization unwraps hidden complexity).

use crate::derivation::{Derivation, Node};
use crate::fis::{FisDescriptor, FisError};
use crate::nat::Natural;
use crate::normalize::{normalize, NormalizeError};
use crate::rat::UnitRational;
use crate::ttp::TruthTransferPolicy;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Fis(#[from] FisError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// How complex a derivation is, as a natural number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityKind {
    /// Number of nodes in the tree.
    NodeCount,
    /// Total symbol occurrences across all conclusions.
    SymbolCount,
}

impl ComplexityKind {
    pub fn measure(&self, d: &Derivation) -> Natural {
        match self {
            ComplexityKind::NodeCount => Natural::from(d.node_count() as u64),
            ComplexityKind::SymbolCount => d.symbol_count(),
        }
    }
}

/// A derivation-to-derivation rewrite used by composed measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// Detour removal in the natural-deduction fragment.
    Normalize,
}

impl TransformKind {
    pub fn apply(&self, d: &Derivation) -> Result<Derivation, NormalizeError> {
        match self {
            TransformKind::Normalize => normalize(d),
        }
    }
}

/// A general credibility measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CredibilityMeasure {
    /// Recursion over the tree with a truth transfer policy.
    FromTtp(TruthTransferPolicy),
    /// A complexity gauge composed with a fuzzy initial segment.
    Factored {
        complexity: ComplexityKind,
        fis: FisDescriptor,
    },
    /// Rewrite first, then measure.
    Composed {
        transform: TransformKind,
        inner: Box<CredibilityMeasure>,
    },
}

impl CredibilityMeasure {
    pub fn zero_decay() -> Self {
        CredibilityMeasure::FromTtp(TruthTransferPolicy::zero_decay())
    }

    /// The transfer policy driving this measure, when it is policy-generated.
    pub fn ttp(&self) -> Option<&TruthTransferPolicy> {
        match self {
            CredibilityMeasure::FromTtp(p) => Some(p),
            CredibilityMeasure::Factored { .. } => None,
            CredibilityMeasure::Composed { inner, .. } => inner.ttp(),
        }
    }
}

/// The credibility of a derivation under a measure.
///
/// The caller is responsible for validity; this function only computes the
/// grade (checking is `check_derivation`'s business).
pub fn credibility(
    measure: &CredibilityMeasure,
    derivation: &Derivation,
) -> Result<UnitRational, MeasureError> {
    match measure {
        CredibilityMeasure::FromTtp(policy) => Ok(ttp_credibility(policy, derivation)),
        CredibilityMeasure::Factored { complexity, fis } => {
            let c = complexity.measure(derivation);
            Ok(fis.evaluate(&c)?)
        }
        CredibilityMeasure::Composed { transform, inner } => {
            let rewritten = transform.apply(derivation)?;
            credibility(inner, &rewritten)
        }
    }
}

/// Bottom-up policy recursion: leaves carry 1.
pub fn ttp_credibility(policy: &TruthTransferPolicy, derivation: &Derivation) -> UnitRational {
    match &derivation.node {
        Node::Leaf(_) => UnitRational::one(),
        Node::Rule { id, premises, .. } => {
            let inputs: Vec<UnitRational> = premises
                .iter()
                .map(|p| ttp_credibility(policy, p))
                .collect();
            policy.apply(*id, &inputs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::Derivation;
    use crate::formula::Formula;
    use crate::nat::nat;
    use crate::term::Term;
    use crate::theory::{feasibility_theory, Theory};

    fn ur(n: u64, d: u64) -> UnitRational {
        UnitRational::from_u64_ratio(n, d).unwrap()
    }

    /// The stepwise proof of `F(n)` by iterated modus ponens.
    pub fn chain(theory: &Theory, n: u64) -> Derivation {
        let mut proof = Derivation::axiom(theory, "f0").unwrap();
        for k in 0..n {
            let step = Derivation::schema_instance(theory, "step", vec![nat(k)]).unwrap();
            proof = Derivation::mp(step, proof);
        }
        proof
    }

    #[test]
    fn zero_decay_gives_full_credibility() {
        let t = feasibility_theory(4);
        let d = chain(&t, 7);
        let m = CredibilityMeasure::zero_decay();
        assert!(credibility(&m, &d).unwrap().is_one());
    }

    #[test]
    fn erosion_chain_matches_closed_form() {
        let t = feasibility_theory(10);
        let e = ur(1, 1024);
        let m = CredibilityMeasure::FromTtp(TruthTransferPolicy::erosion(e).unwrap());
        for n in [0u64, 1, 2, 17, 100] {
            let d = chain(&t, n);
            let got = credibility(&m, &d).unwrap();
            let want = UnitRational::one_minus_ratio(&nat(n), &nat(1024)).unwrap();
            assert_eq!(got, want, "chain length {n}");
        }
        assert_eq!(d_conclusion(&chain(&t, 2)), Formula::atom("F", vec![Term::num(2)]));
    }

    fn d_conclusion(d: &Derivation) -> Formula {
        d.conclusion.clone()
    }

    #[test]
    fn factored_measure_reads_symbol_count() {
        let t = feasibility_theory(4);
        // leaf F(0): conclusion has symbols F and 0
        let d = Derivation::axiom(&t, "f0").unwrap();
        assert_eq!(d.symbol_count(), nat(2));
        let m = CredibilityMeasure::Factored {
            complexity: ComplexityKind::SymbolCount,
            fis: FisDescriptor::linear(100),
        };
        assert_eq!(credibility(&m, &d).unwrap(), ur(98, 100));

        // a 40-symbol derivation lands at 3/5 under a width-100 segment
        let mut t40 = Theory::new("t40");
        t40.add_axiom("f38", Formula::atom("F", vec![Term::num(38)])).unwrap();
        let d = Derivation::axiom(&t40, "f38").unwrap();
        assert_eq!(d.symbol_count(), nat(40));
        assert_eq!(credibility(&m, &d).unwrap(), ur(3, 5));
    }

    #[test]
    fn composed_measure_unwraps_detours() {
        let mut t = Theory::new("d");
        t.add_axiom("a", Formula::atom0("A")).unwrap();
        t.add_axiom("b", Formula::atom0("B")).unwrap();
        // a 5-node projection detour around the bare axiom leaf
        let detour = Derivation::and_elim_l(Derivation::and_intro(
            Derivation::axiom(&t, "a").unwrap(),
            Derivation::axiom(&t, "b").unwrap(),
        ));
        let factored = CredibilityMeasure::Factored {
            complexity: ComplexityKind::NodeCount,
            fis: FisDescriptor::linear(10),
        };
        assert_eq!(credibility(&factored, &detour).unwrap(), ur(6, 10));
        let composed = CredibilityMeasure::Composed {
            transform: TransformKind::Normalize,
            inner: Box::new(factored),
        };
        // after normalization only the axiom leaf remains
        assert_eq!(credibility(&composed, &detour).unwrap(), ur(9, 10));
    }

    #[test]
    fn factored_measure_decreases_with_size() {
        let t = feasibility_theory(6);
        let m = CredibilityMeasure::Factored {
            complexity: ComplexityKind::SymbolCount,
            fis: FisDescriptor::linear(100),
        };
        // strictly decreasing in proof size until the bottom is reached
        let mut previous = UnitRational::one();
        let mut hit_zero = false;
        for n in 1..10u64 {
            let cred = credibility(&m, &chain(&t, n)).unwrap();
            if previous.is_zero() {
                assert!(cred.is_zero(), "stays at zero from {n}");
            } else {
                assert!(cred < previous, "strictly decreasing at {n}");
            }
            hit_zero |= cred.is_zero();
            previous = cred;
        }
        assert!(hit_zero);
    }
}
