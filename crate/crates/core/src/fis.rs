//! Fuzzy initial segments of the natural number series.
//!
//! A fuzzy initial segment (FIS) grades each natural number with an exact
//! rational degree of feasibility: degree 1 means firmly within reach, 0
//! means beyond the horizon, anything in between is the weakly feasible
//! moat. Descriptors are symbolic, so a segment can be queried at any
//! natural without materializing a table.

use crate::nat::{self, Natural, NatError, DEFAULT_TOWER_CAP};
use crate::rat::UnitRational;
use crate::saturated::SaturatedArithmetic;
use crate::term::{reachable_values, Interpretation, Signature, Term, TermError};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FisError {
    #[error(transparent)]
    Nat(#[from] NatError),
    #[error("table entries must start at 0 and have strictly increasing keys")]
    TableKeys,
    #[error("table values must be nonincreasing")]
    TableValues,
    #[error("table tail value must not exceed the last entry")]
    TableTail,
    #[error("linear segment needs a positive slope denominator")]
    ZeroWidth,
    #[error("no probed value has degree zero; cannot defuzzify by support below bound {0}")]
    NotStrictWithinBound(usize),
    #[error("no probed value has degree below one; cannot defuzzify by strong cut below bound {0}")]
    NoWeakValueWithinBound(usize),
    #[error("no enumerated term has positive degree")]
    NoPositiveTerm,
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Symbolic description of a fuzzy initial segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FisDescriptor {
    /// Degree `max(1 - n/width, 0)`: confidence decays at constant pace.
    Linear { width: Natural },
    /// Degree `max(1 - 2_n/2_k, 0)` over the exponential tower: the first
    /// numbers are nearly strongly feasible, then the drop is precipitous.
    /// Degree at 0 is pinned to 1 (see the module tests).
    SharpTower { index: u32 },
    /// Reading the inner segment in binary: degree of `n` is the inner degree
    /// of `floor(log2 n) + 1`, with 0 staying strongly feasible.
    LogRescale { inner: Box<FisDescriptor> },
    /// The small numbers of the inner segment: degree of `n` is the inner
    /// degree of `2^n`.
    SmallCut { inner: Box<FisDescriptor> },
    /// Explicit step table: the value at `n` is the entry with the largest
    /// key `<= n`, or the tail value beyond the last key.
    Table {
        entries: Vec<(Natural, UnitRational)>,
        tail: UnitRational,
    },
    /// Decay postponed: full confidence below `start`, then the inner
    /// segment shifted by `start`.
    Shifted {
        inner: Box<FisDescriptor>,
        start: Natural,
    },
}

impl FisDescriptor {
    pub fn linear(width: u64) -> FisDescriptor {
        FisDescriptor::Linear { width: Natural::from(width) }
    }

    /// Validated table constructor.
    pub fn table(
        entries: Vec<(Natural, UnitRational)>,
        tail: UnitRational,
    ) -> Result<FisDescriptor, FisError> {
        match entries.first() {
            Some((k, _)) if k.is_zero() => {}
            _ => return Err(FisError::TableKeys),
        }
        for w in entries.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(FisError::TableKeys);
            }
            if w[1].1 > w[0].1 {
                return Err(FisError::TableValues);
            }
        }
        if let Some((_, last)) = entries.last() {
            if &tail > last {
                return Err(FisError::TableTail);
            }
        }
        Ok(FisDescriptor::Table { entries, tail })
    }

    /// The binary-notation transform; composition is the caller's business.
    pub fn log_rescale(self) -> FisDescriptor {
        FisDescriptor::LogRescale { inner: Box::new(self) }
    }

    /// The small-numbers transform. Intended for segments that are weakly
    /// closed under multiplication with degree 1 at 2; the transform itself
    /// is total and the caller checks the premises.
    pub fn small_cut(self) -> FisDescriptor {
        FisDescriptor::SmallCut { inner: Box::new(self) }
    }

    pub fn shifted(self, start: Natural) -> FisDescriptor {
        FisDescriptor::Shifted { inner: Box::new(self), start }
    }

    /// Exact membership degree of `n`.
    pub fn evaluate(&self, n: &Natural) -> Result<UnitRational, FisError> {
        self.evaluate_with_cap(n, DEFAULT_TOWER_CAP)
    }

    pub fn evaluate_with_cap(&self, n: &Natural, tower_cap: u32) -> Result<UnitRational, FisError> {
        match self {
            FisDescriptor::Linear { width } => {
                if width.is_zero() {
                    return Err(FisError::ZeroWidth);
                }
                Ok(UnitRational::one_minus_ratio(n, width).expect("positive width"))
            }
            FisDescriptor::SharpTower { index } => {
                if n.is_zero() {
                    return Ok(UnitRational::one());
                }
                // 2_n >= 2_index once n >= index, so the degree is already 0
                // and no tower beyond the descriptor's own needs computing.
                if n >= &Natural::from(*index) {
                    return Ok(UnitRational::zero());
                }
                let small = u32::try_from(n).expect("n < index, which is a u32");
                let tower_n = nat::tower_with_cap(small, tower_cap)?;
                let tower_idx = nat::tower_with_cap(*index, tower_cap)?;
                Ok(UnitRational::one_minus_ratio(&tower_n, &tower_idx).expect("tower positive"))
            }
            FisDescriptor::LogRescale { inner } => match nat::floor_log2_plus1(n) {
                None => inner.evaluate_with_cap(&Natural::zero(), tower_cap),
                Some(rescaled) => inner.evaluate_with_cap(&rescaled, tower_cap),
            },
            FisDescriptor::SmallCut { inner } => {
                let exp = nat::pow2(n)?;
                inner.evaluate_with_cap(&exp, tower_cap)
            }
            FisDescriptor::Table { entries, tail } => {
                // beyond the last listed key the tail value applies;
                // between keys the entry with the largest key <= n does
                match entries.last() {
                    Some((last, _)) if n > last => Ok(tail.clone()),
                    _ => {
                        let value = entries
                            .iter()
                            .rev()
                            .find(|(key, _)| key <= n)
                            .map(|(_, v)| v.clone())
                            .unwrap_or_else(|| tail.clone());
                        Ok(value)
                    }
                }
            }
            FisDescriptor::Shifted { inner, start } => {
                if n <= start {
                    inner.evaluate_with_cap(&Natural::zero(), tower_cap)
                } else {
                    inner.evaluate_with_cap(&(n - start), tower_cap)
                }
            }
        }
    }

    pub fn classify(&self, n: &Natural) -> Result<FeasibilityClass, FisError> {
        let degree = self.evaluate(n)?;
        Ok(if degree.is_one() {
            FeasibilityClass::StronglyFeasible
        } else if degree.is_zero() {
            FeasibilityClass::Unfeasible
        } else {
            FeasibilityClass::WeaklyFeasible
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeasibilityClass {
    StronglyFeasible,
    WeaklyFeasible,
    Unfeasible,
}

impl fmt::Display for FeasibilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibilityClass::StronglyFeasible => write!(f, "strongly-feasible"),
            FeasibilityClass::WeaklyFeasible => write!(f, "weakly-feasible"),
            FeasibilityClass::Unfeasible => write!(f, "unfeasible"),
        }
    }
}

/// Which structural condition a segment violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FisViolation {
    /// Degree at 0 must be 1.
    ZeroNotStrong,
    /// Degrees must be nonincreasing.
    Increase,
    /// Degree 1 may not be followed by degree 0.
    Jump,
}

impl fmt::Display for FisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FisViolation::ZeroNotStrong => write!(f, "degree at 0 is not 1"),
            FisViolation::Increase => write!(f, "degree increases"),
            FisViolation::Jump => write!(f, "degree jumps from 1 to 0"),
        }
    }
}

/// Result of checking the segment conditions up to a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FisReport {
    pub horizon: u64,
    pub is_fis: bool,
    pub is_strict: bool,
    pub is_regular: bool,
    pub first_violation: Option<(u64, FisViolation)>,
    pub first_regularity_violation: Option<u64>,
}

/// Verify the defining conditions for all `n <= horizon`:
/// degree 1 at 0, nonincreasing, no jump from 1 to 0. Strictness asks for
/// some degree-0 point below the horizon; regularity asks the one-step
/// decrement to be nondecreasing on the positive-degree prefix.
pub fn check_fis(descriptor: &FisDescriptor, horizon: u64) -> Result<FisReport, FisError> {
    let mut is_fis = true;
    let mut first_violation = None;
    let mut is_strict = false;
    let mut is_regular = true;
    let mut first_regularity_violation = None;

    let record = |n: u64, v: FisViolation, is_fis: &mut bool,
                      slot: &mut Option<(u64, FisViolation)>| {
        *is_fis = false;
        if slot.is_none() {
            *slot = Some((n, v));
        }
    };

    let mut prev = descriptor.evaluate(&Natural::zero())?;
    if !prev.is_one() {
        record(0, FisViolation::ZeroNotStrong, &mut is_fis, &mut first_violation);
    }
    if prev.is_zero() {
        is_strict = true;
    }
    let mut prev_decrement: Option<UnitRational> = None;
    for n in 0..horizon {
        let next = descriptor.evaluate(&Natural::from(n + 1))?;
        if next > prev {
            record(n + 1, FisViolation::Increase, &mut is_fis, &mut first_violation);
        }
        if prev.is_one() && next.is_zero() {
            record(n + 1, FisViolation::Jump, &mut is_fis, &mut first_violation);
        }
        if next.is_zero() {
            is_strict = true;
        }
        // regularity compares decrements on the positive-degree prefix
        if !prev.is_zero() && next <= prev {
            let decrement = prev.saturating_sub(&next);
            if let Some(last) = &prev_decrement {
                if decrement < *last && is_regular {
                    is_regular = false;
                    first_regularity_violation = Some(n);
                }
            }
            prev_decrement = Some(decrement);
        }
        prev = next;
    }
    Ok(FisReport {
        horizon,
        is_fis,
        is_strict,
        is_regular,
        first_violation,
        first_regularity_violation,
    })
}

/// A weak-closure violation: applying `symbol` to strongly feasible values
/// landed on an unfeasible one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation {
    pub symbol: String,
    pub args: Vec<Natural>,
    pub result: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakClosureReport {
    pub closed: bool,
    pub violation: Option<ClosureViolation>,
    /// Some enumerated term already has degree 0 (the strictness witness).
    pub strict_witness: Option<(Term, Natural)>,
}

/// Check weak closure over the terms of the signature, up to a term length.
///
/// For every function symbol and every tuple of term values of degree 1, the
/// symbol applied to the tuple must not land on degree 0. Term enumeration is
/// collapsed to the reachable values: degrees only ever see a term through
/// its value, so the check is equivalent to walking every term.
pub fn check_weak_closure(
    descriptor: &FisDescriptor,
    sig: &Signature,
    interp: &Interpretation,
    term_len_bound: usize,
) -> Result<WeakClosureReport, FisError> {
    let reached = reachable_values(sig, interp, term_len_bound)?;

    let mut strict_witness = None;
    for (value, info) in &reached {
        if descriptor.evaluate(value)?.is_zero() {
            strict_witness = Some((info.witness.clone(), value.clone()));
            break;
        }
    }

    let strong: Vec<Natural> = reached
        .keys()
        .filter_map(|v| match descriptor.evaluate(v) {
            Ok(d) if d.is_one() => Some(Ok(v.clone())),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_, _>>()?;

    for decl in sig.symbols() {
        if decl.arity == 0 {
            continue;
        }
        let mut picks = vec![0usize; decl.arity];
        if strong.is_empty() {
            break;
        }
        loop {
            let args: Vec<Natural> = picks.iter().map(|&i| strong[i].clone()).collect();
            let result = interp.apply(&decl.name, &args)?;
            if descriptor.evaluate(&result)?.is_zero() {
                return Ok(WeakClosureReport {
                    closed: false,
                    violation: Some(ClosureViolation {
                        symbol: decl.name.clone(),
                        args,
                        result,
                    }),
                    strict_witness,
                });
            }
            let mut i = picks.len();
            let mut done = false;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                picks[i] += 1;
                if picks[i] < strong.len() {
                    break;
                }
                picks[i] = 0;
            }
            if done {
                break;
            }
        }
    }

    Ok(WeakClosureReport { closed: true, violation: None, strict_witness })
}

/// Direct value-level closure check for one function: for all argument
/// tuples of degree-1 values `<= horizon`, the image must keep positive
/// degree. This is the fast route the property suites use.
pub fn check_weak_closure_values<F>(
    descriptor: &FisDescriptor,
    arity: usize,
    func: F,
    horizon: u64,
) -> Result<Option<ClosureViolation>, FisError>
where
    F: Fn(&[Natural]) -> Natural,
{
    let mut strong = Vec::new();
    for n in 0..=horizon {
        let v = Natural::from(n);
        if descriptor.evaluate(&v)?.is_one() {
            strong.push(v);
        }
    }
    if strong.is_empty() {
        return Ok(None);
    }
    let mut picks = vec![0usize; arity];
    loop {
        let args: Vec<Natural> = picks.iter().map(|&i| strong[i].clone()).collect();
        let result = func(&args);
        if descriptor.evaluate(&result)?.is_zero() {
            return Ok(Some(ClosureViolation {
                symbol: String::from("<fn>"),
                args,
                result,
            }));
        }
        let mut i = picks.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            picks[i] += 1;
            if picks[i] < strong.len() {
                break;
            }
            picks[i] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusReport {
    /// Largest positively feasible value reached by a term within the bound.
    pub radius: Natural,
    /// Term witnessing the radius.
    pub witness: Term,
    /// True when no unfeasible value was reached within the bound, i.e. the
    /// enumeration horizon, not the segment, may be what limited the radius.
    pub horizon_limited: bool,
}

/// How far out the notation system reaches: the largest value attained by an
/// enumerated closed term that still has positive degree.
pub fn feasibility_radius(
    descriptor: &FisDescriptor,
    sig: &Signature,
    interp: &Interpretation,
    term_len_bound: usize,
) -> Result<RadiusReport, FisError> {
    let reached = reachable_values(sig, interp, term_len_bound)?;
    let mut best: Option<(&Natural, &Term)> = None;
    let mut saw_zero = false;
    for (value, info) in &reached {
        if descriptor.evaluate(value)?.is_zero() {
            saw_zero = true;
        } else {
            match best {
                Some((b, _)) if b >= value => {}
                _ => best = Some((value, &info.witness)),
            }
        }
    }
    let (radius, witness) = best.ok_or(FisError::NoPositiveTerm)?;
    Ok(RadiusReport {
        radius: radius.clone(),
        witness: witness.clone(),
        horizon_limited: !saw_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationReport {
    /// `<=` everywhere on the horizon and `<` somewhere.
    pub weak: bool,
    /// The literal pointwise-strict reading: `<` everywhere. Unsatisfiable
    /// between two genuine segments (both are 1 at 0); kept for fidelity.
    pub strict_pointwise: bool,
    pub first_weak_violation: Option<u64>,
}

/// Does `better` dominate `base` on `0..=horizon`?
pub fn dominates(
    base: &FisDescriptor,
    better: &FisDescriptor,
    horizon: u64,
) -> Result<DominationReport, FisError> {
    let mut weak = true;
    let mut strict_somewhere = false;
    let mut strict_pointwise = true;
    let mut first_weak_violation = None;
    for n in 0..=horizon {
        let nn = Natural::from(n);
        let a = base.evaluate(&nn)?;
        let b = better.evaluate(&nn)?;
        if a > b {
            weak = false;
            if first_weak_violation.is_none() {
                first_weak_violation = Some(n);
            }
        }
        if a < b {
            strict_somewhere = true;
        }
        if a >= b {
            strict_pointwise = false;
        }
    }
    Ok(DominationReport {
        weak: weak && strict_somewhere,
        strict_pointwise,
        first_weak_violation,
    })
}

/// Which equivalence is used to collapse a segment into a finite arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefuzzCut {
    /// Keep every positively feasible number; everything of degree 0 becomes
    /// the single absorbing infinity.
    Support,
    /// Keep only the strongly feasible numbers; every degree below 1 is
    /// identified with infinity.
    Strong,
}

/// Collapse the segment into a crisp finite arithmetic with an absorbing
/// infinity, probing degrees at `0..=probe_bound`.
pub fn defuzzify(
    descriptor: &FisDescriptor,
    cut: DefuzzCut,
    probe_bound: usize,
) -> Result<SaturatedArithmetic, FisError> {
    let mut boundary = None;
    for n in 0..=probe_bound as u64 {
        let degree = descriptor.evaluate(&Natural::from(n))?;
        let collapses = match cut {
            DefuzzCut::Support => degree.is_zero(),
            DefuzzCut::Strong => !degree.is_one(),
        };
        if collapses {
            boundary = Some(n);
            break;
        }
    }
    match boundary {
        Some(0) => {
            // degree at 0 already collapses: not a segment at all
            Err(match cut {
                DefuzzCut::Support => FisError::NotStrictWithinBound(probe_bound),
                DefuzzCut::Strong => FisError::NoWeakValueWithinBound(probe_bound),
            })
        }
        Some(first_out) => Ok(SaturatedArithmetic::new(Natural::from(first_out - 1))),
        None => Err(match cut {
            DefuzzCut::Support => FisError::NotStrictWithinBound(probe_bound),
            DefuzzCut::Strong => FisError::NoWeakValueWithinBound(probe_bound),
        }),
    }
}

/// Build the standard value table of a descriptor on `0..=horizon`; handy
/// for tests and reports.
pub fn table_of(
    descriptor: &FisDescriptor,
    horizon: u64,
) -> Result<BTreeMap<u64, UnitRational>, FisError> {
    let mut out = BTreeMap::new();
    for n in 0..=horizon {
        out.insert(n, descriptor.evaluate(&Natural::from(n))?);
    }
    Ok(out)
}

/// A convenience alias used throughout the check suites.
pub fn unary_sig_and_interp() -> (Signature, Interpretation) {
    (Signature::unary(), Interpretation::standard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::nat;
    use crate::term::SUCC_SYMBOL;

    fn ur(n: u64, d: u64) -> UnitRational {
        UnitRational::from_u64_ratio(n, d).unwrap()
    }

    #[test]
    fn linear_family_closed_form() {
        let g = FisDescriptor::linear(5);
        assert!(g.evaluate(&nat(0)).unwrap().is_one());
        assert_eq!(g.evaluate(&nat(2)).unwrap(), ur(3, 5));
        assert!(g.evaluate(&nat(7)).unwrap().is_zero());
        // the clamp is exact: zero exactly from n = width on
        assert!(!g.evaluate(&nat(4)).unwrap().is_zero());
        assert!(g.evaluate(&nat(5)).unwrap().is_zero());
    }

    #[test]
    fn classification_matches_degrees() {
        let g = FisDescriptor::linear(5);
        assert_eq!(g.classify(&nat(0)).unwrap(), FeasibilityClass::StronglyFeasible);
        assert_eq!(g.classify(&nat(3)).unwrap(), FeasibilityClass::WeaklyFeasible);
        assert_eq!(g.classify(&nat(9)).unwrap(), FeasibilityClass::Unfeasible);
    }

    #[test]
    fn log_rescale_reads_binary_length() {
        let g = FisDescriptor::linear(5);
        let g2 = g.clone().log_rescale();
        // floor(log2 8) + 1 = 4
        assert_eq!(g2.evaluate(&nat(8)).unwrap(), g.evaluate(&nat(4)).unwrap());
        assert_eq!(g2.evaluate(&nat(8)).unwrap(), ur(1, 5));
        assert!(g2.evaluate(&nat(0)).unwrap().is_one());
        assert_eq!(g2.evaluate(&nat(1)).unwrap(), g.evaluate(&nat(1)).unwrap());
    }

    #[test]
    fn small_cut_exponentiates() {
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
        let gs = g.clone().small_cut();
        assert_eq!(gs.evaluate(&nat(2)).unwrap(), ur(1, 2)); // G(4)
        assert_eq!(gs.evaluate(&nat(0)).unwrap(), g.evaluate(&nat(1)).unwrap());
        // the small numbers of this table are exactly {0, 1, 2}
        let small: Vec<u64> = (0..8)
            .filter(|n| !gs.evaluate(&nat(*n)).unwrap().is_zero())
            .collect();
        assert_eq!(small, vec![0, 1, 2]);
    }

    #[test]
    fn sharp_tower_guard_propagates() {
        let g = FisDescriptor::SharpTower { index: 9 };
        // beyond the index the degree is 0 without touching the tower
        assert!(g.evaluate(&nat(100)).unwrap().is_zero());
        // inside it, the guarded tower refuses the descriptor's own index
        assert!(matches!(
            g.evaluate(&nat(1)),
            Err(FisError::Nat(crate::nat::NatError::TowerGuard { index: 9, cap: 6 }))
        ));
    }

    #[test]
    fn sharp_tower_values() {
        let g = FisDescriptor::SharpTower { index: 3 };
        // degree at 0 pinned to 1; 2_3 = 16
        assert!(g.evaluate(&nat(0)).unwrap().is_one());
        assert_eq!(g.evaluate(&nat(1)).unwrap(), ur(14, 16)); // 1 - 2/16
        assert_eq!(g.evaluate(&nat(2)).unwrap(), ur(12, 16)); // 1 - 4/16
        assert!(g.evaluate(&nat(3)).unwrap().is_zero());
        // far beyond the index no tower is computed
        assert!(g.evaluate(&nat(1 << 40)).unwrap().is_zero());
    }

    #[test]
    fn shifted_postpones_decay() {
        let g = FisDescriptor::linear(5).shifted(nat(10));
        assert!(g.evaluate(&nat(0)).unwrap().is_one());
        assert!(g.evaluate(&nat(10)).unwrap().is_one());
        assert_eq!(g.evaluate(&nat(12)).unwrap(), ur(3, 5));
    }

    #[test]
    fn check_fis_on_linear() {
        let report = check_fis(&FisDescriptor::linear(5), 10).unwrap();
        assert!(report.is_fis);
        assert!(report.is_strict);
        assert!(report.is_regular);
        assert_eq!(report.first_violation, None);
    }

    #[test]
    fn check_fis_flags_never_strict() {
        let g = FisDescriptor::table(
            vec![(nat(0), ur(1, 1)), (nat(1), ur(1, 1))],
            UnitRational::one(),
        )
        .unwrap();
        let report = check_fis(&g, 10).unwrap();
        assert!(report.is_fis);
        assert!(!report.is_strict);
    }

    #[test]
    fn check_fis_flags_jump() {
        let g = FisDescriptor::table(
            vec![(nat(0), ur(1, 1)), (nat(1), ur(0, 1))],
            UnitRational::zero(),
        )
        .unwrap();
        let report = check_fis(&g, 2).unwrap();
        assert!(!report.is_fis);
        assert_eq!(report.first_violation, Some((1, FisViolation::Jump)));
    }

    #[test]
    fn check_fis_flags_irregular() {
        // decrements 1/4, 1/8: slowing decay is not regular
        let g = FisDescriptor::table(
            vec![
                (nat(0), ur(1, 1)),
                (nat(1), ur(3, 4)),
                (nat(2), ur(5, 8)),
            ],
            UnitRational::zero(),
        )
        .unwrap();
        let report = check_fis(&g, 2).unwrap();
        assert!(!report.is_regular);
        assert_eq!(report.first_regularity_violation, Some(1));
    }

    #[test]
    fn builtin_constructors_are_fis_at_depth() {
        let horizon = 1 << 12;
        let builtins: Vec<FisDescriptor> = vec![
            FisDescriptor::linear(5),
            FisDescriptor::linear(4096),
            FisDescriptor::SharpTower { index: 4 },
            FisDescriptor::SharpTower { index: 3 },
            FisDescriptor::linear(5).log_rescale(),
            // small cut needs degree 1 at 2, hence the shift
            FisDescriptor::linear(20).shifted(nat(4)).small_cut(),
            FisDescriptor::linear(5).shifted(nat(100)),
        ];
        for g in builtins {
            let report = check_fis(&g, horizon).unwrap();
            assert!(report.is_fis, "{g:?} failed: {:?}", report.first_violation);
        }
    }

    #[test]
    fn weak_closure_of_linear_under_plus_two() {
        let (_, mut interp) = unary_sig_and_interp();
        interp.register("f", 2, |args| &args[0] + &args[1] + 2u32);
        let sig = Signature::with_symbols(&[("f", 2)]).unwrap();
        let report =
            check_weak_closure(&FisDescriptor::linear(5), &sig, &interp, 4).unwrap();
        assert!(report.closed);
    }

    #[test]
    fn weak_closure_violation_is_witnessed() {
        let g = FisDescriptor::table(
            vec![
                (nat(0), ur(1, 1)),
                (nat(1), ur(1, 1)),
                (nat(2), ur(0, 1)),
            ],
            UnitRational::zero(),
        )
        .unwrap();
        let (sig, interp) = unary_sig_and_interp();
        let report = check_weak_closure(&g, &sig, &interp, 3).unwrap();
        assert!(!report.closed);
        let v = report.violation.unwrap();
        assert_eq!(v.symbol, SUCC_SYMBOL);
        assert_eq!(v.args, vec![nat(1)]);
        assert_eq!(v.result, nat(2));
    }

    #[test]
    fn strict_witness_found_by_enumeration() {
        let (sig, interp) = unary_sig_and_interp();
        let report =
            check_weak_closure(&FisDescriptor::linear(3), &sig, &interp, 10).unwrap();
        assert!(report.closed);
        let (term, value) = report.strict_witness.unwrap();
        assert_eq!(value, nat(3));
        assert_eq!(term, Term::num(3));
    }

    #[test]
    fn radius_of_linear_unary() {
        let (sig, interp) = unary_sig_and_interp();
        let report =
            feasibility_radius(&FisDescriptor::linear(5), &sig, &interp, 20).unwrap();
        assert_eq!(report.radius, nat(4));
        assert!(!report.horizon_limited);
    }

    #[test]
    fn radius_with_multiplication_does_not_grow() {
        let sig = Signature::with_symbols(&[("*", 2)]).unwrap();
        let interp = Interpretation::standard();
        let report =
            feasibility_radius(&FisDescriptor::linear(5), &sig, &interp, 20).unwrap();
        assert_eq!(report.radius, nat(4));
    }

    #[test]
    fn radius_limited_by_horizon_is_flagged() {
        let g = FisDescriptor::table(vec![(nat(0), ur(1, 1))], ur(1, 2)).unwrap();
        let (sig, interp) = unary_sig_and_interp();
        let report = feasibility_radius(&g, &sig, &interp, 6).unwrap();
        assert_eq!(report.radius, nat(5));
        assert!(report.horizon_limited);
    }

    #[test]
    fn domination_weak_and_literal() {
        let g = FisDescriptor::linear(5);
        let g2 = g.clone().log_rescale();
        let report = dominates(&g, &g2, 30).unwrap();
        assert!(report.weak);
        assert!(!report.strict_pointwise); // equal at 0, necessarily

        let same = dominates(&g, &g, 30).unwrap();
        assert!(!same.weak);
        assert!(!same.strict_pointwise);
    }

    #[test]
    fn defuzzify_support_and_strong() {
        let g = FisDescriptor::linear(5);
        let support = defuzzify(&g, DefuzzCut::Support, 64).unwrap();
        assert_eq!(support.radius(), &nat(4));
        assert_eq!(support.element_count(), nat(6)); // {0..4} plus infinity
        let strong = defuzzify(&g, DefuzzCut::Strong, 64).unwrap();
        assert_eq!(strong.radius(), &nat(0));
        assert_eq!(strong.element_count(), nat(2)); // only 0 is strongly feasible
    }

    #[test]
    fn defuzzify_needs_a_boundary() {
        let flat = FisDescriptor::table(vec![(nat(0), ur(1, 1))], ur(1, 2)).unwrap();
        assert!(matches!(
            defuzzify(&flat, DefuzzCut::Support, 8),
            Err(FisError::NotStrictWithinBound(8))
        ));
        let all_strong =
            FisDescriptor::table(vec![(nat(0), ur(1, 1))], UnitRational::one()).unwrap();
        assert!(matches!(
            defuzzify(&all_strong, DefuzzCut::Strong, 8),
            Err(FisError::NoWeakValueWithinBound(8))
        ));
    }

    #[test]
    fn support_cut_size_matches_radius() {
        for width in [2u64, 5, 17] {
            let g = FisDescriptor::linear(width);
            let (sig, interp) = unary_sig_and_interp();
            let radius = feasibility_radius(&g, &sig, &interp, 64).unwrap().radius;
            let arithmetic = defuzzify(&g, DefuzzCut::Support, 64).unwrap();
            assert_eq!(arithmetic.element_count(), radius + 2u32);
        }
    }

    #[test]
    fn radius_needs_some_positive_degree() {
        let dead = FisDescriptor::table(vec![(nat(0), ur(0, 1))], UnitRational::zero()).unwrap();
        let (sig, interp) = unary_sig_and_interp();
        assert!(matches!(
            feasibility_radius(&dead, &sig, &interp, 8),
            Err(FisError::NoPositiveTerm)
        ));
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            FisDescriptor::table(vec![(nat(1), ur(1, 1))], UnitRational::zero()),
            Err(FisError::TableKeys)
        ));
        assert!(matches!(
            FisDescriptor::table(
                vec![(nat(0), ur(1, 2)), (nat(1), ur(3, 4))],
                UnitRational::zero()
            ),
            Err(FisError::TableValues)
        ));
        assert!(matches!(
            FisDescriptor::table(vec![(nat(0), ur(1, 2))], ur(3, 4)),
            Err(FisError::TableTail)
        ));
    }
}
