//! Truth transfer policies: how much credibility survives a rule application.
//!
//! A policy maps the credibilities of a rule's premises to the credibility of
//! its conclusion. Admissible policies vanish on all-zero premises, stay
//! positive on all-one premises, and never exceed the minimum premise. The
//! identity on axioms is built in: leaves always carry credibility 1.

use crate::derivation::RuleId;
use crate::rat::UnitRational;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TtpError {
    #[error("erosion factor must satisfy 0 < E < 1, got {0}")]
    ErosionOutOfRange(UnitRational),
    #[error("grid denominator must be at least 1")]
    ZeroGrid,
}

/// A single rule's transfer function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicyKind {
    /// `min(premises)`: nothing is lost. Classical proof theory.
    ZeroDecay,
    /// `max(0, min(premises) - E)`: a constant toll per application.
    Erosion(UnitRational),
    /// Product of the premises; admissible since everything is in `[0,1]`.
    Product,
    /// Constant output. Violates the vanishing condition unless zero;
    /// kept for exercising the validator.
    Constant(UnitRational),
    /// `max(premises)`. Violates the min bound; validator fodder.
    MaxPremise,
}

impl PolicyKind {
    pub fn apply(&self, premises: &[UnitRational]) -> UnitRational {
        match self {
            PolicyKind::ZeroDecay => min_of(premises),
            PolicyKind::Erosion(e) => min_of(premises).saturating_sub(e),
            PolicyKind::Product => premises
                .iter()
                .fold(UnitRational::one(), |acc, p| &acc * p),
            PolicyKind::Constant(c) => c.clone(),
            PolicyKind::MaxPremise => premises
                .iter()
                .cloned()
                .max()
                .unwrap_or_else(UnitRational::zero),
        }
    }
}

fn min_of(premises: &[UnitRational]) -> UnitRational {
    premises
        .iter()
        .cloned()
        .min()
        .unwrap_or_else(UnitRational::one)
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::ZeroDecay => write!(f, "(zero-decay)"),
            PolicyKind::Erosion(e) => write!(f, "(erosion {e})"),
            PolicyKind::Product => write!(f, "(product)"),
            PolicyKind::Constant(c) => write!(f, "(constant {c})"),
            PolicyKind::MaxPremise => write!(f, "(max-premise)"),
        }
    }
}

/// Per-rule transfer functions with a default for unlisted rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTransferPolicy {
    default: PolicyKind,
    per_rule: BTreeMap<RuleId, PolicyKind>,
}

impl TruthTransferPolicy {
    pub fn uniform(kind: PolicyKind) -> Self {
        TruthTransferPolicy { default: kind, per_rule: BTreeMap::new() }
    }

    /// Classical limit: every rule preserves the minimum premise credibility.
    pub fn zero_decay() -> Self {
        TruthTransferPolicy::uniform(PolicyKind::ZeroDecay)
    }

    /// Constant credibility erosion on every rule. Requires `0 < E < 1`.
    pub fn erosion(e: UnitRational) -> Result<Self, TtpError> {
        if e.is_zero() || e.is_one() {
            return Err(TtpError::ErosionOutOfRange(e));
        }
        Ok(TruthTransferPolicy::uniform(PolicyKind::Erosion(e)))
    }

    pub fn product() -> Self {
        TruthTransferPolicy::uniform(PolicyKind::Product)
    }

    pub fn with_rule(mut self, rule: RuleId, kind: PolicyKind) -> Self {
        self.per_rule.insert(rule, kind);
        self
    }

    pub fn policy_for(&self, rule: RuleId) -> &PolicyKind {
        self.per_rule.get(&rule).unwrap_or(&self.default)
    }

    pub fn default_policy(&self) -> &PolicyKind {
        &self.default
    }

    pub fn overrides(&self) -> &BTreeMap<RuleId, PolicyKind> {
        &self.per_rule
    }

    pub fn apply(&self, rule: RuleId, premises: &[UnitRational]) -> UnitRational {
        self.policy_for(rule).apply(premises)
    }

    /// All rules a policy can be asked about, in tie-breaking order.
    pub fn checkable_rules() -> [RuleId; 7] {
        [
            RuleId::Mp,
            RuleId::AndIntro,
            RuleId::AndElimL,
            RuleId::AndElimR,
            RuleId::NotElim,
            RuleId::NotIntro,
            RuleId::ExistsIntro,
        ]
    }
}

/// One admissibility violation, with the witnessing grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtpViolation {
    pub rule: RuleId,
    pub point: Vec<UnitRational>,
    pub condition: TtpCondition,
    pub output: UnitRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtpCondition {
    /// Output at all-zero premises must be 0.
    VanishesAtZero,
    /// Output at all-one premises must be positive.
    PositiveAtOne,
    /// Output must never exceed the minimum premise.
    BoundedByMin,
}

impl fmt::Display for TtpCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TtpCondition::VanishesAtZero => write!(f, "output at all-zero premises is not 0"),
            TtpCondition::PositiveAtOne => write!(f, "output at all-one premises is not positive"),
            TtpCondition::BoundedByMin => write!(f, "output exceeds the minimum premise"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtpReport {
    pub ok: bool,
    pub grid_denominator: u64,
    pub violations: Vec<TtpViolation>,
}

/// Check the three admissibility conditions for every rule on the exhaustive
/// rational grid `{0, 1/q, ..., 1}^arity`. Exact arithmetic, so a pass on the
/// grid is a real pass of every grid point, not an approximation of one.
pub fn validate_ttp(policy: &TruthTransferPolicy, grid_denominator: u64) -> Result<TtpReport, TtpError> {
    if grid_denominator == 0 {
        return Err(TtpError::ZeroGrid);
    }
    let q = grid_denominator;
    let grid: Vec<UnitRational> = (0..=q)
        .map(|i| UnitRational::from_u64_ratio(i, q).expect("grid point"))
        .collect();
    let mut violations = Vec::new();

    for rule in TruthTransferPolicy::checkable_rules() {
        let kind = policy.policy_for(rule);
        let arity = rule.arity();
        let mut picks = vec![0usize; arity];
        loop {
            let point: Vec<UnitRational> = picks.iter().map(|&i| grid[i].clone()).collect();
            let output = kind.apply(&point);
            let minimum = point
                .iter()
                .cloned()
                .min()
                .unwrap_or_else(UnitRational::one);
            if point.iter().all(UnitRational::is_zero) && !output.is_zero() {
                violations.push(TtpViolation {
                    rule,
                    point: point.clone(),
                    condition: TtpCondition::VanishesAtZero,
                    output: output.clone(),
                });
            }
            if point.iter().all(UnitRational::is_one) && output.is_zero() {
                violations.push(TtpViolation {
                    rule,
                    point: point.clone(),
                    condition: TtpCondition::PositiveAtOne,
                    output: output.clone(),
                });
            }
            if output > minimum {
                violations.push(TtpViolation {
                    rule,
                    point,
                    condition: TtpCondition::BoundedByMin,
                    output,
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
                if picks[i] <= q as usize {
                    break;
                }
                picks[i] = 0;
            }
            if done {
                break;
            }
        }
    }

    Ok(TtpReport { ok: violations.is_empty(), grid_denominator: q, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ur(n: u64, d: u64) -> UnitRational {
        UnitRational::from_u64_ratio(n, d).unwrap()
    }

    #[test]
    fn erosion_examples() {
        let ttp = TruthTransferPolicy::erosion(ur(1, 4)).unwrap();
        assert_eq!(
            ttp.apply(RuleId::Mp, &[ur(3, 4), UnitRational::one()]),
            ur(1, 2)
        );
        assert_eq!(
            ttp.apply(RuleId::Mp, &[UnitRational::zero(), UnitRational::zero()]),
            UnitRational::zero()
        );
        assert_eq!(
            ttp.apply(RuleId::Mp, &[UnitRational::one(), UnitRational::one()]),
            ur(3, 4)
        );
    }

    #[test]
    fn erosion_range_is_enforced() {
        assert!(TruthTransferPolicy::erosion(UnitRational::zero()).is_err());
        assert!(TruthTransferPolicy::erosion(UnitRational::one()).is_err());
        assert!(TruthTransferPolicy::erosion(ur(1, 1024)).is_ok());
    }

    #[test]
    fn builtin_policies_pass_grid() {
        for policy in [
            TruthTransferPolicy::zero_decay(),
            TruthTransferPolicy::erosion(ur(1, 4)).unwrap(),
            TruthTransferPolicy::product(),
        ] {
            let report = validate_ttp(&policy, 8).unwrap();
            assert!(report.ok, "{policy:?}: {:?}", report.violations.first());
        }
    }

    #[test]
    fn constant_policy_fails_at_zero() {
        let policy = TruthTransferPolicy::uniform(PolicyKind::Constant(ur(1, 2)));
        let report = validate_ttp(&policy, 2).unwrap();
        assert!(!report.ok);
        let v = report
            .violations
            .iter()
            .find(|v| v.condition == TtpCondition::VanishesAtZero)
            .unwrap();
        assert!(v.point.iter().all(UnitRational::is_zero));
    }

    #[test]
    fn full_erosion_fails_positivity() {
        // constructing the policy kind directly dodges the constructor guard
        let policy = TruthTransferPolicy::uniform(PolicyKind::Erosion(UnitRational::one()));
        let report = validate_ttp(&policy, 4).unwrap();
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == TtpCondition::PositiveAtOne));
    }

    #[test]
    fn max_policy_exceeds_min() {
        let policy = TruthTransferPolicy::uniform(PolicyKind::MaxPremise);
        let report = validate_ttp(&policy, 4).unwrap();
        assert!(!report.ok);
        let v = report
            .violations
            .iter()
            .find(|v| v.condition == TtpCondition::BoundedByMin)
            .unwrap();
        assert_eq!(v.rule, RuleId::Mp);
        // first witness in grid order: (0, 1/4)
        assert_eq!(v.point, vec![UnitRational::zero(), ur(1, 4)]);
    }

    #[test]
    fn per_rule_overrides_apply() {
        let ttp = TruthTransferPolicy::zero_decay()
            .with_rule(RuleId::Mp, PolicyKind::Erosion(ur(1, 8)));
        assert_eq!(
            ttp.apply(RuleId::Mp, &[UnitRational::one(), UnitRational::one()]),
            ur(7, 8)
        );
        assert_eq!(
            ttp.apply(RuleId::AndIntro, &[UnitRational::one(), UnitRational::one()]),
            UnitRational::one()
        );
        assert!(validate_ttp(&ttp, 8).unwrap().ok);
    }
}
