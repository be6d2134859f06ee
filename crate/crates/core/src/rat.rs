//! Exact rationals confined to the unit interval.
//!
//! Degrees of feasibility and proof credibilities both live in `[0, 1]`.
//! They are stored in lowest terms and compared exactly; the crate never
//! rounds, so `1 - n/2^k` stays distinguishable from `0` right up to
//! `n = 2^k - 1`.

use crate::nat::Natural;
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::Mul;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatError {
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("{numer}/{denom} lies outside the unit interval")]
    OutOfRange { numer: String, denom: String },
}

/// An exact rational in `[0, 1]`, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitRational(Ratio<Natural>);

impl UnitRational {
    pub fn zero() -> Self {
        UnitRational(Ratio::zero())
    }

    pub fn one() -> Self {
        UnitRational(Ratio::one())
    }

    /// Exact construction; rejects values outside the unit interval.
    pub fn new(numer: Natural, denom: Natural) -> Result<Self, RatError> {
        if denom.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        if numer > denom {
            return Err(RatError::OutOfRange {
                numer: numer.to_string(),
                denom: denom.to_string(),
            });
        }
        Ok(UnitRational(Ratio::new(numer, denom)))
    }

    /// `min(numer/denom, 1)`. Panics only on a zero denominator.
    pub fn ratio_clamped(numer: Natural, denom: Natural) -> Result<Self, RatError> {
        if denom.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        if numer > denom {
            Ok(UnitRational::one())
        } else {
            Ok(UnitRational(Ratio::new(numer, denom)))
        }
    }

    /// `max(0, 1 - n/d)`, the clamp every linear segment needs.
    pub fn one_minus_ratio(n: &Natural, d: &Natural) -> Result<Self, RatError> {
        if d.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        if n >= d {
            Ok(UnitRational::zero())
        } else {
            Ok(UnitRational(Ratio::new(d - n, d.clone())))
        }
    }

    pub fn from_u64_ratio(n: u64, d: u64) -> Result<Self, RatError> {
        UnitRational::new(Natural::from(n), Natural::from(d))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - x`; total on the unit interval.
    pub fn complement(&self) -> Self {
        UnitRational(Ratio::one() - self.0.clone())
    }

    /// `max(0, self - other)`.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        if self.0 <= other.0 {
            UnitRational::zero()
        } else {
            UnitRational(self.0.clone() - other.0.clone())
        }
    }

    pub fn numer(&self) -> &Natural {
        self.0.numer()
    }

    pub fn denom(&self) -> &Natural {
        self.0.denom()
    }
}

impl Mul for &UnitRational {
    type Output = UnitRational;

    fn mul(self, rhs: &UnitRational) -> UnitRational {
        UnitRational(self.0.clone() * rhs.0.clone())
    }
}

impl fmt::Display for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
