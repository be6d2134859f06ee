//! Finite arithmetic with an absorbing infinity.
//!
//! Collapsing a fuzzy initial segment identifies every number beyond the
//! horizon with a single element: past the radius, every number is the same
//! number. Inside the radius the operations agree with ordinary arithmetic
//! whenever the true result stays inside too.

use crate::nat::Natural;
use std::fmt;

/// An element of the collapsed arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SatNum {
    Fin(Natural),
    Infinity,
}

impl fmt::Display for SatNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatNum::Fin(n) => write!(f, "{n}"),
            SatNum::Infinity => write!(f, "inf"),
        }
    }
}

/// The arithmetic `{0..radius} ∪ {∞}` with all operations saturating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatedArithmetic {
    radius: Natural,
}

impl SaturatedArithmetic {
    pub fn new(radius: Natural) -> Self {
        SaturatedArithmetic { radius }
    }

    pub fn radius(&self) -> &Natural {
        &self.radius
    }

    /// Number of elements, counting infinity.
    pub fn element_count(&self) -> Natural {
        &self.radius + 2u32
    }

    /// Inject a natural, collapsing anything past the radius.
    pub fn value(&self, n: Natural) -> SatNum {
        if n <= self.radius {
            SatNum::Fin(n)
        } else {
            SatNum::Infinity
        }
    }

    pub fn elements(&self) -> Vec<SatNum> {
        let mut out = Vec::new();
        let mut n = Natural::from(0u32);
        while n <= self.radius {
            out.push(SatNum::Fin(n.clone()));
            n += 1u32;
        }
        out.push(SatNum::Infinity);
        out
    }

    pub fn succ(&self, a: &SatNum) -> SatNum {
        match a {
            SatNum::Infinity => SatNum::Infinity,
            SatNum::Fin(n) => self.value(n + 1u32),
        }
    }

    pub fn add(&self, a: &SatNum, b: &SatNum) -> SatNum {
        match (a, b) {
            (SatNum::Infinity, _) | (_, SatNum::Infinity) => SatNum::Infinity,
            (SatNum::Fin(x), SatNum::Fin(y)) => self.value(x + y),
        }
    }

    pub fn mul(&self, a: &SatNum, b: &SatNum) -> SatNum {
        match (a, b) {
            (SatNum::Infinity, _) | (_, SatNum::Infinity) => SatNum::Infinity,
            (SatNum::Fin(x), SatNum::Fin(y)) => self.value(x * y),
        }
    }
}
