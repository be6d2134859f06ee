//! Unbounded natural numbers and the exponential tower.
//!
//! Everything downstream of this module works with exact integers; there is
//! no floating point anywhere in the crate.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Natural numbers of unbounded magnitude. `2^1000` is an ordinary value.
pub type Natural = BigUint;

/// Default cap on the tower index accepted by [`tower`].
///
/// `tower(5)` has 19,729 decimal digits and is fine; `tower(6)` has more bits
/// than there are atoms to store them in, so asking for it must fail cleanly.
pub const DEFAULT_TOWER_CAP: u32 = 6;

/// Largest exponent (in bits) that [`pow2`] will materialize.
pub const MAX_POW2_BITS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatError {
    /// The requested tower index is above the configured cap.
    #[error("tower index {index} exceeds the guard cap {cap}: the result is not a feasible computation")]
    TowerGuard { index: u32, cap: u32 },
    /// The result would need more bits than this process can represent.
    #[error("2^{exponent} does not fit in memory (limit {limit} bits)")]
    Unrepresentable { exponent: String, limit: u64 },
}

/// Convenience constructor from a machine integer.
pub fn nat(n: u64) -> Natural {
    Natural::from(n)
}

/// Exact `2^e`, refusing exponents whose result cannot be stored.
pub fn pow2(e: &Natural) -> Result<Natural, NatError> {
    let bits = match u64::try_from(e) {
        Ok(b) if b <= MAX_POW2_BITS => b,
        _ => {
            return Err(NatError::Unrepresentable {
                exponent: e.to_string(),
                limit: MAX_POW2_BITS,
            })
        }
    };
    Ok(Natural::one() << bits)
}

/// The exponential tower with the default guard cap.
pub fn tower(k: u32) -> Result<Natural, NatError> {
    tower_with_cap(k, DEFAULT_TOWER_CAP)
}

/// The exponential tower: index 0 maps to 1 and each step exponentiates,
/// so index k+1 is two raised to the value at index k.
///
/// `cap` guards the index; indices whose value cannot be materialized still
/// fail cleanly with [`NatError::Unrepresentable`].
pub fn tower_with_cap(k: u32, cap: u32) -> Result<Natural, NatError> {
    if k > cap {
        return Err(NatError::TowerGuard { index: k, cap });
    }
    let mut value = Natural::one();
    for _ in 0..k {
        value = pow2(&value)?;
    }
    Ok(value)
}

/// `floor(log2(n)) + 1` for `n >= 1`; equivalently the bit length of `n`.
///
/// Callers must handle `n = 0` themselves (the logarithm is undefined there).
pub fn floor_log2_plus1(n: &Natural) -> Option<Natural> {
    if n.is_zero() {
        None
    } else {
        Some(Natural::from(n.bits()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_base_cases() {
        assert_eq!(tower(0).unwrap(), nat(1));
        assert_eq!(tower(1).unwrap(), nat(2));
        assert_eq!(tower(2).unwrap(), nat(4));
        assert_eq!(tower(3).unwrap(), nat(16));
        assert_eq!(tower(4).unwrap(), nat(65536));
    }

    #[test]
    fn tower_recurrence_holds_exactly() {
        // 2_{k+1} = 2^{2_k}, checked for every index whose value fits.
        for k in 0..=4u32 {
            let t_k = tower(k).unwrap();
            let t_next = tower(k + 1).unwrap();
            assert_eq!(t_next, pow2(&t_k).unwrap(), "recurrence at k={k}");
        }
    }

    #[test]
    fn tower_five_has_expected_size() {
        let t5 = tower(5).unwrap();
        assert_eq!(t5.to_string().len(), 19729);
    }

    #[test]
    fn tower_guard_is_a_clean_error() {
        assert_eq!(
            tower(7),
            Err(NatError::TowerGuard { index: 7, cap: 6 })
        );
        // Index 6 passes the guard but its value has 2^65536 bits; the
        // representability check has to catch it rather than aborting.
        assert!(matches!(tower(6), Err(NatError::Unrepresentable { .. })));
        assert_eq!(
            tower_with_cap(4, 3),
            Err(NatError::TowerGuard { index: 4, cap: 3 })
        );
    }

    #[test]
    fn pow2_handles_large_but_storable_exponents() {
        let e = nat(1 << 12);
        let v = pow2(&e).unwrap();
        assert_eq!(v.bits(), (1 << 12) + 1);
    }

    #[test]
    fn floor_log2_matches_bit_length() {
        assert_eq!(floor_log2_plus1(&nat(0)), None);
        assert_eq!(floor_log2_plus1(&nat(1)).unwrap(), nat(1));
        assert_eq!(floor_log2_plus1(&nat(2)).unwrap(), nat(2));
        assert_eq!(floor_log2_plus1(&nat(7)).unwrap(), nat(3));
        assert_eq!(floor_log2_plus1(&nat(8)).unwrap(), nat(4));
    }
}
