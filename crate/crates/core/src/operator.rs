//! The linear map `T(y)_1 = y_1`, `T(y)_{n+1} = y_{n+1} + y_n / 2^{n-1}` and the
//! forced orbit `y^{k+1} = T(y^k) - (u_k, 0, 0, …)`, `y^0 = 0`.
//!
//! `T` is lower-triangular in the coordinate index, so truncating to the
//! first `N` coordinates is exact for those coordinates. The orbit equals the
//! negated node values: `y^k_n = -x^k_n`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Budget, Error, Result};
use crate::seqcore::thue_morse;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceState {
    /// `y_1..=y_N`, stored zero-based.
    pub coords: Vec<BigRational>,
    /// Number of forced steps taken from `y^0`.
    pub k: u64,
}

impl SequenceState {
    pub fn zero(len: usize) -> Self {
        SequenceState { coords: vec![BigRational::zero(); len], k: 0 }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `y_n`, one-based.
    pub fn coord(&self, n: usize) -> &BigRational {
        &self.coords[n - 1]
    }
}

/// Applies `T`; the iteration count is carried over unchanged.
pub fn operator_t(state: &SequenceState) -> SequenceState {
    let y = &state.coords;
    let mut out = Vec::with_capacity(y.len());
    if let Some(first) = y.first() {
        out.push(first.clone());
    }
    for i in 1..y.len() {
        // zero-based i is coordinate n + 1 with n = i: add y_n / 2^{n-1}
        let scale = BigRational::from_integer(BigInt::one() << (i - 1));
        out.push(&y[i] + &y[i - 1] / scale);
    }
    SequenceState { coords: out, k: state.k }
}

/// `y^0..=y^K` truncated to `N` coordinates.
pub fn iterate_t(k_max: u64, len: usize, budget: Budget) -> Result<Vec<SequenceState>> {
    if len == 0 {
        return Err(Error::InvalidArgument("truncation length must be at least 1"));
    }
    budget.check((k_max + 1).saturating_mul(len as u64))?;
    let mut orbit = Vec::with_capacity(k_max as usize + 1);
    orbit.push(SequenceState::zero(len));
    for k in 0..k_max {
        let mut next = operator_t(&orbit[k as usize]);
        next.coords[0] -= BigRational::from_integer(thue_morse(k).to_bigint());
        next.k = k + 1;
        orbit.push(next);
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn ints(s: &SequenceState) -> Vec<BigRational> {
        s.coords.clone()
    }

    #[test]
    fn t_is_linear_at_zero() {
        assert_eq!(operator_t(&SequenceState::zero(6)), SequenceState::zero(6));
    }

    #[test]
    fn t_on_unit_vector() {
        let mut e1 = SequenceState::zero(4);
        e1.coords[0] = r(1, 1);
        assert_eq!(ints(&operator_t(&e1)), [r(1, 1), r(1, 1), r(0, 1), r(0, 1)]);
    }

    #[test]
    fn t_coordinates() {
        let s = SequenceState { coords: vec![r(3, 1), r(5, 1), r(7, 1), r(1, 1)], k: 0 };
        let t = operator_t(&s);
        assert_eq!(t.coord(1), &r(3, 1));
        assert_eq!(t.coord(2), &r(8, 1)); // b + a
        assert_eq!(t.coord(3), &r(7 * 2 + 5, 2)); // y_3 + y_2 / 2
        assert_eq!(t.coord(4), &r(4 + 7, 4)); // y_4 + y_3 / 4
    }

    #[test]
    fn first_orbit_steps() {
        let orbit = iterate_t(2, 3, Budget::default()).unwrap();
        assert_eq!(ints(&orbit[1]), [r(1, 1), r(0, 1), r(0, 1)]);
        assert_eq!(ints(&orbit[2]), [r(0, 1), r(1, 1), r(0, 1)]);
        assert_eq!(orbit[2].k, 2);
    }

    #[test]
    fn truncation_is_exact() {
        let long = iterate_t(64, 10, Budget::default()).unwrap();
        let short = iterate_t(64, 4, Budget::default()).unwrap();
        for (a, b) in long.iter().zip(&short) {
            assert_eq!(&a.coords[..4], b.coords.as_slice());
        }
    }

    #[test]
    fn rejects_empty_truncation_and_budget() {
        assert!(iterate_t(3, 0, Budget::default()).is_err());
        assert!(matches!(iterate_t(1000, 100, Budget::cells(10)), Err(Error::Resource { .. })));
    }
}
