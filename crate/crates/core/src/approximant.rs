//! Piecewise-linear approximants `f_n` and enclosures of their limit.
//!
//! Level `n` places node `k` at abscissa `k / 2^{n-1}` with ordinate
//! `x^k_n = Σ^k_n / 2^{(n-1)(n-2)/2}`, interpolates linearly between nodes and
//! is identically zero on `x <= 0`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::dyadic::Dyadic;
use crate::error::{Budget, Error, Result};
use crate::seqcore::thue_morse;
use crate::triangle::{norm_exponent, InitSpec, TriangleTable};

/// Bound on `|x^{k+1}_n - x^k_n| · 2^{n-1}`: each step equals
/// `2 |x^k_{n-1}|` and node ordinates lie in `[-1, 1]`.
pub const SLOPE_BOUND: i64 = 2;

/// `f_n` over abscissae `0..=k_max / 2^{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearApproximant {
    level: u32,
    nodes: Vec<Dyadic>,
}

impl PiecewiseLinearApproximant {
    /// Nodes from the depth-`level` row of the Thue-Morse table.
    pub fn from_sigma_row(level: u32, row: &[BigInt]) -> Self {
        assert!(level >= 1, "approximant levels start at 1");
        let e = norm_exponent(level);
        let nodes = row.iter().map(|s| Dyadic::new(s.clone(), e)).collect();
        PiecewiseLinearApproximant { level, nodes }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn nodes(&self) -> &[Dyadic] {
        &self.nodes
    }

    pub fn node(&self, k: u64) -> Option<&Dyadic> {
        self.nodes.get(usize::try_from(k).ok()?)
    }

    pub fn k_max(&self) -> u64 {
        self.nodes.len() as u64 - 1
    }

    /// Grid step is `2^{-step_exponent}`.
    pub fn step_exponent(&self) -> u64 {
        self.level as u64 - 1
    }

    pub fn abscissa(&self, k: u64) -> Dyadic {
        Dyadic::new(BigInt::from(k), self.step_exponent())
    }

    /// Rightmost abscissa covered.
    pub fn reach(&self) -> Dyadic {
        self.abscissa(self.k_max())
    }

    /// Cell index `⌊x · 2^{n-1}⌋` and the fraction `δ · 2^{n-1} ∈ [0, 1)`.
    pub fn locate(&self, x: &Dyadic) -> (BigInt, Dyadic) {
        let e = self.step_exponent();
        let k = x.floor_scaled(e);
        let t = x.mul_pow2(e as i64) - Dyadic::from_integer(k.clone());
        (k, t)
    }

    /// Exact `f_n(x)`. Zero for `x <= 0`; an error past the last node.
    pub fn eval(&self, x: &Dyadic) -> Result<Dyadic> {
        if !x.is_positive() {
            return Ok(Dyadic::zero());
        }
        let (k, t) = self.locate(x);
        let out_of_range = || Error::OutOfRange { what: "x", value: x.to_string(), limit: self.reach().to_string() };
        let k = k.to_u64().ok_or_else(out_of_range)?;
        let left = self.node(k).ok_or_else(out_of_range)?;
        if t.is_zero() {
            return Ok(left.clone());
        }
        let right = self.node(k + 1).ok_or_else(out_of_range)?;
        Ok(left + &(&t * &(right - left)))
    }
}

/// Approximants `f_1..=f_{n_max}` read off one Thue-Morse table.
#[derive(Debug, Clone)]
pub struct ApproximantFamily {
    levels: Vec<PiecewiseLinearApproximant>,
}

impl ApproximantFamily {
    /// Covers at least `[0, reach]` at every level up to `n_max`.
    pub fn build(n_max: u32, reach: &Dyadic, budget: Budget) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("approximant levels start at 1"));
        }
        let columns = reach.ceil().max(BigInt::from(1)) << (n_max - 1);
        let k_max = columns.to_u64().ok_or(Error::Resource { requested: u64::MAX, budget: budget.max_cells })?;
        // Nodes are held twice (table and dyadic copies).
        budget.check((k_max + 1).saturating_mul(2 * (n_max as u64 + 1)))?;
        let table = TriangleTable::build(&InitSpec::thue_morse(), k_max.max(1), n_max, budget)?;
        Ok(Self::from_table(&table))
    }

    pub fn from_table(table: &TriangleTable<BigInt>) -> Self {
        let levels = (1..=table.n_max()).map(|n| PiecewiseLinearApproximant::from_sigma_row(n, table.row(n))).collect();
        ApproximantFamily { levels }
    }

    pub fn n_max(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, n: u32) -> Result<&PiecewiseLinearApproximant> {
        if n == 0 {
            return Err(Error::InvalidArgument("approximant levels start at 1"));
        }
        self.levels.get(n as usize - 1).ok_or(Error::OutOfRange {
            what: "level",
            value: n.to_string(),
            limit: self.n_max().to_string(),
        })
    }

    /// `x^k_n`.
    pub fn node_value(&self, n: u32, k: u64) -> Result<Dyadic> {
        let level = self.level(n)?;
        level.node(k).cloned().ok_or(Error::OutOfRange {
            what: "node index",
            value: k.to_string(),
            limit: level.k_max().to_string(),
        })
    }

    pub fn eval_fn(&self, n: u32, x: &Dyadic) -> Result<Dyadic> {
        self.level(n)?.eval(x)
    }

    /// Encloses `f_∞(x)`; see [`eval_finfty`].
    pub fn enclose_limit(&self, x: &Dyadic, tol: &Dyadic) -> Result<Enclosure> {
        enclose(x, tol, self.n_max(), |n| self.eval_fn(n, x))
    }
}

/// `f_∞` at an integer: `0` at even, `u_m` at `2m + 1`, `0` for negatives.
pub fn limit_at_integer(j: &BigInt) -> Dyadic {
    if j.sign() != num_bigint::Sign::Plus || (j % 2u8) == BigInt::from(0) {
        return Dyadic::zero();
    }
    let m: BigInt = j >> 1;
    match m.to_u64() {
        Some(m) => Dyadic::from_i64(thue_morse(m).value() as i64),
        None => Dyadic::zero(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalEstimate {
    pub lower: Dyadic,
    pub upper: Dyadic,
    /// Highest level whose value entered the bounds (0 when exact from the
    /// integer values alone).
    pub level_reached: u32,
}

impl IntervalEstimate {
    pub fn width(&self) -> Dyadic {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        &self.lower <= v && v <= &self.upper
    }
}

impl fmt::Display for IntervalEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnclosureStatus {
    Converged,
    /// Width still above tolerance when the level cap was hit.
    LevelCapReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub interval: IntervalEstimate,
    pub status: EnclosureStatus,
}

/// Interval enclosure of `f_∞(x)` using only exact facts:
///
/// * exact values at integers (`0` at even, `u_m` at `2m + 1`);
/// * `f_∞` has the sign of `u_m` on `[2m, 2m + 2]` and lies in `[-1, 1]`;
/// * Lipschitz cones of slope [`SLOPE_BOUND`] from the two neighbouring
///   integers;
/// * the one-sided bound from `f_n(x)`, `n >= 2`: decreasing in `n` on
///   `[2m, 2m + 1]` when `u_m = -1`, increasing when `u_m = +1`, and the other
///   way round on `[2m + 1, 2m + 2]`.
///
/// Levels are consumed in order until the width is at most `tol` or
/// `n_max` is reached.
pub fn eval_finfty(x: &Dyadic, tol: &Dyadic, n_max: u32, budget: Budget) -> Result<Enclosure> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    if !x.is_positive() || x.is_integer() {
        return enclose(x, tol, 0, |_| unreachable!());
    }
    let family = ApproximantFamily::build(n_max, x, budget)?;
    family.enclose_limit(x, tol)
}

fn enclose(x: &Dyadic, tol: &Dyadic, n_max: u32, mut level_value: impl FnMut(u32) -> Result<Dyadic>) -> Result<Enclosure> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let exact = |v: Dyadic| Enclosure {
        interval: IntervalEstimate { lower: v.clone(), upper: v, level_reached: 0 },
        status: EnclosureStatus::Converged,
    };
    if !x.is_positive() {
        return Ok(exact(Dyadic::zero()));
    }
    let j = x.floor();
    if x.is_integer() {
        return Ok(exact(limit_at_integer(&j)));
    }

    let j1 = &j + 1u8;
    let (left, right) = (limit_at_integer(&j), limit_at_integer(&j1));
    let slope = Dyadic::from_i64(SLOPE_BOUND);
    let dl = x - &Dyadic::from_integer(j.clone());
    let dr = &Dyadic::from_integer(j1) - x;

    let mut lower = Dyadic::from_i64(-1)
        .max(&left - &(&slope * &dl))
        .max(&right - &(&slope * &dr));
    let mut upper = Dyadic::one()
        .min(&left + &(&slope * &dl))
        .min(&right + &(&slope * &dr));

    let m: BigInt = &j >> 1;
    let u_m = thue_morse(m.to_u64().ok_or(Error::InvalidArgument("x too large"))?);
    if u_m.is_minus() {
        upper = upper.min(Dyadic::zero());
    } else {
        lower = lower.max(Dyadic::zero());
    }

    // Decreasing in n exactly when the cell's sign of u and parity of j say so.
    let first_half = (&j % 2u8) == BigInt::from(0);
    let decreasing = first_half == u_m.is_minus();

    let mut level_reached = 0;
    let mut status = EnclosureStatus::LevelCapReached;
    if &upper - &lower <= *tol {
        status = EnclosureStatus::Converged;
    } else {
        for n in 2..=n_max {
            let v = level_value(n)?;
            if decreasing {
                upper = upper.min(v);
            } else {
                lower = lower.max(v);
            }
            level_reached = n;
            if &upper - &lower <= *tol {
                status = EnclosureStatus::Converged;
                break;
            }
        }
    }
    Ok(Enclosure { interval: IntervalEstimate { lower, upper, level_reached }, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn family(n_max: u32, reach: i64) -> ApproximantFamily {
        ApproximantFamily::build(n_max, &Dyadic::from_i64(reach), Budget::default()).unwrap()
    }

    #[test]
    fn node_values() {
        let f = family(7, 2);
        assert_eq!(f.node_value(4, 4).unwrap(), d("-1/8"));
        assert_eq!(f.node_value(4, 8).unwrap(), d("-1"));
        assert_eq!(f.node_value(7, 0).unwrap(), d("0"));
        assert!(f.node_value(8, 0).is_err());
        assert!(f.node_value(4, 1 << 20).is_err());
    }

    #[test]
    fn level_three_nodes_match_closed_forms() {
        // x^{8k+l}_3 = (0, 0, 0, 1/2, 1, 1, 1, 1/2) · u_k
        let f = family(3, 8);
        let base = ["0", "0", "0", "1/2", "1", "1", "1", "1/2"];
        for k in 0..4u64 {
            for (l, b) in base.iter().enumerate() {
                let expected = thue_morse(k).apply(d(b));
                assert_eq!(f.node_value(3, 8 * k + l as u64).unwrap(), expected);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let f = family(6, 2);
        assert_eq!(f.eval_fn(4, &d("1/2")).unwrap(), d("-1/8"));
        assert_eq!(f.eval_fn(6, &d("-3")).unwrap(), d("0"));
        assert_eq!(f.eval_fn(5, &d("1/2")).unwrap(), d("-1/4"));
        assert_eq!(f.eval_fn(6, &d("1/2")).unwrap(), d("-11/32"));
        // midway between -1/8 and -3/8
        assert_eq!(f.eval_fn(4, &d("9/16")).unwrap(), d("-1/4"));
    }

    #[test]
    fn eval_past_reach_is_distinct_error() {
        let f = family(4, 2);
        let reach = f.level(4).unwrap().reach();
        assert!(f.eval_fn(4, &reach).is_ok());
        let past = &reach + &d("1/1024");
        assert!(matches!(f.eval_fn(4, &past), Err(Error::OutOfRange { what: "x", .. })));
        assert_eq!(f.eval_fn(4, &d("-1000")).unwrap(), Dyadic::zero());
    }

    #[test]
    fn grid_consistency() {
        let f = family(12, 2);
        for n in 1..=12 {
            let level = f.level(n).unwrap();
            for k in 0..=level.k_max() {
                assert_eq!(level.eval(&level.abscissa(k)).unwrap(), level.nodes()[k as usize]);
            }
        }
    }

    #[test]
    fn limit_at_integers() {
        let tol = d("1/1024");
        for (x, v) in [("1", "-1"), ("6", "0"), ("7", "-1"), ("5", "1"), ("-3", "0")] {
            let e = eval_finfty(&d(x), &tol, 10, Budget::default()).unwrap();
            assert_eq!(e.status, EnclosureStatus::Converged);
            assert_eq!((e.interval.lower.clone(), e.interval.upper.clone()), (d(v), d(v)), "x={x}");
        }
    }

    #[test]
    fn limit_at_one_half() {
        let e = eval_finfty(&d("1/2"), &d("1/1024"), 12, Budget::default()).unwrap();
        assert_eq!(e.status, EnclosureStatus::LevelCapReached);
        assert_eq!(e.interval.level_reached, 12);
        // monotone side: f_12(1/2)
        assert_eq!(e.interval.upper, d("-1013/2048"));
        assert!(e.interval.upper <= d("-11/32"));
        // cones of slope 2 from f(0) = 0 and f(1) = -1 give nothing better than -1
        assert_eq!(e.interval.lower, d("-1"));
    }

    #[test]
    fn enclosure_contains_later_levels() {
        let f = family(14, 8);
        let coarse = ApproximantFamily { levels: f.levels[..9].to_vec() };
        for x in ["1/4", "3/4", "5/4", "7/4", "9/4", "13/4", "27/8", "61/8"] {
            let e = coarse.enclose_limit(&d(x), &d("1/1048576")).unwrap();
            for n in 10..=14 {
                let v = f.eval_fn(n, &d(x)).unwrap();
                // later levels move monotonically towards the limit, so they stay inside
                assert!(e.interval.contains(&v), "x={x} n={n} v={v} in {}", e.interval);
            }
        }
    }

    #[test]
    fn converges_where_cones_pin_the_value() {
        // Near an integer the slope cones alone are tight.
        let x = d("1/65536");
        let e = eval_finfty(&x, &d("1/4096"), 4, Budget::default()).unwrap();
        assert_eq!(e.status, EnclosureStatus::Converged);
        assert!(e.interval.width() <= d("1/4096"));
        assert!(eval_finfty(&x, &d("0"), 4, Budget::default()).is_err());
    }
}
