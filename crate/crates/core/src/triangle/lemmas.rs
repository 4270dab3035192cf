//! Exhaustive checks of the coefficient lemmas at a given depth.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::coeffs::{central_value, coefficient_row, CoefficientRow, CoefficientSource};
use super::{row_at_depth, InitSpec, Scalar};
use crate::error::{Budget, Error, Result};
use crate::report::VerificationReport;
use crate::seqcore::thue_morse;

/// Compares `Σ^c_n` against `a(n, c mod 2^n) · u_{c div 2^n}` for every
/// column `c` of `sigma_row`.
pub fn lemma1_on_row(sigma_row: &[BigInt], coeffs: &CoefficientRow) -> VerificationReport {
    let n = coeffs.n();
    let mut report = VerificationReport::new(format!("lemma1 n={n}"));
    let period = coeffs.len();
    for (c, value) in sigma_row.iter().enumerate() {
        let (k, l) = (c / period, c % period);
        let expected = thue_morse(k as u64).apply(coeffs.get(l).clone());
        report.check(&expected == value, || format!("n={n} k={k} l={l}"), &expected, value);
    }
    report
}

/// Factorization `Σ^{2^n k + l}_n = a(n, l) u_k` for `k = 0..=k_count`, all
/// `l`. The table side is the plain recurrence; the coefficient side comes
/// from the row recurrences, so neither assumes the factorization.
pub fn verify_lemma1(n: u32, k_count: u64, budget: Budget) -> Result<VerificationReport> {
    let coeffs = coefficient_row(n, CoefficientSource::FromRecurrence, budget)?;
    let period = coeffs.len() as u64;
    let columns = period
        .checked_mul(k_count + 1)
        .ok_or(Error::Resource { requested: u64::MAX, budget: budget.max_cells })?;
    let sigma = row_at_depth(&InitSpec::thue_morse(), columns - 1, n, budget)?;
    Ok(lemma1_on_row(&sigma, &coeffs))
}

/// Bounds `0 <= a(n, l) <= 2^{(n-1)(n-2)/2}`, the central value, the half-row
/// symmetry `a(n+1, l+2^n) = a(n+1, 2^n) - a(n+1, l)` and the monotone first
/// half of row `n + 1`.
pub fn check_bounds_and_symmetry(n: u32, budget: Budget) -> Result<VerificationReport> {
    let row = coefficient_row(n, CoefficientSource::FromRecurrence, budget)?;
    let next = row.next();
    let mut report = VerificationReport::new(format!("bounds n={n}"));
    let cap = central_value(n);

    report.check(row.central() == &cap, || format!("central a({n},2^{})", n - 1), &cap, row.central());
    let next_cap = central_value(n + 1);
    report.check(next.central() == &next_cap, || format!("central a({},2^{n})", n + 1), &next_cap, next.central());

    for (l, a) in row.values().iter().enumerate() {
        let ok = !a.is_negative() && a <= &cap;
        report.check(ok, || format!("bound a({n},{l})"), format!("in [0, {cap}]"), a);
    }

    let half = row.len();
    let pivot = next.get(half);
    for l in 0..half {
        let expected = pivot - next.get(l);
        let actual = next.get(l + half);
        report.check(actual == &expected, || format!("symmetry a({},{})", n + 1, l + half), &expected, actual);
    }

    report.check(next.get(0).is_zero(), || format!("a({},0)", n + 1), 0, next.get(0));
    for l in 0..half {
        let (lo, hi) = (next.get(l), next.get(l + 1));
        report.check(lo <= hi, || format!("monotone a({},{l}..{})", n + 1, l + 1), format!("<= {hi}"), lo);
    }
    Ok(report)
}

/// Growth chain `a(n, 2l+1) >= a(n, 2l) >= 2^{n-2} a(n-1, l)` for
/// `l < 2^{n-2}`.
///
/// The chain is checked against row `n - 1`. The variant with `a(n, l)` on the
/// right fails (first at `n = 5, l = 7`); its failures are listed as notes and
/// do not affect the status.
pub fn check_growth(n: u32, budget: Budget) -> Result<VerificationReport> {
    if n < 3 {
        return Err(Error::InvalidArgument("growth chain is stated for n >= 3"));
    }
    let prev = coefficient_row(n - 1, CoefficientSource::FromRecurrence, budget)?;
    let row = prev.next();
    let mut report = VerificationReport::new(format!("growth n={n}"));
    let scale = BigInt::from(1u8) << (n - 2);
    let mut plain_failures = Vec::new();

    for l in 0..(1usize << (n - 2)) {
        let (odd, even) = (row.get(2 * l + 1), row.get(2 * l));
        let floor = &scale * prev.get(l);
        report.check(odd >= even, || format!("a({n},{}) >= a({n},{})", 2 * l + 1, 2 * l), format!(">= {even}"), odd);
        report.check(
            even >= &floor,
            || format!("a({n},{}) >= 2^{} a({},{l})", 2 * l, n - 2, n - 1),
            format!(">= {floor}"),
            even,
        );
        let plain = &scale * row.get(l);
        if even < &plain {
            plain_failures.push((l, even.clone(), plain));
        }
    }

    if let Some((l, even, plain)) = plain_failures.first() {
        report.note(format!(
            "uncorrected chain a(n,2l) >= 2^(n-2) a(n,l) fails at {} of {} indices; first: n={n} l={l}: a({n},{}) = {even} < {plain}",
            plain_failures.len(),
            1usize << (n - 2),
            2 * l,
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbePoint<T> {
    pub k: u64,
    /// `max_{j <= k} |Σ^j_n|`.
    pub running_max: T,
}

/// Running maxima of `|Σ^k_n|` at `k = 1, 2, 4, …` and at `k_max`.
pub fn boundedness_probe<T: Scalar>(
    init: &InitSpec<T>,
    n: u32,
    k_max: u64,
    budget: Budget,
) -> Result<Vec<ProbePoint<T>>> {
    let row = row_at_depth(init, k_max, n, budget)?;
    let mut points = Vec::new();
    let mut running = T::zero();
    let mut next_checkpoint = 1u64;
    for (k, value) in row.iter().enumerate() {
        let k = k as u64;
        let a = value.abs();
        if a > running {
            running = a;
        }
        if k == next_checkpoint || k == k_max {
            if points.last().map(|p: &ProbePoint<T>| p.k) != Some(k) {
                points.push(ProbePoint { k, running_max: running.clone() });
            }
            if k == next_checkpoint {
                next_checkpoint = next_checkpoint.saturating_mul(2);
            }
        }
    }
    Ok(points)
}
