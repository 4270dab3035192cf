//! The `k`-independent coefficients `a(n, l)` with `Σ^{2^n k + l}_n = a(n, l) u_k`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{row_at_depth, InitSpec};
use crate::error::{Budget, Error, Result};

/// Exponent of the depth-`n` normalization, `(n - 1)(n - 2) / 2`.
pub fn norm_exponent(n: u32) -> u64 {
    let n = n as u64;
    if n < 2 {
        0
    } else {
        (n - 1) * (n - 2) / 2
    }
}

/// Closed form of the central coefficient, `2^{(n-1)(n-2)/2}`.
pub fn central_value(n: u32) -> BigInt {
    BigInt::one() << norm_exponent(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSource {
    /// Read `a(n, l) = -Σ^l_n` off the Thue-Morse table (`u_0 = -1`).
    FromTable,
    /// Run the row-to-row recurrences starting from `a(1, ·) = (0, 1)`.
    FromRecurrence,
}

/// `a(n, l)` for `l = 0..2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientRow {
    n: u32,
    values: Vec<BigInt>,
}

impl CoefficientRow {
    pub fn first() -> Self {
        CoefficientRow { n: 1, values: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, l: usize) -> &BigInt {
        &self.values[l]
    }

    /// `a(n, 2^{n-1})` as stored in the row.
    pub fn central(&self) -> &BigInt {
        &self.values[self.values.len() / 2]
    }

    /// Row `n + 1`:
    /// `a(n+1, l+1) = a(n+1, l) + a(n, l)` on the first half (through `l = 2^n`),
    /// `a(n+1, l+2^n+1) = a(n+1, l+2^n) - a(n, l)` on the second.
    pub fn next(&self) -> CoefficientRow {
        let half = self.values.len();
        let mut next = Vec::with_capacity(2 * half);
        next.push(BigInt::zero());
        for l in 0..half {
            let v = &next[l] + &self.values[l];
            next.push(v);
        }
        for l in 0..half - 1 {
            let v = &next[l + half] - &self.values[l];
            next.push(v);
        }
        CoefficientRow { n: self.n + 1, values: next }
    }
}

fn row_len_cells(n: u32) -> Result<u64> {
    1u64.checked_shl(n).filter(|_| n < 63).ok_or(Error::Resource { requested: u64::MAX, budget: 0 })
}

/// Row `n` computed either from the table or from the recurrence; both paths
/// return identical rows.
pub fn coefficient_row(n: u32, source: CoefficientSource, budget: Budget) -> Result<CoefficientRow> {
    if n == 0 {
        return Err(Error::InvalidArgument("coefficient rows start at n = 1"));
    }
    let len = row_len_cells(n)?;
    match source {
        CoefficientSource::FromRecurrence => {
            budget.check(2 * len)?;
            let mut row = CoefficientRow::first();
            while row.n < n {
                row = row.next();
            }
            Ok(row)
        }
        CoefficientSource::FromTable => {
            let sigma = row_at_depth(&InitSpec::thue_morse(), len - 1, n, budget)?;
            Ok(CoefficientRow { n, values: sigma.into_iter().map(|s| -s).collect() })
        }
    }
}

/// Rows `1..=n_max` from the recurrence; entry `i` holds row `i + 1`.
pub fn coefficient_rows(n_max: u32, budget: Budget) -> Result<Vec<CoefficientRow>> {
    if n_max == 0 {
        return Ok(Vec::new());
    }
    budget.check(2 * row_len_cells(n_max)?)?;
    let mut rows = vec![CoefficientRow::first()];
    while rows.len() < n_max as usize {
        let next = rows[rows.len() - 1].next();
        rows.push(next);
    }
    Ok(rows)
}
