//! The two-dimensional recurrence `Σ^{k+1}_{n+1} = Σ^k_n + Σ^k_{n+1}`.
//!
//! `k` is the column index (position along the input sequence), `n` the depth.
//! Storage is row-major by depth because depth `n + 1` only reads depth `n`:
//! each new row is a running sum of the previous one, offset by the corner
//! value `Σ^0_{n+1}`.

mod coeffs;
mod lemmas;

pub use coeffs::{
    central_value, coefficient_row, coefficient_rows, norm_exponent, CoefficientRow,
    CoefficientSource,
};
pub use lemmas::{
    boundedness_probe, check_bounds_and_symmetry, check_growth, lemma1_on_row, verify_lemma1,
    ProbePoint,
};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Range};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Budget, Error, Result};
use crate::seqcore::{sturmian_w, thue_morse, Alpha};

/// Exact scalar a table can hold: `BigInt` for Thue-Morse, `BigRational` for
/// generalized seeds.
pub trait Scalar:
    Clone + Ord + Zero + Signed + fmt::Debug + fmt::Display + Send + Sync + for<'a> Add<&'a Self, Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + Ord + Zero + Signed + fmt::Debug + fmt::Display + Send + Sync + for<'a> Add<&'a T, Output = T>
{
}

pub type Generator<T> = Box<dyn Fn(u64) -> T + Send + Sync>;

/// Seeds of the recurrence: column 0 (`Σ^k_0`) and row 0 (`Σ^0_n`).
pub struct InitSpec<T> {
    id: String,
    column0: Generator<T>,
    row0: Option<Generator<T>>,
}

impl<T: Scalar> InitSpec<T> {
    /// A seed with an explicit row 0. `row0(0)` must equal `column0(0)`.
    pub fn new(id: impl Into<String>, column0: Generator<T>, row0: Option<Generator<T>>) -> Result<Self> {
        if let Some(row0) = &row0 {
            if row0(0) != column0(0) {
                return Err(Error::CornerMismatch);
            }
        }
        Ok(InitSpec { id: id.into(), column0, row0 })
    }

    /// Column 0 from `column0`, row 0 identically zero past the corner.
    pub fn from_column(id: impl Into<String>, column0: impl Fn(u64) -> T + Send + Sync + 'static) -> Self {
        InitSpec { id: id.into(), column0: Box::new(column0), row0: None }
    }

    pub fn zero() -> Self {
        InitSpec::from_column("zero", |_| T::zero())
    }

    /// Short identifier, used to name cache entries.
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn column0(&self, k: u64) -> T {
        (self.column0)(k)
    }

    pub fn row0(&self, n: u64) -> T {
        match (&self.row0, n) {
            (_, 0) => self.column0(0),
            (Some(row0), n) => row0(n),
            (None, _) => T::zero(),
        }
    }

    pub fn has_custom_row0(&self) -> bool {
        self.row0.is_some()
    }
}

impl InitSpec<BigInt> {
    /// `Σ^k_0 = u_k`, `Σ^0_n = 0`.
    pub fn thue_morse() -> Self {
        InitSpec::from_column("thue-morse", |k| thue_morse(k).to_bigint())
    }
}

impl InitSpec<BigRational> {
    /// `Σ^k_0 = w_k(α)`, `Σ^0_n = 0`.
    pub fn sturmian_w(alpha: &Alpha) -> Self {
        let a = alpha.clone();
        let id = format!("sturmian-w-{}", alpha.value()).replace('/', "_");
        InitSpec::from_column(id, move |k| sturmian_w(&a, k))
    }
}

impl<T> fmt::Debug for InitSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitSpec").field("id", &self.id).field("custom_row0", &self.row0.is_some()).finish()
    }
}

/// `Σ^k_0` for `k = 0..=k_max`.
pub fn first_row<T: Scalar>(init: &InitSpec<T>, k_max: u64) -> Vec<T> {
    (0..=k_max).map(|k| init.column0(k)).collect()
}

/// Depth `n + 1` from depth `n`: `next[0] = corner`, `next[k + 1] = next[k] + prev[k]`.
pub fn next_row<T: Scalar>(prev: &[T], corner: T) -> Vec<T> {
    let mut next = Vec::with_capacity(prev.len());
    let mut acc = corner;
    for value in prev.iter().take(prev.len().saturating_sub(1)) {
        let following = acc.clone() + value;
        next.push(acc);
        acc = following;
    }
    if !prev.is_empty() {
        next.push(acc);
    }
    next
}

/// Depth-`n` row over columns `0..=k_max`, holding at most two rows at a time.
pub fn row_at_depth<T: Scalar>(init: &InitSpec<T>, k_max: u64, n: u32, budget: Budget) -> Result<Vec<T>> {
    budget.check(2 * (k_max + 1))?;
    let mut row = first_row(init, k_max);
    for depth in 1..=n as u64 {
        row = next_row(&row, init.row0(depth));
    }
    Ok(row)
}

/// Dense exact table `Σ^k_n` for `0 <= k <= k_max`, `0 <= n <= n_max`.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleTable<T> {
    rows: Vec<Vec<T>>,
    init_id: String,
}

impl<T: Scalar> TriangleTable<T> {
    pub fn build(init: &InitSpec<T>, k_max: u64, n_max: u32, budget: Budget) -> Result<Self> {
        if k_max == 0 || n_max == 0 {
            return Err(Error::InvalidArgument("k_max and n_max must both be at least 1"));
        }
        let cells = (k_max + 1).saturating_mul(n_max as u64 + 1);
        budget.check(cells)?;
        let mut rows = Vec::with_capacity(n_max as usize + 1);
        rows.push(first_row(init, k_max));
        for depth in 1..=n_max as u64 {
            let next = next_row(&rows[rows.len() - 1], init.row0(depth));
            rows.push(next);
        }
        Ok(TriangleTable { rows, init_id: init.id().into() })
    }

    /// Wraps externally produced rows (e.g. loaded from a cache). Rows must
    /// all have the same non-zero length.
    pub fn from_rows(init_id: impl Into<String>, rows: Vec<Vec<T>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidArgument("rows must be non-empty and of equal length"));
        }
        Ok(TriangleTable { rows, init_id: init_id.into() })
    }

    pub fn init_id(&self) -> &str {
        &self.init_id
    }

    pub fn k_max(&self) -> u64 {
        self.rows[0].len() as u64 - 1
    }

    pub fn n_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn get(&self, k: u64, n: u32) -> Option<&T> {
        self.rows.get(n as usize)?.get(usize::try_from(k).ok()?)
    }

    /// `Σ^k_n`; panics outside the table.
    pub fn value(&self, k: u64, n: u32) -> &T {
        &self.rows[n as usize][k as usize]
    }

    pub fn row(&self, n: u32) -> &[T] {
        &self.rows[n as usize]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.rows
    }

    /// Interior cells `(k + 1, n + 1)` where the recurrence does not hold.
    pub fn recurrence_violations(&self) -> Vec<(u64, u32)> {
        let mut bad = Vec::new();
        for (n, pair) in self.rows.windows(2).enumerate() {
            let (upper, lower) = (&pair[0], &pair[1]);
            for k in 0..upper.len() - 1 {
                if lower[k + 1] != lower[k].clone() + &upper[k] {
                    bad.push((k as u64 + 1, n as u32 + 1));
                }
            }
        }
        bad
    }

    /// Cells in a rectangular window, column-major (`k` outer, `n` inner),
    /// clipped to the table. Empty ranges yield nothing.
    pub fn window(&self, ks: Range<u64>, ns: Range<u32>) -> impl Iterator<Item = (u64, u32, &T)> + '_ {
        let ks = ks.start..ks.end.min(self.k_max() + 1);
        let ns = ns.start..ns.end.min(self.n_max() + 1);
        ks.flat_map(move |k| ns.clone().map(move |n| (k, n, self.value(k, n))))
    }
}
