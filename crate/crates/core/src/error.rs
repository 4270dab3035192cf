use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A table, row or orbit would exceed the configured cell budget.
    Resource { requested: u64, budget: u64 },
    /// Sturmian parameter outside `[0, 1]`.
    AlphaOutOfRange(String),
    /// User-supplied row 0 disagrees with column 0 at the corner cell.
    CornerMismatch,
    /// Evaluation point or index beyond what was built.
    OutOfRange { what: &'static str, value: String, limit: String },
    InvalidArgument(&'static str),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Resource { requested, budget } => write!(
                f,
                "resource budget exhausted: {requested} cells requested, budget is {budget}"
            ),
            Error::AlphaOutOfRange(a) => write!(f, "alpha {a} is outside [0, 1]"),
            Error::CornerMismatch => write!(f, "row 0 and column 0 disagree at the corner cell"),
            Error::OutOfRange { what, value, limit } => {
                write!(f, "{what} {value} is beyond the built range (limit {limit})")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Upper bound on the number of exact scalars a single computation may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_cells: u64,
}

impl Budget {
    /// Rough per-cell footprint used to turn a megabyte budget into cells.
    pub const BYTES_PER_CELL: u64 = 64;

    pub const fn cells(max_cells: u64) -> Self {
        Budget { max_cells }
    }

    pub fn from_megabytes(mb: u64) -> Self {
        Budget { max_cells: mb.saturating_mul(1 << 20) / Self::BYTES_PER_CELL }
    }

    pub fn unlimited() -> Self {
        Budget { max_cells: u64::MAX }
    }

    pub fn check(&self, requested: u64) -> Result<()> {
        if requested > self.max_cells {
            Err(Error::Resource { requested, budget: self.max_cells })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    /// 1 GiB worth of cells.
    fn default() -> Self {
        Budget::from_megabytes(1024)
    }
}
