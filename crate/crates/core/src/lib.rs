//! Exact arithmetic for the Thue-Morse "Pascal triangle".
//!
//! The table `Σ^k_n` is seeded with the Thue-Morse sequence on column 0 and
//! zeros on row 0, then filled by `Σ^{k+1}_{n+1} = Σ^k_n + Σ^k_{n+1}`. Each
//! depth row renormalized by `2^{-(n-1)(n-2)/2}` gives the nodes of a
//! piecewise-linear function `f_n`; the `f_n` converge to a continuous solution
//! of `∫₀^X f(x)dx + f(0) = f(X/2)`.
//!
//! Everything here is exact: big integers for the table, dyadic rationals for
//! nodes, evaluation points and integrals. The crate is `no_std` and only needs
//! `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod approximant;
pub mod dyadic;
pub mod error;
pub mod operator;
pub mod report;
pub mod seqcore;
pub mod triangle;
pub mod verify;

pub use approximant::{ApproximantFamily, Enclosure, IntervalEstimate, PiecewiseLinearApproximant};
pub use dyadic::Dyadic;
pub use error::{Budget, Error, Result};
pub use report::VerificationReport;
pub use seqcore::{Alpha, RationalScalar, Sign};
pub use triangle::{CoefficientRow, CoefficientSource, InitSpec, TriangleTable};
