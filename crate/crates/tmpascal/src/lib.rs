//! File formats, the on-disk row cache, a parallel row builder and the
//! command-line front end for `tmpascal-core`.

pub mod cache;
pub mod cli;
pub mod csvio;
pub mod parallel;
pub mod svg;
