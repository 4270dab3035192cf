//! Block-parallel construction of depth rows.
//!
//! A depth row is a running sum of the row above, so it splits into three
//! passes: per-block totals (parallel), an exclusive scan over the block totals
//! (sequential, one value per block), and per-block running sums seeded with
//! their offsets (parallel). Exact scalars make the result identical to the
//! sequential builder for any block size and worker count.

use rayon::prelude::*;

use tmpascal_core::triangle::{first_row, next_row, Scalar};
use tmpascal_core::{Budget, InitSpec, Result, TriangleTable};

/// Rows shorter than this are built sequentially.
pub const DEFAULT_BLOCK: usize = 4096;

/// Same output as [`next_row`], computed in blocks of `block` cells.
pub fn next_row_blocked<T: Scalar>(prev: &[T], corner: T, block: usize) -> Vec<T> {
    let block = block.max(1);
    if prev.len() <= block {
        return next_row(prev, corner);
    }
    let inputs = &prev[..prev.len() - 1];

    let totals: Vec<T> = inputs
        .par_chunks(block)
        .map(|chunk| chunk.iter().fold(T::zero(), |acc, v| acc + v))
        .collect();

    let mut offsets = Vec::with_capacity(totals.len());
    let mut acc = corner.clone();
    for t in &totals {
        offsets.push(acc.clone());
        acc = acc + t;
    }

    let pieces: Vec<Vec<T>> = inputs
        .par_chunks(block)
        .zip(offsets.into_par_iter())
        .map(|(chunk, start)| {
            let mut out = Vec::with_capacity(chunk.len());
            let mut acc = start;
            for v in chunk {
                acc = acc + v;
                out.push(acc.clone());
            }
            out
        })
        .collect();

    let mut row = Vec::with_capacity(prev.len());
    row.push(corner);
    for piece in pieces {
        row.extend(piece);
    }
    row
}

/// [`TriangleTable::build`] with each depth row built by [`next_row_blocked`].
pub fn build_table<T: Scalar>(init: &InitSpec<T>, k_max: u64, n_max: u32, budget: Budget) -> Result<TriangleTable<T>> {
    build_table_with_block(init, k_max, n_max, budget, DEFAULT_BLOCK)
}

pub fn build_table_with_block<T: Scalar>(
    init: &InitSpec<T>,
    k_max: u64,
    n_max: u32,
    budget: Budget,
    block: usize,
) -> Result<TriangleTable<T>> {
    budget.check((k_max + 1).saturating_mul(n_max as u64 + 1))?;
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    rows.push(first_row(init, k_max));
    for depth in 1..=n_max as u64 {
        let next = next_row_blocked(&rows[rows.len() - 1], init.row0(depth), block);
        rows.push(next);
    }
    TriangleTable::from_rows(init.id(), rows)
}
