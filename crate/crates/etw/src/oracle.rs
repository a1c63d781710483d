//! Exhaustive enumeration of block alignment patterns.
//!
//! The dynamic program explores a finite pattern class: sequences of `F` and
//! `G` blocks whose counts tile the index rectangle under the boundary rules
//! of the recurrence. On small instances that class can be enumerated
//! outright and the value maximized by brute force, which gives an
//! independent check of the table, the tie-breaking, and the decoder.

use crate::error::{Error, Result};
use crate::path::{Branch, Move, WarpingPath};
use crate::series::{SimilarityMatrix, TimeSeries};
use crate::warp::{block_f_value, block_g_value};

/// Largest per-side sample count accepted for enumeration. Pattern counts
/// grow roughly by a factor 2.6 per sample; 12x12 already has 86659.
pub const ENUMERATION_CAP: usize = 12;

/// Enumerates every admissible block pattern for an `n x m` instance.
///
/// Patterns come out in a fixed order: at each cell, last moves are listed
/// `F` first with counts ascending, then `G` with counts ascending, matching
/// the candidate order of the dynamic program so that tie-breaking can be
/// compared move for move.
///
/// # Errors
///
/// Rejects empty instances and sides above [`ENUMERATION_CAP`].
pub fn enumerate_patterns(n: usize, m: usize) -> Result<Vec<WarpingPath>> {
    if n == 0 || m == 0 {
        return Err(Error::EmptySeries);
    }
    if n > ENUMERATION_CAP || m > ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded {
            n,
            m,
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::new();
    let mut suffix_rev = Vec::new();
    descend(n, m, &mut suffix_rev, &mut out);
    Ok(out)
}

/// Walks every last move out of `(i, j)` in candidate order, accumulating
/// the path suffix in reverse.
fn descend(i: usize, j: usize, suffix_rev: &mut Vec<Move>, out: &mut Vec<WarpingPath>) {
    if (i, j) == (0, 0) {
        let moves: Vec<Move> = suffix_rev.iter().rev().copied().collect();
        out.push(WarpingPath::new(moves).expect("enumerated moves always form a valid path"));
        return;
    }
    for k in 1..=i {
        let admissible = if j == 1 { k == i } else { k < i };
        if admissible {
            suffix_rev.push(Move {
                branch: Branch::F,
                count: k,
                end_i: i,
                end_j: j,
            });
            descend(i - k, j - 1, suffix_rev, out);
            suffix_rev.pop();
        }
    }
    for p in 2..=j {
        let admissible = if i == 1 { p == j } else { p < j };
        if admissible {
            suffix_rev.push(Move {
                branch: Branch::G,
                count: p,
                end_i: i,
                end_j: j,
            });
            descend(i - 1, j - p, suffix_rev, out);
            suffix_rev.pop();
        }
    }
}

/// Maximizes the block-sum value over every enumerated pattern.
///
/// Ties break toward the earlier pattern in enumeration order, which is the
/// same preference the dynamic program applies cell by cell, so values and
/// paths both have to agree with [`crate::elastic_similarity`] on instances
/// below the cap.
///
/// # Errors
///
/// Rejects grid shape mismatches and instances above [`ENUMERATION_CAP`].
pub fn brute_force_similarity(
    f: &TimeSeries,
    g: &TimeSeries,
    c: &SimilarityMatrix,
) -> Result<(f64, WarpingPath)> {
    if c.rows() != f.len() || c.cols() != g.len() {
        return Err(Error::GridShapeMismatch {
            rows: c.rows(),
            cols: c.cols(),
            n: f.len(),
            m: g.len(),
        });
    }
    let patterns = enumerate_patterns(f.len(), g.len())?;
    let mut best = f64::NEG_INFINITY;
    let mut best_path = None;
    for path in patterns {
        let mut sum = 0.0;
        for mv in path.moves() {
            sum += match mv.branch {
                Branch::F => block_f_value(f, g, c, mv.end_i, mv.end_j, mv.count)?,
                Branch::G => block_g_value(f, g, c, mv.end_i, mv.end_j, mv.count)?,
            };
        }
        if sum > best {
            best = sum;
            best_path = Some(path);
        }
    }
    Ok((best, best_path.expect("at least one pattern exists")))
}
