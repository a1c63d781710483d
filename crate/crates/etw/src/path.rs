//! Block alignment paths: the combinatorial skeleton of a warp.
//!
//! A warp that respects the sample grids is described by a walk on the index
//! lattice from `(0, 0)` to `(n, m)` made of two move families. An `F` move
//! with count `k` matches `k` consecutive samples of the first series to one
//! sampling interval of the second (`Δi = k`, `Δj = 1`); a `G` move with
//! count `p` matches one sample of the first series across `p` consecutive
//! sampling intervals of the second (`Δi = 1`, `Δj = p`). A one-interval `G`
//! move would coincide with a one-sample `F` move, so `G` counts start at 2
//! and the representation is unambiguous.

use crate::error::{Error, Result};

/// The two block families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Several samples of the first series inside one interval of the second.
    F,
    /// One sample of the first series spread across several intervals of the
    /// second.
    G,
}

/// One block move, recorded with the lattice cell it ends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    /// Which family the block belongs to.
    pub branch: Branch,
    /// Samples covered (`F`) or intervals covered (`G`).
    pub count: usize,
    /// Row index after the move.
    pub end_i: usize,
    /// Column index after the move.
    pub end_j: usize,
}

/// A validated sequence of block moves from `(0, 0)` to `(n, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarpingPath {
    moves: Vec<Move>,
}

impl WarpingPath {
    /// Validates the move algebra: counts in range, cumulative indices
    /// matching each recorded end cell.
    ///
    /// # Errors
    ///
    /// Rejects an empty move list, an `F` count of 0, a `G` count below 2,
    /// and any move whose recorded end cell disagrees with the walk.
    pub fn new(moves: Vec<Move>) -> Result<Self> {
        if moves.is_empty() {
            return Err(Error::InvalidPath {
                reason: "no moves".into(),
            });
        }
        let (mut i, mut j) = (0usize, 0usize);
        for (idx, mv) in moves.iter().enumerate() {
            match mv.branch {
                Branch::F => {
                    if mv.count == 0 {
                        return Err(Error::InvalidPath {
                            reason: format!("move {idx}: F count must be at least 1"),
                        });
                    }
                    i += mv.count;
                    j += 1;
                }
                Branch::G => {
                    if mv.count < 2 {
                        return Err(Error::InvalidPath {
                            reason: format!(
                                "move {idx}: G count must be at least 2 (a count of 1 is an F move)"
                            ),
                        });
                    }
                    i += 1;
                    j += mv.count;
                }
            }
            if (i, j) != (mv.end_i, mv.end_j) {
                return Err(Error::InvalidPath {
                    reason: format!(
                        "move {idx}: recorded end ({}, {}) but the walk is at ({i}, {j})",
                        mv.end_i, mv.end_j
                    ),
                });
            }
        }
        Ok(WarpingPath { moves })
    }

    /// The moves in order.
    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// The lattice cell the path ends on: `(n, m)`.
    pub fn end(&self) -> (usize, usize) {
        let last = self.moves.last().expect("paths are never empty");
        (last.end_i, last.end_j)
    }
}
