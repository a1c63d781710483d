//! Elastic time warping: a similarity coefficient for time series valued in a
//! metric space, with a Hellinger-type penalty on time stretching.
//!
//! Two series are read as piecewise-constant functions `f`, `g` on `[0, 1)`.
//! Their similarity is the largest value of
//! \[
//! \int_0^1 C(f(\alpha(\tau)),\, g(\tau))\,\sqrt{\alpha'(\tau)}\,d\tau
//! \]
//! over increasing reparametrizations `α` of `[0, 1]` whose crossings of the
//! sample grids interlace block by block. Here `C` is a pointwise similarity
//! kernel with values in `(0, 1]`, by default `exp(-ρ)` for a metric `ρ` on
//! the value space. The `√α'` factor is what penalizes stretching: a warp
//! that crams mass into a short interval pays for it through the derivative,
//! and the whole functional is the inner product of unit vectors in the space
//! of square-integrable densities, so the value never exceeds 1 and equals 1
//! exactly when the series agree.
//!
//! The maximum is computed by a dynamic program over block alignments
//! ([`elastic_similarity`]), the optimal warp is reconstructed in closed form
//! as a piecewise-linear increasing bijection ([`reconstruct_alpha`]), and the
//! reconstruction can be checked independently by evaluating the integral
//! directly ([`evaluate_objective`]). Small instances can be verified against
//! exhaustive enumeration of all admissible alignments ([`oracle`]).
//!
//! Module map:
//! - [`series`]: time series, similarity kernels, and the `C(f_i, g_j)` grid.
//! - [`diffeo`]: piecewise-linear increasing bijections of `[0, 1]`.
//! - [`hellinger`]: the Hellinger affinity and its distance variants on warps.
//! - [`path`]: block alignment paths (the combinatorial skeleton of a warp).
//! - [`warp`]: the dynamic program, warp reconstruction, objective evaluation.
//! - [`oracle`]: exhaustive enumeration for cross-checking the program.
//! - [`io`]: CSV parsers and the JSON result document.
//! - [`synth`]: seeded random instances for tests and benchmarks.

pub mod diffeo;
mod error;
pub mod hellinger;
pub mod io;
pub mod oracle;
pub mod path;
pub mod series;
pub mod synth;
pub mod warp;

pub use diffeo::PiecewiseLinearDiffeo;
pub use error::{Error, Result};
pub use path::{Branch, Move, WarpingPath};
pub use series::{
    build_similarity_matrix, exp_kernel, normalize_timestamps, SimilarityMatrix, TimeSeries,
    ValueMetric,
};
pub use warp::{
    block_f_value, block_g_value, dtw_baseline, elastic_similarity, evaluate_objective,
    reconstruct_alpha, DpState, EtwResult,
};
