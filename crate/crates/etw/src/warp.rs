//! The alignment dynamic program, optimal-warp reconstruction, and the
//! independent objective evaluation.
//!
//! Append the sentinel instants `s_n = t_m = 1` to the two timestamp grids.
//! A warp `α` that crosses the grids block by block decomposes the objective
//! \[
//! \int_0^1 C(f(\alpha(\tau)),\, g(\tau))\,\sqrt{\alpha'(\tau)}\,d\tau
//! \]
//! into independent blocks of two kinds, and inside one block the best
//! contribution has a closed form by Cauchy-Schwarz:
//!
//! - an `F` block pushes `k` samples of `f` through one interval of `g`:
//!   `F_k(i,j) = √((t_j − t_{j−1}) · Σ_{ℓ=0}^{k−1} (s_{i−ℓ} − s_{i−ℓ−1}) · C[i−ℓ−1][j−1]²)`,
//! - a `G` block stretches one sample of `f` across `p` intervals of `g`:
//!   `G_p(i,j) = √((s_i − s_{i−1}) · Σ_{ℓ=0}^{p−1} (t_{j−ℓ} − t_{j−ℓ−1}) · C[i−1][j−ℓ−1]²)`.
//!
//! Writing `V(i, j)` for the best value over `[0, t_j]` among warps with
//! `α(t_j) = s_i`, the recurrence is
//! \[
//! V(i, j) = \max\,\{\, V(i−k, j−1) + F_k(i,j),\; V(i−1, j−p) + G_p(i,j) \,\}
//! \]
//! over `k = i` when `j = 1` else `1 ≤ k < i`, and `p = j` when `i = 1` else
//! `2 ≤ p < j` (a `G` block of one interval is the same thing as an `F`
//! block of one sample, so it is never offered separately). The basis is
//! `V(0, 0) = 0` and the answer is `V(n, m)`.
//!
//! The sums under the square roots extend by one term per count, so each
//! inner maximization keeps a running accumulator, a cell costs `O(i + j)`,
//! and the whole table costs `O(nm(n + m))` time and `O(nm)` memory.

use crate::diffeo::PiecewiseLinearDiffeo;
use crate::error::{Error, Result};
use crate::path::{Branch, Move, WarpingPath};
use crate::series::{SimilarityMatrix, TimeSeries};

/// Default lower bound on reconstructed slopes. When some similarity is
/// effectively zero the optimum is approached but not attained (the warp
/// would need a flat segment); rather than emit a map that is no longer a
/// bijection, reconstruction refuses below this floor.
pub const DEFAULT_SLOPE_FLOOR: f64 = 1e-12;

/// Completed alignment table with backpointers.
///
/// Cells `(i, 0)` and `(0, j)` with `i, j > 0` are unreachable by
/// construction and hold `-∞`; the recurrence never reads them.
#[derive(Debug, Clone)]
pub struct DpState {
    n: usize,
    m: usize,
    /// Row-major `(n+1) × (m+1)` table of block-sum values.
    v: Vec<f64>,
    /// Winning move into each cell; `None` on `(0, 0)` and unreachable cells.
    back: Vec<Option<(Branch, usize)>>,
}

impl DpState {
    /// Samples in the first series.
    pub fn rows(&self) -> usize {
        self.n
    }

    /// Samples in the second series.
    pub fn cols(&self) -> usize {
        self.m
    }

    /// The optimal value `V(n, m)`.
    pub fn value(&self) -> f64 {
        self.v[self.n * (self.m + 1) + self.m]
    }

    /// Table entry `V(i, j)`; `-∞` marks the unreachable boundary cells.
    ///
    /// # Panics
    ///
    /// Panics if an index exceeds the table.
    pub fn value_at(&self, i: usize, j: usize) -> f64 {
        assert!(i <= self.n && j <= self.m, "table index out of range");
        self.v[i * (self.m + 1) + j]
    }
}

/// Result of one alignment: the optimal value, the full table, the decoded
/// block path, and the reconstructed warp.
#[derive(Debug, Clone)]
pub struct EtwResult {
    /// The similarity `V(n, m)`, in `(0, 1]`.
    pub value: f64,
    /// The completed table, for inspection and decoding.
    pub state: DpState,
    /// The optimal block path.
    pub path: WarpingPath,
    /// The optimal warp, piecewise linear by construction.
    pub alpha: PiecewiseLinearDiffeo,
}

/// Timestamps with the sentinel instant 1 appended.
fn with_sentinel(ts: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ts.len() + 1);
    out.extend_from_slice(ts);
    out.push(1.0);
    out
}

fn check_grid(f: &TimeSeries, g: &TimeSeries, c: &SimilarityMatrix) -> Result<()> {
    if c.rows() != f.len() || c.cols() != g.len() {
        return Err(Error::GridShapeMismatch {
            rows: c.rows(),
            cols: c.cols(),
            n: f.len(),
            m: g.len(),
        });
    }
    Ok(())
}

/// The best contribution `F_k(i, j)` of a block matching samples
/// `f_{i-k}, …, f_{i-1}` to the interval `[t_{j-1}, t_j)`.
///
/// Indices are 1-based with the sentinels `s_n = t_m = 1` in place.
///
/// # Errors
///
/// Rejects grid shape mismatch and indices outside
/// `1 ≤ k ≤ i ≤ n`, `1 ≤ j ≤ m`.
pub fn block_f_value(
    f: &TimeSeries,
    g: &TimeSeries,
    c: &SimilarityMatrix,
    i: usize,
    j: usize,
    k: usize,
) -> Result<f64> {
    check_grid(f, g, c)?;
    let (n, m) = (f.len(), g.len());
    if i == 0 || i > n || j == 0 || j > m || k == 0 || k > i {
        return Err(Error::BlockOutOfRange {
            branch: Branch::F,
            count: k,
            i,
            j,
            n,
            m,
        });
    }
    let s = with_sentinel(f.timestamps());
    let t = with_sentinel(g.timestamps());
    let mut sum = 0.0;
    for l in 0..k {
        let fi = i - 1 - l;
        sum += (s[fi + 1] - s[fi]) * c.get(fi, j - 1).powi(2);
    }
    Ok(((t[j] - t[j - 1]) * sum).sqrt())
}

/// The best contribution `G_p(i, j)` of a block stretching sample `f_{i-1}`
/// across the intervals `[t_{j-p}, t_j)`.
///
/// Indices are 1-based with the sentinels in place; `p = 1` is legal here
/// and equals `F_1(i, j)`, though the recurrence never offers it.
///
/// # Errors
///
/// Rejects grid shape mismatch and indices outside
/// `1 ≤ p ≤ j ≤ m`, `1 ≤ i ≤ n`.
pub fn block_g_value(
    f: &TimeSeries,
    g: &TimeSeries,
    c: &SimilarityMatrix,
    i: usize,
    j: usize,
    p: usize,
) -> Result<f64> {
    check_grid(f, g, c)?;
    let (n, m) = (f.len(), g.len());
    if i == 0 || i > n || j == 0 || j > m || p == 0 || p > j {
        return Err(Error::BlockOutOfRange {
            branch: Branch::G,
            count: p,
            i,
            j,
            n,
            m,
        });
    }
    let s = with_sentinel(f.timestamps());
    let t = with_sentinel(g.timestamps());
    let mut sum = 0.0;
    for l in 0..p {
        let gj = j - 1 - l;
        sum += (t[gj + 1] - t[gj]) * c.get(i - 1, gj).powi(2);
    }
    Ok(((s[i] - s[i - 1]) * sum).sqrt())
}

/// Runs the alignment program and reconstructs the optimal warp.
///
/// Ties in the maximization go to the `F` family first and then to the
/// smallest count, so the decoded path and the warp are deterministic.
///
/// # Errors
///
/// Rejects a similarity grid whose shape disagrees with the series, and
/// reports degeneracy when the optimal warp would need a slope below
/// [`DEFAULT_SLOPE_FLOOR`] (see [`reconstruct_alpha`]).
pub fn elastic_similarity(
    f: &TimeSeries,
    g: &TimeSeries,
    c: &SimilarityMatrix,
) -> Result<EtwResult> {
    check_grid(f, g, c)?;
    let (n, m) = (f.len(), g.len());
    let s = with_sentinel(f.timestamps());
    let t = with_sentinel(g.timestamps());
    // Squared grid entries, reused across every accumulator.
    let c2: Vec<f64> = c.entries().iter().map(|&x| x * x).collect();

    let w = m + 1;
    let mut v = vec![f64::NEG_INFINITY; (n + 1) * w];
    let mut back: Vec<Option<(Branch, usize)>> = vec![None; (n + 1) * w];
    v[0] = 0.0;

    for i in 1..=n {
        let ds = s[i] - s[i - 1];
        for j in 1..=m {
            let dt = t[j] - t[j - 1];
            let mut best = f64::NEG_INFINITY;
            let mut best_move = None;

            // F family, counts ascending: F_{k+1}² adds one (Δs · C²) term,
            // so the sum is kept and only the admissible counts pay a sqrt.
            let mut acc = 0.0;
            for k in 1..=i {
                acc += (s[i - k + 1] - s[i - k]) * c2[(i - k) * m + (j - 1)];
                let admissible = if j == 1 { k == i } else { k < i };
                if admissible {
                    let prev = v[(i - k) * w + (j - 1)];
                    debug_assert!(prev.is_finite(), "recurrence read an unreachable cell");
                    let cand = prev + (dt * acc).sqrt();
                    if cand > best {
                        best = cand;
                        best_move = Some((Branch::F, k));
                    }
                }
            }

            // G family, counts ascending from 2: the p = 1 block coincides
            // with F_1 and has already been offered above.
            let mut acc = dt * c2[(i - 1) * m + (j - 1)];
            for p in 2..=j {
                acc += (t[j - p + 1] - t[j - p]) * c2[(i - 1) * m + (j - p)];
                let admissible = if i == 1 { p == j } else { p < j };
                if admissible {
                    let prev = v[(i - 1) * w + (j - p)];
                    debug_assert!(prev.is_finite(), "recurrence read an unreachable cell");
                    let cand = prev + (ds * acc).sqrt();
                    if cand > best {
                        best = cand;
                        best_move = Some((Branch::G, p));
                    }
                }
            }

            v[i * w + j] = best;
            back[i * w + j] =
                Some(best_move.expect("every interior cell has an admissible predecessor"));
        }
    }

    let state = DpState { n, m, v, back };
    let path = decode_path(&state);
    let alpha = reconstruct_alpha(&path, f, g, c, DEFAULT_SLOPE_FLOOR)?;
    Ok(EtwResult {
        value: state.value(),
        state,
        path,
        alpha,
    })
}

/// Backtraces the winning moves from `(n, m)` to `(0, 0)`.
///
/// # Panics
///
/// Panics if the backpointers are corrupt; a completed [`DpState`] cannot
/// trigger this.
pub fn decode_path(state: &DpState) -> WarpingPath {
    let w = state.m + 1;
    let (mut i, mut j) = (state.n, state.m);
    let mut rev = Vec::new();
    while (i, j) != (0, 0) {
        let (branch, count) =
            state.back[i * w + j].expect("backtrace hit a cell without a backpointer");
        rev.push(Move {
            branch,
            count,
            end_i: i,
            end_j: j,
        });
        match branch {
            Branch::F => {
                i = i.checked_sub(count).expect("backtrace left the table");
                j = j.checked_sub(1).expect("backtrace left the table");
            }
            Branch::G => {
                i = i.checked_sub(1).expect("backtrace left the table");
                j = j.checked_sub(count).expect("backtrace left the table");
            }
        }
    }
    rev.reverse();
    WarpingPath::new(rev).expect("decoded moves always form a valid path")
}

/// Reconstructs the optimal warp realizing a block path.
///
/// Inside an `F` block ending at `(i, j)`, the warp rises through
/// `s_{i-k}, …, s_i` over `[t_{j-1}, t_j]`, and the crossing times split the
/// interval into pieces whose widths carry weight `C² · Δs`: equalizing the
/// Cauchy-Schwarz ratio demands width proportional to the mass
/// `(s_{i-ℓ} − s_{i-ℓ-1}) C[i-ℓ-1][j-1]²` of each piece, which makes every
/// piece slope `Σ mass / (width · C²)`. Inside a `G` block the covered
/// intervals keep their own widths and the warp climbs with slopes
/// proportional to `C[i-1][·]²`, scaled so the total rise is
/// `s_i − s_{i-1}`. Block corners land exactly on the grid points
/// `(t_j, s_i)`, so consecutive blocks chain into a valid warp.
///
/// # Errors
///
/// Rejects a grid shape mismatch, a path that does not end at `(n, m)`, and
/// any implied slope below `slope_floor` (degeneracy: the optimum is a
/// limit of warps, not a warp).
pub fn reconstruct_alpha(
    path: &WarpingPath,
    f: &TimeSeries,
    g: &TimeSeries,
    c: &SimilarityMatrix,
    slope_floor: f64,
) -> Result<PiecewiseLinearDiffeo> {
    check_grid(f, g, c)?;
    let (n, m) = (f.len(), g.len());
    if path.end() != (n, m) {
        let (ei, ej) = path.end();
        return Err(Error::InvalidPath {
            reason: format!("path ends at ({ei}, {ej}) but the series need ({n}, {m})"),
        });
    }
    let s = with_sentinel(f.timestamps());
    let t = with_sentinel(g.timestamps());

    let mut bps: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for mv in path.moves() {
        let (i, j) = (mv.end_i, mv.end_j);
        match mv.branch {
            Branch::F => {
                let k = mv.count;
                let width = t[j] - t[j - 1];
                let mut weights = Vec::with_capacity(k);
                for l in 0..k {
                    let fi = i - k + l;
                    weights.push(c.get(fi, j - 1).powi(2) * (s[fi + 1] - s[fi]));
                }
                let total: f64 = weights.iter().sum();
                for l in 0..k {
                    let slope = total / (width * c.get(i - k + l, j - 1).powi(2));
                    if slope < slope_floor {
                        return Err(Error::DegenerateWarp {
                            reason: format!(
                                "piece {l} of the F block ending at ({i}, {j}) needs slope {slope:e}, below the floor {slope_floor:e}"
                            ),
                        });
                    }
                }
                let mut x = t[j - 1];
                for l in 0..k - 1 {
                    x += width * (weights[l] / total);
                    bps.push((x, s[i - k + l + 1]));
                }
                bps.push((t[j], s[i]));
            }
            Branch::G => {
                let p = mv.count;
                let rise = s[i] - s[i - 1];
                let mut denom = 0.0;
                for l in 0..p {
                    let gj = j - p + l;
                    denom += (t[gj + 1] - t[gj]) * c.get(i - 1, gj).powi(2);
                }
                let lambda = rise / denom;
                let mut y = s[i - 1];
                for l in 0..p {
                    let gj = j - p + l;
                    let slope = lambda * c.get(i - 1, gj).powi(2);
                    if slope < slope_floor {
                        return Err(Error::DegenerateWarp {
                            reason: format!(
                                "interval {gj} of the G block ending at ({i}, {j}) needs slope {slope:e}, below the floor {slope_floor:e}"
                            ),
                        });
                    }
                    y += slope * (t[gj + 1] - t[gj]);
                    if l == p - 1 {
                        bps.push((t[gj + 1], s[i]));
                    } else {
                        bps.push((t[gj + 1], y));
                    }
                }
            }
        }
    }

    PiecewiseLinearDiffeo::new(bps).map_err(|e| Error::DegenerateWarp {
        reason: format!("reconstructed breakpoints do not form a warp: {e}"),
    })
}

/// Evaluates the objective integral for an arbitrary warp, exactly.
///
/// Both the warp and the integrand are piecewise "simple" (linear and
/// constant respectively), so cutting `[0, 1]` at the warp's breakpoints,
/// the `t`-grid, and the warp's preimages of the `s`-grid makes the
/// integrand `C(f_i, g_j) √slope` constant on every piece.
///
/// # Errors
///
/// Rejects a similarity grid whose shape disagrees with the series.
pub fn evaluate_objective(
    f: &TimeSeries,
    g: &TimeSeries,
    c: &SimilarityMatrix,
    alpha: &PiecewiseLinearDiffeo,
) -> Result<f64> {
    check_grid(f, g, c)?;
    let (n, m) = (f.len(), g.len());
    let s = with_sentinel(f.timestamps());
    let t = with_sentinel(g.timestamps());

    let mut cuts: Vec<f64> = alpha.breakpoints().iter().map(|&(x, _)| x).collect();
    cuts.extend_from_slice(&t);
    cuts.extend(s.iter().map(|&y| alpha.eval_inverse(y)));
    cuts.sort_by(f64::total_cmp);

    let mut total = 0.0;
    for win in cuts.windows(2) {
        let (l, r) = (win[0], win[1]);
        if r <= l {
            continue;
        }
        let mid = l + (r - l) / 2.0;
        // Midpoints sit strictly inside a constant piece, so cell lookups
        // are unambiguous; clamping covers mids that round past the last
        // grid value.
        let fi = (s.partition_point(|&x| x <= alpha.eval(mid)) - 1).min(n - 1);
        let gj = (t.partition_point(|&x| x <= mid) - 1).min(m - 1);
        total += c.get(fi, gj) * alpha.slope_at(mid).sqrt() * (r - l);
    }
    Ok(total)
}

/// Classic dynamic time warping over a nonnegative cost grid, with steps
/// `(i−1, j)`, `(i, j−1)`, `(i−1, j−1)`: the usual baseline to compare
/// against. Returns the cumulative cost of the cheapest monotone path from
/// `(0, 0)` to `(rows−1, cols−1)`.
///
/// # Errors
///
/// Rejects an empty grid, a wrong element count, and negative or non-finite
/// costs.
pub fn dtw_baseline(cost: &[f64], rows: usize, cols: usize) -> Result<f64> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptySeries);
    }
    if cost.len() != rows * cols {
        return Err(Error::MatrixShapeMismatch {
            len: cost.len(),
            rows,
            cols,
            expected: rows * cols,
        });
    }
    for (idx, &v) in cost.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "cost entries",
            });
        }
        if v < 0.0 {
            return Err(Error::NegativeCost {
                row: idx / cols,
                col: idx % cols,
                value: v,
            });
        }
    }
    let mut r = vec![f64::INFINITY; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let c = cost[i * cols + j];
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let up = if i > 0 { r[(i - 1) * cols + j] } else { f64::INFINITY };
                let left = if j > 0 { r[i * cols + j - 1] } else { f64::INFINITY };
                let diag = if i > 0 && j > 0 {
                    r[(i - 1) * cols + j - 1]
                } else {
                    f64::INFINITY
                };
                up.min(left).min(diag)
            };
            r[i * cols + j] = c + best;
        }
    }
    Ok(r[rows * cols - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{build_similarity_matrix, exp_kernel, ValueMetric};
    use crate::synth::{random_instance, random_series};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn series(ts: &[f64], vs: &[f64]) -> TimeSeries {
        TimeSeries::new(ts.to_vec(), vs.iter().map(|&v| vec![v]).collect()).unwrap()
    }

    fn grid(n: usize, m: usize, entries: &[f64]) -> SimilarityMatrix {
        SimilarityMatrix::new(n, m, entries.to_vec()).unwrap()
    }

    /// The two-sample/one-sample instance with C = [[1], [0.5]]: a single
    /// F block of both samples is the only admissible alignment.
    fn two_by_one() -> (TimeSeries, TimeSeries, SimilarityMatrix) {
        (
            series(&[0.0, 0.5], &[0.0, 0.0]),
            series(&[0.0], &[0.0]),
            grid(2, 1, &[1.0, 0.5]),
        )
    }

    #[test]
    fn f_block_on_a_singleton_is_the_similarity() {
        let f = series(&[0.0], &[0.0]);
        let g = series(&[0.0], &[0.0]);
        let c = grid(1, 1, &[0.5]);
        assert_eq!(block_f_value(&f, &g, &c, 1, 1, 1).unwrap(), 0.5);
    }

    #[test]
    fn f_block_matches_the_closed_form() {
        let (f, g, c) = two_by_one();
        // √(1 · (0.5·1 + 0.5·0.25)) = √0.625.
        assert_relative_eq!(
            block_f_value(&f, &g, &c, 2, 1, 2).unwrap(),
            0.7905694150420949,
            max_relative = 1e-15
        );
    }

    #[test]
    fn g_block_matches_the_transposed_closed_form() {
        // Roles swapped: one sample of f stretched across both intervals of g.
        let f = series(&[0.0], &[0.0]);
        let g = series(&[0.0, 0.5], &[0.0, 0.0]);
        let c = grid(1, 2, &[1.0, 0.5]);
        assert_relative_eq!(
            block_g_value(&f, &g, &c, 1, 2, 2).unwrap(),
            0.7905694150420949,
            max_relative = 1e-15
        );
    }

    #[test]
    fn unit_similarities_reduce_g_blocks_to_pure_geometry() {
        let f = series(&[0.0, 0.4], &[0.0, 0.0]);
        let g = series(&[0.0, 0.3], &[0.0, 0.0]);
        let c = grid(2, 2, &[1.0; 4]);
        // √((s_1 − s_0)(t_2 − t_0)) with the sentinel t_2 = 1.
        assert_relative_eq!(
            block_g_value(&f, &g, &c, 1, 2, 2).unwrap(),
            (0.4f64).sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn one_sample_blocks_of_both_families_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (f, g, c) = random_instance(&mut rng, 5, 5, 0.05);
            let i = rng.gen_range(1..=f.len());
            let j = rng.gen_range(1..=g.len());
            assert_relative_eq!(
                block_f_value(&f, &g, &c, i, j, 1).unwrap(),
                block_g_value(&f, &g, &c, i, j, 1).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn blocks_reject_out_of_range_indices() {
        let (f, g, c) = two_by_one();
        assert!(matches!(
            block_f_value(&f, &g, &c, 2, 1, 0),
            Err(Error::BlockOutOfRange { .. })
        ));
        assert!(matches!(
            block_f_value(&f, &g, &c, 2, 1, 3),
            Err(Error::BlockOutOfRange { .. })
        ));
        assert!(matches!(
            block_f_value(&f, &g, &c, 3, 1, 1),
            Err(Error::BlockOutOfRange { .. })
        ));
        assert!(matches!(
            block_g_value(&f, &g, &c, 1, 2, 1),
            Err(Error::BlockOutOfRange { .. })
        ));
    }

    #[test]
    fn identical_series_score_one_along_the_diagonal() {
        let f = series(&[0.0, 0.2, 0.5, 0.8], &[1.0, -0.5, 2.0, 0.25]);
        let c = build_similarity_matrix(&f, &f, |x, y| exp_kernel(x, y, ValueMetric::Euclidean))
            .unwrap();
        let r = elastic_similarity(&f, &f, &c).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-12);
        assert_eq!(r.path.moves().len(), 4);
        for mv in r.path.moves() {
            assert_eq!((mv.branch, mv.count), (Branch::F, 1));
        }
        assert_eq!(r.alpha, PiecewiseLinearDiffeo::identity());
        assert_eq!(r.value, r.state.value());
    }

    #[test]
    fn singleton_instance_scores_its_only_entry() {
        let f = series(&[0.0], &[0.0]);
        let r = elastic_similarity(&f, &f, &grid(1, 1, &[0.5])).unwrap();
        assert_eq!(r.value, 0.5);
        assert_eq!(r.path.moves(), &[Move { branch: Branch::F, count: 1, end_i: 1, end_j: 1 }]);
        assert_eq!(r.alpha, PiecewiseLinearDiffeo::identity());
    }

    #[test]
    fn forced_f_block_reconstructs_the_known_warp() {
        let (f, g, c) = two_by_one();
        let r = elastic_similarity(&f, &g, &c).unwrap();
        assert_relative_eq!(r.value, 0.7905694150420949, max_relative = 1e-15);
        assert_eq!(r.path.moves(), &[Move { branch: Branch::F, count: 2, end_i: 2, end_j: 1 }]);
        // Piece widths carry weight C²·Δs = (0.5, 0.125), so the crossing
        // of s_1 = 0.5 sits at τ = 0.8.
        assert_eq!(r.alpha.breakpoints(), &[(0.0, 0.0), (0.8, 0.5), (1.0, 1.0)]);
    }

    #[test]
    fn grid_shape_mismatch_is_rejected() {
        let (f, g, _) = two_by_one();
        let bad = grid(1, 2, &[0.5, 0.5]);
        assert!(matches!(
            elastic_similarity(&f, &g, &bad),
            Err(Error::GridShapeMismatch { .. })
        ));
    }

    #[test]
    fn unreachable_boundary_cells_hold_negative_infinity() {
        let (f, g, c) = two_by_one();
        let r = elastic_similarity(&f, &g, &c).unwrap();
        assert_eq!(r.state.value_at(0, 0), 0.0);
        for i in 1..=2 {
            assert_eq!(r.state.value_at(i, 0), f64::NEG_INFINITY);
        }
        assert_eq!(r.state.value_at(0, 1), f64::NEG_INFINITY);
    }

    #[test]
    fn table_is_nondecreasing_along_the_decoded_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let (f, g, c) = random_instance(&mut rng, 8, 8, 0.05);
            let r = elastic_similarity(&f, &g, &c).unwrap();
            let mut prev = r.state.value_at(0, 0);
            for mv in r.path.moves() {
                let here = r.state.value_at(mv.end_i, mv.end_j);
                assert!(here >= prev);
                prev = here;
            }
        }
    }

    #[test]
    fn path_block_values_resum_to_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (f, g, c) = random_instance(&mut rng, 8, 8, 0.05);
            let r = elastic_similarity(&f, &g, &c).unwrap();
            let mut sum = 0.0;
            for mv in r.path.moves() {
                sum += match mv.branch {
                    Branch::F => block_f_value(&f, &g, &c, mv.end_i, mv.end_j, mv.count).unwrap(),
                    Branch::G => block_g_value(&f, &g, &c, mv.end_i, mv.end_j, mv.count).unwrap(),
                };
            }
            assert!((sum - r.value).abs() <= 1e-12);
        }
    }

    #[test]
    fn objective_of_the_reconstruction_matches_the_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (f, g, c) = random_instance(&mut rng, 10, 10, 0.05);
            let r = elastic_similarity(&f, &g, &c).unwrap();
            let obj = evaluate_objective(&f, &g, &c, &r.alpha).unwrap();
            assert!((obj - r.value).abs() <= 1e-12, "obj {obj} vs value {}", r.value);
        }
    }

    #[test]
    fn objective_of_identity_on_identical_series_is_one() {
        let f = series(&[0.0, 0.3, 0.6], &[1.0, 2.0, 3.0]);
        let c = build_similarity_matrix(&f, &f, |x, y| exp_kernel(x, y, ValueMetric::Euclidean))
            .unwrap();
        let obj =
            evaluate_objective(&f, &f, &c, &PiecewiseLinearDiffeo::identity()).unwrap();
        assert!((obj - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn nudging_the_forced_block_crossing_lowers_the_objective() {
        let (f, g, c) = two_by_one();
        let best = elastic_similarity(&f, &g, &c).unwrap().value;
        for x in [0.75, 0.85] {
            let alpha =
                PiecewiseLinearDiffeo::new(vec![(0.0, 0.0), (x, 0.5), (1.0, 1.0)]).unwrap();
            let obj = evaluate_objective(&f, &g, &c, &alpha).unwrap();
            assert!(obj < best);
        }
    }

    #[test]
    fn raising_a_similarity_never_lowers_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let (f, g, c) = random_instance(&mut rng, 6, 6, 0.05);
            let base = elastic_similarity(&f, &g, &c).unwrap().value;
            let mut entries = c.entries().to_vec();
            let idx = rng.gen_range(0..entries.len());
            entries[idx] = (entries[idx] + rng.gen_range(0.0..0.5)).min(1.0);
            let bumped = SimilarityMatrix::new(c.rows(), c.cols(), entries).unwrap();
            let after = elastic_similarity(&f, &g, &bumped).unwrap().value;
            assert!(after >= base - 1e-15);
        }
    }

    #[test]
    fn value_stays_in_the_unit_interval_and_beats_the_identity_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n = rng.gen_range(1..10);
            let f = random_series(&mut rng, n, 1);
            let g_vals: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.gen_range(-1.0..1.0)])
                .collect();
            let g = TimeSeries::new(f.timestamps().to_vec(), g_vals).unwrap();
            let c = build_similarity_matrix(&f, &g, |x, y| {
                exp_kernel(x, y, ValueMetric::Euclidean)
            })
            .unwrap();
            let r = elastic_similarity(&f, &g, &c).unwrap();
            assert!(r.value > 0.0 && r.value <= 1.0);
            // Same grids: the diagonal of single-sample blocks is admissible,
            // so the optimum is at least its value.
            let t = with_sentinel(f.timestamps());
            let diag: f64 = (0..n).map(|l| (t[l + 1] - t[l]) * c.get(l, l)).sum();
            assert!(r.value >= diag - 1e-12);
        }
    }

    #[test]
    fn transposing_the_instance_preserves_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let (f, g, c) = random_instance(&mut rng, 8, 8, 0.05);
            let a = elastic_similarity(&f, &g, &c).unwrap().value;
            let b = elastic_similarity(&g, &f, &c.transpose()).unwrap().value;
            assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn reconstruction_rejects_a_foreign_path() {
        let (f, g, c) = two_by_one();
        let other = WarpingPath::new(vec![Move { branch: Branch::F, count: 1, end_i: 1, end_j: 1 }])
            .unwrap();
        assert!(matches!(
            reconstruct_alpha(&other, &f, &g, &c, DEFAULT_SLOPE_FLOOR),
            Err(Error::InvalidPath { .. })
        ));
    }

    #[test]
    fn reconstruction_reports_degenerate_slopes() {
        // One similarity at the floor forces a G-block slope ~1e-30.
        let f = series(&[0.0], &[0.0]);
        let g = series(&[0.0, 0.5], &[0.0, 0.0]);
        let c = grid(1, 2, &[1.0, 0.0]);
        let err = elastic_similarity(&f, &g, &c).unwrap_err();
        assert!(matches!(err, Error::DegenerateWarp { .. }), "{err:?}");
    }

    #[test]
    fn dtw_matches_hand_computed_cases() {
        assert_eq!(dtw_baseline(&[0.25], 1, 1).unwrap(), 0.25);
        assert_eq!(dtw_baseline(&[0.0, 1.0, 1.0, 0.0], 2, 2).unwrap(), 0.0);
        // Identical series, zero diagonal.
        let cost = [0.0, 2.0, 3.0, 2.0, 0.0, 2.0, 3.0, 2.0, 0.0];
        assert_eq!(dtw_baseline(&cost, 3, 3).unwrap(), 0.0);
        // Rectangular: right, then diagonally down to the cheap corner.
        let cost = [0.0, 0.5, 4.0, 4.0, 0.5, 0.0];
        assert_eq!(dtw_baseline(&cost, 2, 3).unwrap(), 0.5);
    }

    #[test]
    fn dtw_rejects_malformed_grids() {
        assert!(matches!(dtw_baseline(&[], 0, 0), Err(Error::EmptySeries)));
        assert!(matches!(
            dtw_baseline(&[0.0; 3], 2, 2),
            Err(Error::MatrixShapeMismatch { .. })
        ));
        assert!(matches!(
            dtw_baseline(&[0.0, -1.0], 1, 2),
            Err(Error::NegativeCost { .. })
        ));
        assert!(dtw_baseline(&[f64::NAN], 1, 1).is_err());
    }
}
