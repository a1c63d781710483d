//! Time series, similarity kernels, and the sample-similarity grid.
//!
//! A series is a list of samples `(v_j, t_j)` read as the piecewise-constant
//! function equal to `v_j` on `[t_j, t_{j+1})`, with timestamps in `[0, 1)`
//! and an implied terminal instant at 1. Values live in `ℝ^d`; series valued
//! in any other metric space enter through a precomputed similarity grid, in
//! which case the stored values are never consulted.
//!
//! The alignment program consumes only the grid `C[i][j] = C(f_i, g_j)` of
//! pairwise sample similarities in `(0, 1]`, built here either from the
//! default kernel `exp(-ρ(x, y))` or from user-supplied numbers.

use crate::error::{Error, Result};

/// Smallest similarity the grid will store. Exact zeros are legal as *input*
/// but are clamped up to this floor: a zero similarity would force a zero
/// slope in the reconstructed warp, which stops being a bijection. Clamping
/// perturbs the optimal value by less than the floor itself.
pub const SIMILARITY_FLOOR: f64 = 1e-15;

/// A sampled time series on `[0, 1)`.
///
/// `timestamps` are strictly increasing, start at exactly 0, and stay below
/// 1; the series is interpreted as the piecewise-constant function equal to
/// `values[j]` on `[timestamps[j], timestamps[j+1])` and to the last value on
/// `[timestamps[n-1], 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<f64>,
    /// Row-major sample values, `len * dim` numbers.
    values: Vec<f64>,
    dim: usize,
}

impl TimeSeries {
    /// Validates and builds a series from parallel lists of timestamps and
    /// value vectors.
    ///
    /// # Errors
    ///
    /// Rejects empty input, length mismatch, non-finite numbers, a nonzero
    /// first timestamp, non-increasing timestamps, a last timestamp at or
    /// above 1, and value rows of unequal (or zero) dimension.
    pub fn new(timestamps: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if timestamps.is_empty() {
            return Err(Error::EmptySeries);
        }
        if timestamps.len() != values.len() {
            return Err(Error::LengthMismatch {
                timestamps: timestamps.len(),
                values: values.len(),
            });
        }
        validate_timestamps(&timestamps)?;
        let dim = values[0].len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        let mut flat = Vec::with_capacity(values.len() * dim);
        for row in &values {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    context: "series values",
                });
            }
            flat.extend_from_slice(row);
        }
        Ok(TimeSeries {
            timestamps,
            values: flat,
            dim,
        })
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    /// Always false: construction rejects empty series.
    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Dimension of the value space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The strictly increasing timestamps in `[0, 1)`.
    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    /// The `i`-th sample value.
    ///
    /// # Panics
    ///
    /// Panics if `i` is out of range.
    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }
}

fn validate_timestamps(ts: &[f64]) -> Result<()> {
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite {
            context: "timestamps",
        });
    }
    if ts[0] != 0.0 {
        return Err(Error::FirstTimestampNotZero(ts[0]));
    }
    for i in 1..ts.len() {
        if ts[i] <= ts[i - 1] {
            return Err(Error::NotStrictlyIncreasing {
                what: "timestamps",
                index: i,
            });
        }
    }
    let last = ts[ts.len() - 1];
    if last >= 1.0 {
        return Err(Error::LastTimestampNotBelowOne(last));
    }
    Ok(())
}

/// Affinely maps raw timestamps onto `[0, 1)`.
///
/// `raw[0]` goes to 0 and an implied terminal instant goes to 1, where the
/// terminal instant is the last stamp plus the mean gap (or `raw[0] + 1` for
/// a single sample, which maps to `[0.0]`). The output satisfies the
/// [`TimeSeries`] timestamp invariants, and renormalizing changes nothing
/// beyond 1 ulp per element.
///
/// # Errors
///
/// Rejects empty or non-finite input and non-increasing stamps.
pub fn normalize_timestamps(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(Error::EmptySeries);
    }
    if raw.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite {
            context: "timestamps",
        });
    }
    for i in 1..raw.len() {
        if raw[i] <= raw[i - 1] {
            return Err(Error::NotStrictlyIncreasing {
                what: "timestamps",
                index: i,
            });
        }
    }
    let n = raw.len();
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let span = raw[n - 1] - raw[0];
    let mean_gap = span / (n - 1) as f64;
    let full = span + mean_gap;
    Ok(raw.iter().map(|&t| (t - raw[0]) / full).collect())
}

/// Built-in metrics on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueMetric {
    /// `ρ(x, y) = ‖x − y‖₂`.
    Euclidean,
    /// `ρ(x, y) = ‖x − y‖₁`.
    Manhattan,
}

impl ValueMetric {
    /// Distance between two points.
    ///
    /// # Errors
    ///
    /// Rejects points of unequal dimension.
    pub fn distance(self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let d = match self {
            ValueMetric::Euclidean => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            ValueMetric::Manhattan => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
        };
        Ok(d)
    }
}

/// The similarity kernel `exp(-ρ(x, y))`: 1 exactly when the points
/// coincide, decaying toward 0 as they separate, never reaching it.
///
/// `1 - exp(-ρ)` is again a metric (the map `u ↦ 1 - e^{-u}` is concave,
/// increasing, and vanishes at 0), which is what makes this kernel a
/// similarity coefficient rather than an arbitrary score.
///
/// # Errors
///
/// Rejects non-finite coordinates and dimension mismatch.
pub fn exp_kernel(x: &[f64], y: &[f64], metric: ValueMetric) -> Result<f64> {
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "kernel input",
        });
    }
    let d = metric.distance(x, y)?;
    Ok((-d).exp())
}

/// The grid `C[i][j]` of pairwise sample similarities, all in
/// `[SIMILARITY_FLOOR, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    /// Row-major entries.
    entries: Vec<f64>,
}

impl SimilarityMatrix {
    /// Validates row-major entries and clamps exact or near zeros up to
    /// [`SIMILARITY_FLOOR`].
    ///
    /// # Errors
    ///
    /// Rejects a wrong element count, non-finite entries, and entries
    /// outside `[0, 1]`.
    pub fn new(rows: usize, cols: usize, mut entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::MatrixShapeMismatch {
                len: entries.len(),
                rows,
                cols,
                expected: rows * cols,
            });
        }
        for (idx, entry) in entries.iter_mut().enumerate() {
            let v = *entry;
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::SimilarityOutOfRange {
                    row: idx / cols,
                    col: idx % cols,
                    value: v,
                });
            }
            if v < SIMILARITY_FLOOR {
                *entry = SIMILARITY_FLOOR;
            }
        }
        Ok(SimilarityMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Number of rows (samples of the first series).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns (samples of the second series).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `C[i][j]`.
    ///
    /// # Panics
    ///
    /// Panics if an index is out of range.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.rows && j < self.cols, "similarity index out of range");
        self.entries[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// The transposed grid, for scoring the pair in the opposite order.
    pub fn transpose(&self) -> SimilarityMatrix {
        let mut entries = vec![0.0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        SimilarityMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }
}

/// Builds the grid `C[i][j] = kernel(f_i, g_j)` for two series.
///
/// The kernel must return similarities in `[0, 1]`; zeros are clamped up to
/// [`SIMILARITY_FLOOR`] like every other grid source.
///
/// # Errors
///
/// Propagates kernel errors and rejects kernel outputs outside `[0, 1]`.
pub fn build_similarity_matrix<K>(f: &TimeSeries, g: &TimeSeries, kernel: K) -> Result<SimilarityMatrix>
where
    K: Fn(&[f64], &[f64]) -> Result<f64>,
{
    let mut entries = Vec::with_capacity(f.len() * g.len());
    for i in 0..f.len() {
        for j in 0..g.len() {
            entries.push(kernel(f.value(i), g.value(j))?);
        }
    }
    SimilarityMatrix::new(f.len(), g.len(), entries)
}
