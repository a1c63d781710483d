use crate::path::Branch;

/// Errors shared by every module of the crate.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A sequence that must be strictly increasing is not.
    #[error("{what} must be strictly increasing (violated at index {index})")]
    NotStrictlyIncreasing {
        /// What was being validated ("timestamps", "breakpoint abscissae", ...).
        what: &'static str,
        /// Index of the first element that fails to exceed its predecessor.
        index: usize,
    },
    /// Timestamps must start at exactly 0.
    #[error("first timestamp must be 0, got {0}")]
    FirstTimestampNotZero(f64),
    /// Timestamps must stay strictly below the terminal instant 1.
    #[error("last timestamp must be < 1, got {0}")]
    LastTimestampNotBelowOne(f64),
    /// A series needs at least one sample.
    #[error("time series must contain at least one sample")]
    EmptySeries,
    /// Parallel lists that must agree in length do not.
    #[error("timestamps and values differ in length: {timestamps} vs {values}")]
    LengthMismatch {
        /// Number of timestamps supplied.
        timestamps: usize,
        /// Number of value rows supplied.
        values: usize,
    },
    /// A number that must be finite is NaN or infinite.
    #[error("non-finite number in {context}")]
    NonFinite {
        /// Where the offending number appeared.
        context: &'static str,
    },
    /// Two points that must share a dimension do not.
    #[error("value dimension mismatch: {left} vs {right}")]
    DimensionMismatch {
        /// Dimension of the left operand.
        left: usize,
        /// Dimension of the right operand.
        right: usize,
    },
    /// A similarity grid does not match the series it should score.
    #[error("similarity matrix is {rows}x{cols} but the series have {n} and {m} samples")]
    GridShapeMismatch {
        /// Rows of the supplied matrix.
        rows: usize,
        /// Columns of the supplied matrix.
        cols: usize,
        /// Length of the row series.
        n: usize,
        /// Length of the column series.
        m: usize,
    },
    /// A similarity entry is negative or exceeds 1. Zeros are clamped to the
    /// floor instead; anything outside `[0, 1]` is a hard error.
    #[error("similarity entry at row {row}, col {col} is {value}, outside [0, 1]")]
    SimilarityOutOfRange {
        /// Row of the offending entry.
        row: usize,
        /// Column of the offending entry.
        col: usize,
        /// The offending value.
        value: f64,
    },
    /// Warping costs must be nonnegative.
    #[error("cost entry at row {row}, col {col} is negative: {value}")]
    NegativeCost {
        /// Row of the offending entry.
        row: usize,
        /// Column of the offending entry.
        col: usize,
        /// The offending value.
        value: f64,
    },
    /// A matrix was supplied with the wrong element count.
    #[error("matrix has {len} entries, expected {rows}*{cols}={expected}")]
    MatrixShapeMismatch {
        /// Number of entries supplied.
        len: usize,
        /// Expected row count.
        rows: usize,
        /// Expected column count.
        cols: usize,
        /// `rows*cols`, spelled out.
        expected: usize,
    },
    /// Warp breakpoints must run from (0,0) to (1,1).
    #[error("warp breakpoints must start at (0,0) and end at (1,1), got ({x},{y})")]
    BadEndpoint {
        /// Abscissa of the offending endpoint.
        x: f64,
        /// Ordinate of the offending endpoint.
        y: f64,
    },
    /// A warp needs at least the two endpoints.
    #[error("warp needs at least 2 breakpoints, got {0}")]
    TooFewBreakpoints(usize),
    /// A warp segment is too flat or too steep to keep `√slope` and the
    /// inverse map well conditioned.
    #[error("warp segment {index} has slope {slope:e}, outside [{min:e}, {max:e}]")]
    SlopeOutOfRange {
        /// Segment index (between breakpoints `index` and `index + 1`).
        index: usize,
        /// The offending slope.
        slope: f64,
        /// Smallest admissible slope.
        min: f64,
        /// Largest admissible slope.
        max: f64,
    },
    /// An alignment path violates the block-move algebra.
    #[error("invalid alignment path: {reason}")]
    InvalidPath {
        /// What was violated.
        reason: String,
    },
    /// A block value was requested outside the valid index ranges.
    #[error("block {branch:?} with count {count} is out of range at cell ({i},{j}) of a {n}x{m} grid")]
    BlockOutOfRange {
        /// Which block family was requested.
        branch: Branch,
        /// Number of samples the block covers.
        count: usize,
        /// One-based row of the requested cell.
        i: usize,
        /// One-based column of the requested cell.
        j: usize,
        /// Number of row samples.
        n: usize,
        /// Number of column samples.
        m: usize,
    },
    /// The optimal warp exists only in the limit: some reconstructed slope
    /// fell below the requested floor, so no valid warp is emitted.
    #[error("warp reconstruction degenerate: {reason}")]
    DegenerateWarp {
        /// Which slope collapsed and where.
        reason: String,
    },
    /// Exhaustive enumeration was asked for an instance above the cap.
    #[error("{n}x{m} exceeds the enumeration cap of {cap} samples per side")]
    EnumerationCapExceeded {
        /// Row samples requested.
        n: usize,
        /// Column samples requested.
        m: usize,
        /// The cap.
        cap: usize,
    },
    /// Text input failed to parse; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse {
        /// 1-based line number in the input text.
        line: usize,
        /// What went wrong.
        message: String,
    },
}

/// Convenience result type for this crate.
pub type Result<T> = std::result::Result<T, Error>;
