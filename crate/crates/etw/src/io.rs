//! Plain-text exchange formats: CSV for series, similarity grids, and
//! warps; JSON for alignment results.
//!
//! Parsers report the 1-based line of the first offending record. Writers
//! print every number with 17 significant digits (`{:.16e}`), which is
//! enough to reproduce any `f64` bit for bit, and emit byte-identical text
//! for equal inputs.

use crate::diffeo::PiecewiseLinearDiffeo;
use crate::error::{Error, Result};
use crate::path::{Branch, Move};
use crate::series::{normalize_timestamps, SimilarityMatrix, TimeSeries};
use crate::warp::EtwResult;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("cannot parse '{}' as a number", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value '{}'", field.trim())));
    }
    Ok(v)
}

/// Parses a time series from CSV with header `t,v1,...,vd`.
///
/// Every data row carries one timestamp and `d` coordinates. With
/// `normalize` set, raw timestamps are first mapped affinely onto `[0, 1)`
/// (see [`normalize_timestamps`]); otherwise they must already satisfy the
/// series invariants.
///
/// # Errors
///
/// Reports the first malformed line: bad header, wrong field count,
/// unparsable or non-finite numbers, and timestamp violations, each with
/// its 1-based line number.
pub fn parse_time_series_csv(text: &str, normalize: bool) -> Result<TimeSeries> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input, expected header 't,v1,...,vd'"))?;
    let tokens: Vec<&str> = header.split(',').map(str::trim).collect();
    if tokens.len() < 2 || tokens[0] != "t" {
        return Err(parse_err(1, "header must be 't,v1,...,vd'"));
    }
    for (idx, tok) in tokens[1..].iter().enumerate() {
        let want = format!("v{}", idx + 1);
        if *tok != want {
            return Err(parse_err(
                1,
                format!("header column {} must be '{}', got '{}'", idx + 2, want, tok),
            ));
        }
    }
    let dim = tokens.len() - 1;

    let mut raw_ts = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(parse_err(
                line_no,
                format!("expected {} fields, got {}", dim + 1, fields.len()),
            ));
        }
        raw_ts.push(parse_number(line_no, fields[0])?);
        let row: Vec<f64> = fields[1..]
            .iter()
            .map(|f| parse_number(line_no, f))
            .collect::<Result<_>>()?;
        values.push(row);
    }
    if raw_ts.is_empty() {
        return Err(parse_err(1, "expected at least one data row after the header"));
    }

    let rows = raw_ts.len();
    // Line attribution for timestamp violations: stamp index i sits on line
    // i + 2 (one header line, 1-based lines).
    let relocate = move |e: Error| match e {
        Error::NotStrictlyIncreasing { index, .. } => parse_err(
            index + 2,
            "timestamps must be strictly increasing".to_string(),
        ),
        Error::FirstTimestampNotZero(v) => parse_err(
            2,
            format!("first timestamp must be 0, got {v} (normalization would rescale it)"),
        ),
        Error::LastTimestampNotBelowOne(v) => parse_err(
            rows + 1,
            format!("last timestamp must be < 1, got {v} (normalization would rescale it)"),
        ),
        other => parse_err(1, other.to_string()),
    };

    let ts = if normalize {
        normalize_timestamps(&raw_ts).map_err(relocate)?
    } else {
        raw_ts
    };
    TimeSeries::new(ts, values).map_err(relocate)
}

/// Parses an `n x m` similarity grid from headerless CSV, one row per line.
///
/// # Errors
///
/// Reports wrong row or column counts, unparsable numbers, and entries
/// outside `[0, 1]`, each with its 1-based line number.
pub fn parse_similarity_csv(text: &str, n: usize, m: usize) -> Result<SimilarityMatrix> {
    let mut entries = Vec::with_capacity(n * m);
    let mut rows = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if rows == n {
            return Err(parse_err(line_no, format!("expected exactly {n} rows")));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != m {
            return Err(parse_err(
                line_no,
                format!("expected {m} entries, got {}", fields.len()),
            ));
        }
        for f in fields {
            entries.push(parse_number(line_no, f)?);
        }
        rows += 1;
    }
    if rows < n {
        return Err(parse_err(rows + 1, format!("expected {n} rows, found {rows}")));
    }
    SimilarityMatrix::new(n, m, entries).map_err(|e| match e {
        Error::SimilarityOutOfRange { row, col, value } => parse_err(
            row + 1,
            format!("similarity entry in column {} is {value}, outside [0, 1]", col + 1),
        ),
        other => parse_err(1, other.to_string()),
    })
}

/// Writes a similarity grid as headerless CSV with 17 significant digits.
pub fn write_similarity_csv(m: &SimilarityMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_f64(m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

/// Parses a piecewise linear warp from CSV with header `tau,alpha`.
///
/// Rows are breakpoints `(τ, α(τ))`; they must run from `(0, 0)` to
/// `(1, 1)`, strictly increasing in both coordinates, with segment slopes
/// inside the admissible range of [`PiecewiseLinearDiffeo`].
///
/// # Errors
///
/// Reports the first offending row with its 1-based line number.
pub fn parse_diffeo_csv(text: &str) -> Result<PiecewiseLinearDiffeo> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input, expected header 'tau,alpha'"))?;
    let tokens: Vec<&str> = header.split(',').map(str::trim).collect();
    if tokens != ["tau", "alpha"] {
        return Err(parse_err(1, "header must be 'tau,alpha'"));
    }

    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(parse_err(
                line_no,
                format!("expected 2 fields, got {}", fields.len()),
            ));
        }
        let x = parse_number(line_no, fields[0])?;
        let y = parse_number(line_no, fields[1])?;
        if let Some(&(px, py)) = pts.last() {
            if x <= px {
                return Err(parse_err(line_no, "tau must be strictly increasing"));
            }
            if y <= py {
                return Err(parse_err(line_no, "alpha must be strictly increasing"));
            }
            let slope = (y - py) / (x - px);
            if !(PiecewiseLinearDiffeo::MIN_SLOPE..=PiecewiseLinearDiffeo::MAX_SLOPE)
                .contains(&slope)
            {
                return Err(parse_err(
                    line_no,
                    format!(
                        "segment into this row has slope {slope:e}, outside [{:e}, {:e}]",
                        PiecewiseLinearDiffeo::MIN_SLOPE,
                        PiecewiseLinearDiffeo::MAX_SLOPE
                    ),
                ));
            }
        }
        pts.push((x, y));
    }

    let rows = pts.len();
    if rows < 2 {
        return Err(parse_err(rows + 1, "a warp needs at least 2 breakpoints"));
    }
    if pts[0] != (0.0, 0.0) {
        return Err(parse_err(
            2,
            format!("warp must start at (0,0), got ({},{})", pts[0].0, pts[0].1),
        ));
    }
    if pts[rows - 1] != (1.0, 1.0) {
        return Err(parse_err(
            rows + 1,
            format!(
                "warp must end at (1,1), got ({},{})",
                pts[rows - 1].0,
                pts[rows - 1].1
            ),
        ));
    }
    // Everything line-attributable has been checked; residual construction
    // failures would be a bug, but surface them rather than panic.
    PiecewiseLinearDiffeo::new(pts).map_err(|e| parse_err(1, e.to_string()))
}

/// Provenance carried alongside a serialized result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultMetadata {
    /// Where the first series came from.
    pub left: String,
    /// Where the second series came from.
    pub right: String,
    /// Which kernel produced the similarity grid.
    pub kernel: String,
    /// Library version that produced the result.
    pub version: String,
}

/// A serializable view of one alignment result.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultDocument {
    /// The similarity value.
    pub similarity: f64,
    /// The optimal block path.
    pub path: Vec<Move>,
    /// Breakpoints of the optimal warp.
    pub alpha: Vec<(f64, f64)>,
    /// Provenance.
    pub metadata: ResultMetadata,
}

impl ResultDocument {
    /// Packages an alignment result with its provenance.
    pub fn new(result: &EtwResult, metadata: ResultMetadata) -> Self {
        ResultDocument {
            similarity: result.value,
            path: result.path.moves().to_vec(),
            alpha: result.alpha.breakpoints().to_vec(),
            metadata,
        }
    }
}

/// 17 significant digits: round-trips any finite `f64` exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Serializes a result document as JSON with a fixed key order
/// (`similarity`, `path`, `alpha`, `metadata`) and 17-digit numbers, so
/// equal documents produce byte-identical text.
///
/// # Panics
///
/// Panics on non-finite numbers, which no valid result contains.
pub fn write_result_json(doc: &ResultDocument) -> String {
    assert!(
        doc.similarity.is_finite()
            && doc.alpha.iter().all(|&(x, y)| x.is_finite() && y.is_finite()),
        "non-finite numbers are not representable in JSON"
    );
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"similarity\": {},\n", fmt_f64(doc.similarity)));

    out.push_str("  \"path\": [");
    for (idx, mv) in doc.path.iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        let branch = match mv.branch {
            Branch::F => "F",
            Branch::G => "G",
        };
        out.push_str(&format!(
            "\n    {{\"branch\": \"{}\", \"count\": {}, \"end_i\": {}, \"end_j\": {}}}",
            branch, mv.count, mv.end_i, mv.end_j
        ));
    }
    out.push_str(if doc.path.is_empty() { "],\n" } else { "\n  ],\n" });

    out.push_str("  \"alpha\": [");
    for (idx, &(x, y)) in doc.alpha.iter().enumerate() {
        if idx > 0 {
            out.push(',');
        }
        out.push_str(&format!("\n    [{}, {}]", fmt_f64(x), fmt_f64(y)));
    }
    out.push_str(if doc.alpha.is_empty() { "],\n" } else { "\n  ],\n" });

    out.push_str("  \"metadata\": {\n");
    out.push_str(&format!("    \"left\": \"{}\",\n", escape_json(&doc.metadata.left)));
    out.push_str(&format!("    \"right\": \"{}\",\n", escape_json(&doc.metadata.right)));
    out.push_str(&format!("    \"kernel\": \"{}\",\n", escape_json(&doc.metadata.kernel)));
    out.push_str(&format!("    \"version\": \"{}\"\n", escape_json(&doc.metadata.version)));
    out.push_str("  }\n}\n");
    out
}

fn json_field<'a>(
    obj: &'a serde_json::Map<String, serde_json::Value>,
    name: &str,
) -> Result<&'a serde_json::Value> {
    obj.get(name)
        .ok_or_else(|| parse_err(1, format!("missing field '{name}'")))
}

fn json_f64(v: &serde_json::Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| parse_err(1, format!("{what} must be a number")))
}

fn json_usize(v: &serde_json::Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| parse_err(1, format!("{what} must be a nonnegative integer")))
}

fn json_str(v: &serde_json::Value, what: &str) -> Result<String> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| parse_err(1, format!("{what} must be a string")))
}

/// Parses a result document produced by [`write_result_json`].
///
/// # Errors
///
/// Reports JSON syntax errors with their line and structural problems
/// (missing or mistyped fields) by name.
pub fn parse_result_json(text: &str) -> Result<ResultDocument> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err(1, "top level must be an object"))?;

    let similarity = json_f64(json_field(obj, "similarity")?, "'similarity'")?;

    let mut path = Vec::new();
    let raw_path = json_field(obj, "path")?
        .as_array()
        .ok_or_else(|| parse_err(1, "'path' must be an array"))?;
    for mv in raw_path {
        let mobj = mv
            .as_object()
            .ok_or_else(|| parse_err(1, "path entries must be objects"))?;
        let branch = match json_str(json_field(mobj, "branch")?, "'branch'")?.as_str() {
            "F" => Branch::F,
            "G" => Branch::G,
            other => {
                return Err(parse_err(1, format!("unknown branch '{other}', expected F or G")))
            }
        };
        path.push(Move {
            branch,
            count: json_usize(json_field(mobj, "count")?, "'count'")?,
            end_i: json_usize(json_field(mobj, "end_i")?, "'end_i'")?,
            end_j: json_usize(json_field(mobj, "end_j")?, "'end_j'")?,
        });
    }

    let mut alpha = Vec::new();
    let raw_alpha = json_field(obj, "alpha")?
        .as_array()
        .ok_or_else(|| parse_err(1, "'alpha' must be an array"))?;
    for bp in raw_alpha {
        let pair = bp
            .as_array()
            .ok_or_else(|| parse_err(1, "alpha entries must be [tau, alpha] pairs"))?;
        if pair.len() != 2 {
            return Err(parse_err(1, "alpha entries must be [tau, alpha] pairs"));
        }
        alpha.push((
            json_f64(&pair[0], "alpha breakpoint tau")?,
            json_f64(&pair[1], "alpha breakpoint value")?,
        ));
    }

    let mobj = json_field(obj, "metadata")?
        .as_object()
        .ok_or_else(|| parse_err(1, "'metadata' must be an object"))?;
    let metadata = ResultMetadata {
        left: json_str(json_field(mobj, "left")?, "'left'")?,
        right: json_str(json_field(mobj, "right")?, "'right'")?,
        kernel: json_str(json_field(mobj, "kernel")?, "'kernel'")?,
        version: json_str(json_field(mobj, "version")?, "'version'")?,
    };

    Ok(ResultDocument {
        similarity,
        path,
        alpha,
        metadata,
    })
}
