//! Curve file format: CSV with a one-line JSON metadata header.
//!
//! The first line is `# {json}` (a comment to gnuplot and friends), the
//! second names the columns, and every following row carries the
//! numbers with 17 significant digits, enough for f64 values to
//! round-trip bit for bit:
//!
//! ```text
//! # {"label":"fuzzy N=2","n":2,...}
//! lambda,t,trace,area,dimension
//! 1.0000000000000000e0,1.0000000000000000e0,...
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{CurvePoint, GeometryCurve};

/// Grid description recorded in file headers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    /// "log" or "linear".
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

/// Metadata embedded in the `#` header line of every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub label: String,
    /// Fuzzy truncation N, when the spectrum is fuzzy.
    pub n: Option<u32>,
    /// Round-sphere truncation, when the spectrum is the standard one.
    pub n_max: Option<u32>,
    pub include_zero_modes: Option<bool>,
    pub radius: f64,
    pub grid: Option<GridSpec>,
    pub normalize_area: bool,
}

/// Base column set of curve files.
pub const CURVE_COLUMNS: &str = "lambda,t,trace,area,dimension";

/// Render a float with 17 significant digits (round-trip safe).
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize a curve to CSV text with its metadata header.
///
/// With `meta.normalize_area` set, an extra `area_over_4pi` column is
/// appended after the base columns.
pub fn curve_to_csv(curve: &GeometryCurve, meta: &CurveMeta) -> Result<String> {
    let header = serde_json::to_string(meta)
        .map_err(|e| Error::MalformedCurve(format!("metadata serialization: {e}")))?;
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(&header);
    out.push('\n');
    out.push_str(CURVE_COLUMNS);
    if meta.normalize_area {
        out.push_str(",area_over_4pi");
    }
    out.push('\n');
    let four_pi = 2.0 * std::f64::consts::TAU;
    for p in curve.points() {
        out.push_str(&format_f64(p.lambda));
        for v in [p.t, p.trace, p.area, p.dimension] {
            out.push(',');
            out.push_str(&format_f64(v));
        }
        if meta.normalize_area {
            out.push(',');
            out.push_str(&format_f64(p.area / four_pi));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parse a curve file produced by [`curve_to_csv`].
///
/// Extra columns (such as `area_over_4pi`) are ignored; the returned
/// points are bitwise identical to the ones that were written.
pub fn curve_from_csv(text: &str) -> Result<(CurveMeta, GeometryCurve)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::MalformedCurve("empty file".into()))?;
    let json = header
        .strip_prefix("# ")
        .or_else(|| header.strip_prefix('#'))
        .ok_or_else(|| Error::MalformedCurve("missing `#` metadata header".into()))?;
    let meta: CurveMeta = serde_json::from_str(json.trim())
        .map_err(|e| Error::MalformedCurve(format!("metadata: {e}")))?;

    let columns = lines
        .next()
        .ok_or_else(|| Error::MalformedCurve("missing column header".into()))?;
    if !columns.starts_with(CURVE_COLUMNS) {
        return Err(Error::MalformedCurve(format!(
            "unexpected columns `{columns}`"
        )));
    }

    let mut points = Vec::new();
    for (idx, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let mut next = || -> Result<f64> {
            fields
                .next()
                .ok_or_else(|| Error::MalformedCurve(format!("row {}: too few fields", idx + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::MalformedCurve(format!("row {}: {e}", idx + 1)))
        };
        points.push(CurvePoint {
            lambda: next()?,
            t: next()?,
            trace: next()?,
            area: next()?,
            dimension: next()?,
        });
    }
    let curve = GeometryCurve::new(meta.label.clone(), points);
    Ok((meta, curve))
}

#[derive(Serialize)]
struct JsonCurve<'a> {
    meta: &'a CurveMeta,
    points: &'a [CurvePoint],
}

/// Serialize a curve (with metadata) as pretty-printed JSON.
pub fn curve_to_json(curve: &GeometryCurve, meta: &CurveMeta) -> Result<String> {
    let doc = JsonCurve {
        meta,
        points: curve.points(),
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::MalformedCurve(format!("json serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}
