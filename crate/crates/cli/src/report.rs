//! Rendering of enclosures, rationals and tables.

use kempner_core::numeric::{significant_digits, to_scientific};
use kempner_core::{Enclosure, Rational, Rounding, SeriesResult};
use serde::Serialize;

use crate::args::Format;

/// `(lo, hi)` as decimal strings, rounded outward with the digit count
/// implied by the enclosure precision.
pub fn bounds(e: &Enclosure, prec: usize) -> (String, String) {
    let d = significant_digits(prec);
    (to_scientific(e.lo(), d, Rounding::Down), to_scientific(e.hi(), d, Rounding::Up))
}

/// Upper decimal bound of a non-negative rational.
pub fn rational_up(r: &Rational, prec: usize) -> String {
    let e = Enclosure::from_rational(r, prec + 8);
    to_scientific(e.hi(), significant_digits(prec), Rounding::Up)
}

/// One row of a convergence table. Field order is the serialised key order.
#[derive(Debug, Serialize)]
pub struct SeriesRow {
    pub spec: String,
    pub k: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub value_lo: String,
    pub value_hi: String,
    pub tail_bound: String,
    pub limit_lo: String,
    pub limit_hi: String,
    pub gap_lo: String,
    pub gap_hi: String,
}

impl SeriesRow {
    pub fn new(r: &SeriesResult, prec: usize) -> Self {
        let (value_lo, value_hi) = bounds(&r.value, prec);
        let (limit_lo, limit_hi) = bounds(&r.limit, prec);
        let (gap_lo, gap_hi) = bounds(&r.gap, prec);
        SeriesRow {
            spec: r.spec.to_string(),
            k: r.k,
            n: r.n_max,
            value_lo,
            value_hi,
            tail_bound: rational_up(&r.tail_bound, prec),
            limit_lo,
            limit_hi,
            gap_lo,
            gap_hi,
        }
    }
}

/// Serialises `doc` as JSON, `rows` as CSV, or returns `text`.
pub fn render<D: Serialize, R: Serialize>(format: Format, doc: &D, rows: &[R], text: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("reports serialise");
            s.push('\n');
            s
        }
        Format::Csv => csv_rows(rows),
        Format::Text => text(),
    }
}

pub fn csv_rows<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialise");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

/// Left-aligned text table.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
