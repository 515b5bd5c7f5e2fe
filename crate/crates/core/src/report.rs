//! CSV and JSON emission with deterministic formatting.
//!
//! Floats are rendered with 17 significant digits so CSV outputs round-trip
//! losslessly and regression diffs are byte-stable. JSON summaries are flat
//! (one nesting level at most) with alphabetically ordered keys.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// 17-significant-digit rendering: lossless for f64.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a CSV file with a header row and 17-digit floats.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_g17(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

/// Write pretty-printed JSON (stable key order via serde_json's BTreeMap).
pub fn write_json(path: &Path, value: &serde_json::Value) -> io::Result<()> {
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")
}

/// Round-trippable JSON number; falls back to a string for non-finite values.
pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x)
        .map(serde_json::Value::Number)
        .unwrap_or_else(|| serde_json::Value::String(format!("{x}")))
}
