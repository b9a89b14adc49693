//! CSV and JSON output.
//!
//! CSV columns: axis value, one `<method>` total per requested method, the
//! per-mode `<method>_mode<p>` columns, then `ratio`, `boltzmann`,
//! `temperature`, `gap`, `quadrature_error`, `error`. Reals are written
//! with 17 significant digits; absent values are empty fields.

use std::fmt::Write as _;

use crate::config::Format;
use crate::sweep::SweepResult;

fn real(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.16e}"))
}

fn quoted(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV text, LF line endings, header always present.
pub fn to_csv(result: &SweepResult) -> String {
    let meta = &result.metadata;
    let mut header = vec![meta.axis.clone()];
    header.extend(meta.methods.iter().cloned());
    for m in &meta.methods {
        header.extend((1..=meta.n_modes).map(|p| format!("{m}_mode{p}")));
    }
    header.extend(["ratio", "boltzmann", "temperature", "gap", "quadrature_error", "error"].map(String::from));

    let mut out = header.join(",");
    out.push('\n');
    for row in &result.rows {
        let mut fields = vec![real(Some(row.axis_value))];
        let value_of = |m: &str| row.results.iter().find(|r| r.method == *m);
        for m in &meta.methods {
            fields.push(real(value_of(m).map(|r| r.total)));
        }
        for m in &meta.methods {
            for p in 0..meta.n_modes {
                fields.push(real(value_of(m).and_then(|r| r.per_mode.get(p).copied())));
            }
        }
        for x in [row.ratio, row.boltzmann, row.temperature, row.gap, row.quadrature_error] {
            fields.push(real(x));
        }
        fields.push(row.error.as_deref().map(quoted).unwrap_or_default());
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

/// Pretty-printed JSON with fields in declaration order and a final newline.
pub fn to_json(result: &SweepResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("sweep results serialize");
    s.push('\n');
    s
}

/// Serializes in the requested format.
pub fn emit(result: &SweepResult, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => to_csv(result),
        Format::Json => to_json(result),
    }
    .into_bytes()
}
