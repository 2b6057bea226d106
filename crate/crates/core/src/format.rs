//! Number formatting and the `key = value` text format shared by schema,
//! lookup and metadata files.

use crate::error::{Error, Result};

/// Formats a float for delimited output.
///
/// Magnitudes below 1e-3 use scientific notation. Both branches print the
/// shortest representation that parses back to the same bits.
pub fn fmt_num(x: f64) -> String {
    if x != 0.0 && x.is_finite() && x.abs() < 1e-3 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped. Returns `(line_number, key, value)` triples in file order.
pub fn parse_kv(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((idx + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
