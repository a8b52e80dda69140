use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(twoloop::Error::NonFinite(format!("{bad} in output table")).into());
        }
        let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    if has_null_number(&v) {
        bail!(twoloop::Error::NonFinite("report contains a non-finite number".into()));
    }
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

// serde_json writes NaN and ±∞ as null
fn has_null_number(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Null => true,
        serde_json::Value::Array(a) => a.iter().any(has_null_number),
        serde_json::Value::Object(m) => m.values().any(has_null_number),
        _ => false,
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut o = io::stdout().lock();
            o.write_all(text.as_bytes())?;
            Ok(o.flush()?)
        }
    }
}
