//! CSV and JSON report writing.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use zernike_core::{Result, ZernikeError};

/// CSV text: `#` comment lines, then a header row and one line per record.
pub fn csv_text<T: Serialize>(comments: &[String], rows: &[T]) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str(&csv_body(rows)?);
    Ok(out)
}

/// Header and records only.
pub fn csv_body<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| ZernikeError::param(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| ZernikeError::param(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Strips `#` comment lines.
pub fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(|l| [l, "\n"])
        .collect()
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| ZernikeError::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| ZernikeError::io("<stdout>", e))
        }
    }
}
