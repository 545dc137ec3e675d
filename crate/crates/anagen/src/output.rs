//! Report files and the human summary.

use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;
use crate::suite::{Outcome, SUITES};

/// Writes `rows` as a JSON array of flat records or as CSV with a header.
pub fn write_rows<T: Serialize>(rows: &[T], format: Format, mut out: impl Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            out.write_all(b"\n").map_err(|e| CliError::io("<output>", e))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush().map_err(|e| CliError::io("<output>", e))?;
        }
    }
    Ok(())
}

/// Rows rendered to a string.
pub fn render_rows<T: Serialize>(rows: &[T], format: Format) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_rows(rows, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("serializers emit UTF-8"))
}

/// Whether to color output for a stream: never when `NO_COLOR` is set to a
/// non-empty value or the stream is not a terminal.
pub fn use_color(is_terminal: bool) -> bool {
    is_terminal && std::env::var_os("NO_COLOR").map_or(true, |v| v.is_empty())
}

fn paint(text: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

/// Per-suite pass counts, every failing check and the skipped samples.
pub fn summary(outcome: &Outcome, color: bool) -> String {
    let mut s = String::new();
    for suite in SUITES {
        let rows: Vec<_> = outcome.records.iter().filter(|r| r.suite == suite).collect();
        let passed = rows.iter().filter(|r| r.passed).count();
        let tag = if passed == rows.len() { paint("PASS", "32", color) } else { paint("FAIL", "31", color) };
        s.push_str(&format!("{tag} {suite:<13} {passed:>4}/{:<4}\n", rows.len()));
    }
    let failures: Vec<_> = outcome.failures().collect();
    if !failures.is_empty() {
        s.push_str("failed checks:\n");
        for r in &failures {
            s.push_str(&format!(
                "  {}.{} [{}] residual {:.3e} vs tolerance {:.3e} ({})\n",
                r.suite, r.name, r.anchor, r.residual, r.tolerance, r.inputs
            ));
        }
    }
    if !outcome.skipped.is_empty() {
        s.push_str(&format!("skipped {} sample points:\n", outcome.skipped.len()));
        for k in &outcome.skipped {
            s.push_str(&format!("  {k}\n"));
        }
    }
    let verdict = if failures.is_empty() { paint("all checks passed", "32", color) } else { paint("checks failed", "31", color) };
    s.push_str(&format!("verify: {} checks, {} failed: {verdict}\n", outcome.records.len(), failures.len()));
    s
}
