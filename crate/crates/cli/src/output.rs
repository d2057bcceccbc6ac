use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use astopo::metrics::BinnedCurve;
use serde::Serialize;

use crate::CliError;

/// The command line as typed, with the program name reduced to `astopo`.
pub fn invocation(argv: &[String]) -> String {
    let mut parts = vec!["astopo".to_string()];
    for a in argv.iter().skip(1) {
        if a.is_empty() || a.chars().any(|c| c.is_whitespace() || c == '"' || c == '\'') {
            parts.push(format!("{a:?}"));
        } else {
            parts.push(a.clone());
        }
    }
    parts.join(" ")
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

pub fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// CSV with a `# <invocation>` first line.
pub fn write_csv<W: Write, R: IntoIterator<Item = Vec<String>>>(
    mut out: W,
    invocation: &str,
    header: &[&str],
    rows: R,
) -> Result<(), CliError> {
    writeln!(out, "# {invocation}")?;
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn cell<T: Display>(x: T) -> String {
    x.to_string()
}

/// Curve CSV: `bin_low,bin_high,value,count`, empty `value` for empty bins.
pub fn write_curve(path: &Path, invocation: &str, curve: &BinnedCurve) -> Result<(), CliError> {
    let rows = curve.points.iter().map(|p| {
        vec![
            cell(p.bin_low),
            cell(p.bin_high),
            p.value.map(cell).unwrap_or_default(),
            cell(p.count),
        ]
    });
    write_csv(create(path)?, invocation, &["bin_low", "bin_high", "value", "count"], rows)
}
