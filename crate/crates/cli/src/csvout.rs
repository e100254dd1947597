use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// Leading `#` comment lines of every CSV.
pub struct Provenance<'a> {
    pub config_hash: &'a str,
    pub case: &'a str,
    pub units: &'a str,
}

/// Shortest round-trip form, with `-0` written as `0`; empty cell for a
/// missing value.
pub fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{:e}", if x == 0.0 { 0.0 } else { x }))
}

pub fn write_csv(path: &Path, prov: &Provenance<'_>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "# ncqosc {}", ncqosc_core::VERSION).map_err(io)?;
    writeln!(out, "# config-sha256 {}", prov.config_hash).map_err(io)?;
    writeln!(out, "# case {}", prov.case).map_err(io)?;
    writeln!(out, "# units {}", prov.units).map_err(io)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    let csv_err = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush().map_err(io)
}
