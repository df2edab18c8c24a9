use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use capamp_core::thresholds::SweepGrid;
use serde_json::Value;

use crate::Failure;

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot write {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("write failed: {e}"))
}

/// Pretty JSON with lexicographically ordered keys.
pub fn emit_json(value: &Value, path: Option<&Path>) -> Result<(), Failure> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io_failure)?;
    writeln!(w).map_err(io_failure)?;
    w.flush().map_err(io_failure)
}

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per cell in axis1-major order; the `case` column appears only
/// for depolarizing sweeps.
pub fn emit_csv(grid: &SweepGrid, path: Option<&Path>) -> Result<(), Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink(path)?);
    let mut header = vec![grid.axis1.name.as_str(), grid.axis2.name.as_str(), "margin"];
    if grid.cases().is_some() {
        header.push("case");
    }
    w.write_record(&header).map_err(io_failure)?;
    for row in grid.rows() {
        let mut rec = vec![fmt17(row.axis1), fmt17(row.axis2), fmt17(row.margin)];
        if let Some(c) = row.case {
            rec.push(c.to_string());
        }
        w.write_record(&rec).map_err(io_failure)?;
    }
    w.flush().map_err(io_failure)
}
