use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use crate::error::CliError;

/// Twelve significant digits, fixed layout so identical runs give identical bytes.
pub fn num(x: f64) -> String {
    // avoid printing -0
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn sink(out: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn csv_writer(out: Option<&PathBuf>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    Ok(csv::WriterBuilder::new()
        .flexible(false)
        .from_writer(sink(out)?))
}
