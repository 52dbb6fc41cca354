use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A computed number with its uncertainty and the method that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub error_estimate: f64,
    pub method: String,
}

impl Quantity {
    pub fn exact(value: f64, method: &str) -> Self {
        Self { value, error_estimate: 0.0, method: method.to_string() }
    }

    pub fn estimate(value: f64, error_estimate: f64, method: &str) -> Self {
        Self { value, error_estimate, method: method.to_string() }
    }
}

/// Result of one subcommand: the canonical JSON body plus its fixed-column
/// CSV projection.
pub struct Outcome {
    pub body: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub pass: bool,
}

pub fn write_outcome(outcome: &Outcome, format: Format, out: Option<&Path>) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &outcome.body)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&outcome.csv_header)?;
            for row in &outcome.csv_rows {
                w.write_record(row)?;
            }
            w.flush()?;
            return Ok(());
        }
    }
    sink.flush()
}

/// Shortest round-trip decimal, switching to exponent notation for very
/// small or large magnitudes.
pub fn cell(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
