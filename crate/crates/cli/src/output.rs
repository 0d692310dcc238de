//! JSON documents and CSV tables written to standard output.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
}

/// Numeric table with a header row.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Flag(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

/// Twelve significant digits, trailing zeros kept; exponent form outside `[1e-5, 1e12)`.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-5..12).contains(&exp) {
        let (mantissa, _) = sci.split_once('e').unwrap();
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        format!("{:.*}", (11 - exp) as usize, v)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Real(v) => format_sig12(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(b) => if *b { "1" } else { "0" }.to_string(),
            Cell::Missing => String::new(),
        }
    }
}

pub fn write_csv(out: &mut impl Write, table: &Table) -> io::Result<()> {
    writeln!(out, "{}", table.header.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_json(out: &mut impl Write, record: &OutputRecord) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, record)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(0.922), "0.922000000000");
        assert_eq!(format_sig12(1.0), "1.00000000000");
        assert_eq!(format_sig12(0.0), "0.00000000000");
        assert_eq!(format_sig12(123.456), "123.456000000");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(0.00012345), "0.000123450000000");
        assert_eq!(format_sig12(1e-20), "1.00000000000e-20");
        assert_eq!(format_sig12(-0.5), "-0.500000000000");
        assert_eq!(format_sig12(0.99999999999999), "1.00000000000");
    }

    #[test]
    fn csv_layout() {
        let table = Table {
            header: vec!["pi", "coverage", "n"],
            rows: vec![vec![0.25.into(), Cell::Missing, 7u64.into()]],
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &table).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "pi,coverage,n\n0.250000000000,,7\n"
        );
    }
}
