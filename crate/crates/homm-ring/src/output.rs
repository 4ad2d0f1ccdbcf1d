//! Tabular dataset emission as CSV or JSON.
//!
//! Floats carry 15 significant digits: fixed notation for decimal exponents
//! in `[-5, 15)`, scientific otherwise. CSV uses `,` and LF line endings; JSON
//! is an array of objects keyed by the CSV header.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::str::FromStr;

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

/// Formats `x` with 15 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    if x == 0.0 {
        return "0.00000000000000".to_owned();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent in scientific formatting");
    if (-5..15).contains(&exp) {
        format!("{x:.prec$}", prec = (14 - exp) as usize)
    } else {
        sci
    }
}

/// A header plus rows of equal width.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push<I, C>(&mut self, row: I)
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        let row: Vec<Cell> = row.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column `name` as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[idx] {
                    Cell::Int(n) => n as f64,
                    Cell::Float(x) => x,
                })
                .collect(),
        )
    }

    pub fn write<W: Write>(&self, format: Format, out: &mut W) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let mut line = self.columns.join(",");
        line.push('\n');
        out.write_all(line.as_bytes())?;
        for row in &self.rows {
            line.clear();
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                match *cell {
                    Cell::Int(n) => write!(line, "{n}").unwrap(),
                    Cell::Float(x) => line.push_str(&format_float(x)),
                }
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    fn write_json<W: Write>(&self, out: &mut W) -> io::Result<()> {
        if self.rows.is_empty() {
            return out.write_all(b"[]\n");
        }
        out.write_all(b"[\n")?;
        let mut line = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            line.clear();
            line.push('{');
            for (i, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    line.push(',');
                }
                write!(line, "\"{name}\":").unwrap();
                match *cell {
                    Cell::Int(n) => write!(line, "{n}").unwrap(),
                    Cell::Float(x) if x.is_finite() => line.push_str(&format_float(x)),
                    Cell::Float(_) => line.push_str("null"),
                }
            }
            line.push('}');
            if r + 1 < self.rows.len() {
                line.push(',');
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.write_all(b"]\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(format_float(1.0), "1.00000000000000");
        assert_eq!(format_float(0.5), "0.500000000000000");
        assert_eq!(format_float(-0.0), "0.00000000000000");
        assert_eq!(format_float(std::f64::consts::TAU), "6.28318530717959");
        assert_eq!(format_float(0.722734247813416), "0.722734247813416");
        assert_eq!(format_float(1.5e-5), "0.0000150000000000000");
        assert_eq!(format_float(1e-20), "1.00000000000000e-20");
        assert_eq!(format_float(123456789012345.0), "123456789012345");
        assert_eq!(format_float(1e15), "1.00000000000000e15");
        // rounding that carries into the next decade
        assert_eq!(format_float(9.9999999999999995), "10.0000000000000");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_and_json_layout() {
        let mut t = Table::new(&["m", "re"]);
        t.push([Cell::Int(0), Cell::Float(0.25)]);
        t.push([Cell::Int(1), Cell::Float(f64::NAN)]);
        let mut csv = Vec::new();
        t.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "m,re\n0,0.250000000000000\n1,NaN\n");
        let mut json = Vec::new();
        t.write(Format::Json, &mut json).unwrap();
        assert_eq!(
            String::from_utf8(json).unwrap(),
            "[\n{\"m\":0,\"re\":0.250000000000000},\n{\"m\":1,\"re\":null}\n]\n"
        );
        let mut empty = Vec::new();
        Table::new(&["a"]).write(Format::Json, &mut empty).unwrap();
        assert_eq!(empty, b"[]\n");
    }
}
