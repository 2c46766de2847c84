//! CSV emission. Floats carry 17 significant digits so that parsing the
//! output reproduces the in-memory values exactly.

use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => f.write_str(&format_float(*v)),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// `{:.16e}` with `nan`, `inf` and `-inf` spelled out.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Inverse of [`format_float`].
pub fn parse_float(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

/// A header plus rows, all of the header's width.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Result<Self> {
        let header: Vec<String> = header.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, h) in header.iter().enumerate() {
            if header[..i].contains(h) {
                return Err(Error::Validation(format!("duplicate column `{h}`")));
            }
        }
        Ok(Table { header, rows: Vec::new() })
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Validation(format!("row has {} fields, header has {}", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_to<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_string))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Writes the table to `path`, creating or truncating it.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        self.write_to(std::io::BufWriter::new(file)).map_err(|source| Error::Csv { path: path.to_path_buf(), source })
    }
}

/// Reads a CSV file back as header and raw string records.
pub fn read_file(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

pub const SPECTRUM_SCHEMA: [&str; 2] = ["omega", "S"];
pub const COOLING_SCHEMA: [&str; 9] =
    ["kappa", "delta2p", "A_minus", "A_plus", "Gamma_opt", "n_q", "n_c", "n_f", "flag"];
pub const REDUCTION_SCHEMA: [&str; 10] =
    ["kappa", "kappa3", "J", "delta2p", "eta", "Omega_eff", "kappa_eff", "Delta_eff", "stable", "margin"];
pub const ORACLE_SCHEMA: [&str; 6] = ["kappa", "Omega_m", "n_f_formula", "n_lyapunov", "rel_dev", "stable"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-0.25), "-2.5000000000000000e-1");
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        for v in [0.1, 1.0 / 3.0, f64::MIN_POSITIVE, f64::MAX, -0.0, 5e-324] {
            assert_eq!(parse_float(&format_float(v)).unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn header_only_and_lf() {
        let t = Table::new(&SPECTRUM_SCHEMA).unwrap();
        assert_eq!(t.to_csv_string(), "omega,S\n");
        let mut t = Table::new(&["a", "flag"]).unwrap();
        t.push(vec![f64::NAN.into(), "not_cooling".into()]).unwrap();
        t.push(vec![1.0.into(), "".into()]).unwrap();
        assert_eq!(t.to_csv_string(), "a,flag\nnan,not_cooling\n1.0000000000000000e0,\n");
    }

    #[test]
    fn schema_checks() {
        assert!(Table::new(&["a", "b", "a"]).is_err());
        let mut t = Table::new(&["a"]).unwrap();
        assert!(t.push(vec![]).is_err());
    }

    #[test]
    fn io_errors_name_the_path() {
        let t = Table::new(&["a"]).unwrap();
        let err = t.write_file(Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"), "{err}");
    }
}
