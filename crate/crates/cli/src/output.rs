//! CSV/JSON input and output.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use ghzloc::{BlochVector, Matrix};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::curves::Table;
use crate::CliError;

/// Significant digits of every emitted number.
const DIGITS: usize = 15;

/// `x` with 15 significant digits, '.' as decimal separator, trailing zeros
/// trimmed; scientific notation outside `[1e-5, 1e15)`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{:.*e}", DIGITS - 1, x);
    }
    let decimals = (DIGITS as i32 - 1 - mag).max(1) as usize;
    let s = format!("{x:.decimals$}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

pub fn write_csv(w: impl Write, table: &Table) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(&table.header)?;
    for row in &table.rows {
        wr.write_record(row.iter().map(|x| fmt_num(*x)))?;
    }
    wr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv_file(path: &Path, table: &Table) -> Result<(), CliError> {
    let file = File::create(path).map_err(|source| io_err(path, source))?;
    write_csv(BufWriter::new(file), table)
}

pub fn write_json_file(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let file = File::create(path).map_err(|source| io_err(path, source))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| json_err(path, source))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|source| io_err(path, source))
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn json_err(path: &Path, source: serde_json::Error) -> CliError {
    CliError::Json {
        path: path.to_path_buf(),
        source,
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let file = File::open(path).map_err(|source| io_err(path, source))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| json_err(path, source))
}

/// `{"dim": n, "matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Deserialize)]
struct MatrixFile {
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

pub fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    let f: MatrixFile = read_json(path)?;
    if f.matrix.len() != f.dim || f.matrix.iter().any(|r| r.len() != f.dim) {
        return Err(CliError::Input(format!(
            "{}: \"matrix\" is not {1}x{1} as declared by \"dim\"",
            path.display(),
            f.dim
        )));
    }
    let rows: Vec<Vec<Complex<f64>>> = f
        .matrix
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex::new(*re, *im)).collect())
        .collect();
    Ok(Matrix::from_rows(&rows)?)
}

/// `[[[x, y, z], [x, y, z], [x, y, z]], ...]`.
pub fn read_settings(path: &Path) -> Result<Vec<[BlochVector; 3]>, CliError> {
    let raw: Vec<[[f64; 3]; 3]> = read_json(path)?;
    if raw.is_empty() {
        return Err(CliError::Input(format!("{}: no settings", path.display())));
    }
    Ok(raw
        .iter()
        .map(|t| t.map(|[x, y, z]| BlochVector::new(x, y, z)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_fifteen_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.0");
        assert_eq!(fmt_num(0.375), "0.375");
        assert_eq!(fmt_num(3f64.sqrt() / 6.0), "0.288675134594813");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(123.456), "123.456");
        assert_eq!(fmt_num(1e-7), "1.00000000000000e-7");
        assert_eq!(fmt_num(0.0), "0.0");
    }

    #[test]
    fn csv_round_trip() {
        let t = Table {
            header: vec!["param", "p", "q"],
            rows: vec![vec![0.0, 0.1, 0.2], vec![1.0, 1.0 / 3.0, -0.5]],
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &t).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "param,p,q\n0.0,0.1,0.2\n1.0,0.333333333333333,-0.5\n");
    }
}
