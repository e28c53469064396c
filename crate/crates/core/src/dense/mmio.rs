//! Matrix Market "array real general" reader and writer.
//!
//! Values are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use super::Matrix;
use crate::error::{LuError, Result};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(LuError::Parse(msg.into()))
}

/// Parses a dense Matrix Market file from any reader.
pub fn read_from<R: Read>(reader: R) -> Result<Matrix> {
    let mut lines = BufReader::new(reader).lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return parse_err("empty input"),
    };
    let words: Vec<String> = header.split_whitespace().map(|w| w.to_ascii_lowercase()).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return parse_err(format!("bad header line: {header}"));
    }
    if words[2] != "array" || words[3] != "real" || words[4] != "general" {
        return parse_err(format!(
            "only 'array real general' is supported, found '{} {} {}'",
            words[2], words[3], words[4]
        ));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut data = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        match size {
            None => {
                let dims: Vec<&str> = t.split_whitespace().collect();
                if dims.len() != 2 {
                    return parse_err(format!("bad size line: {t}"));
                }
                let rows = dims[0].parse().map_err(|_| LuError::Parse(format!("bad row count: {}", dims[0])))?;
                let cols = dims[1].parse().map_err(|_| LuError::Parse(format!("bad column count: {}", dims[1])))?;
                size = Some((rows, cols));
                data.reserve(rows * cols);
            }
            Some(_) => {
                for tok in t.split_whitespace() {
                    let v: f64 = tok.parse().map_err(|_| LuError::Parse(format!("bad value: {tok}")))?;
                    data.push(v);
                }
            }
        }
    }
    let (rows, cols) = match size {
        Some(s) => s,
        None => return parse_err("missing size line"),
    };
    if data.len() != rows * cols {
        return parse_err(format!("expected {} values, found {}", rows * cols, data.len()));
    }
    Matrix::from_col_major(rows, cols, data)
}

pub fn read_path(path: impl AsRef<Path>) -> Result<Matrix> {
    read_from(std::fs::File::open(path)?)
}

pub fn write_to<W: Write>(m: &Matrix, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for x in m.data() {
        writeln!(w, "{x:.16e}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_path(m: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_to(m, std::io::BufWriter::new(f))
}
