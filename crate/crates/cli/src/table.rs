//! CSV output. Every table starts with a `schema_version` column.

use crate::error::CliError;
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        let mut header = vec!["schema_version".to_string()];
        header.extend(columns.iter().map(|c| c.to_string()));
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len() + 1, self.header.len(), "row width");
        let mut row = vec![SCHEMA_VERSION.to_string()];
        row.extend(cells);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// A number as a CSV cell; non-finite values become tagged strings.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "undefined".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:e}")
    }
}

/// Cell for a fallible value: the number, or `error:` and the message.
pub fn cell(x: &Result<f64, String>) -> String {
    match x {
        Ok(v) => num(*v),
        Err(e) => format!("error:{e}"),
    }
}
