//! CSV tables with unit-labelled headers.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 12 significant digits
            Cell::Num(v) => format!("{v:.11e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// `columns` are (quantity, unit) pairs; the header reads `quantity [unit]`.
    pub fn new(columns: &[(&str, &str)]) -> Table {
        Table {
            headers: columns.iter().map(|(q, u)| format!("{q} [{u}]")).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::Io(e.to_string());
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))
    }

    /// Writes to `path`, or to stdout without one.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => {
                let f = std::fs::File::create(p)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                self.write_to(std::io::BufWriter::new(f))
            }
            None => self.write_to(std::io::stdout().lock()),
        }
    }
}
