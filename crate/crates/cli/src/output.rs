//! CSV and JSON emission with a fixed on-disk number format, so identical
//! configurations produce byte-identical artifacts.

use serde::Serialize;
use std::io::{self, Write};

/// JSON formatter carrying 17 significant digits for every float
/// (`{:.16e}`), the round-trip-exact width for f64. Non-finite values
/// serialize as `null`.
pub struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes any document as JSON with the fixed float format, plus a
/// trailing newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, doc: &T) -> anyhow::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigitFormatter);
    doc.serialize(&mut ser)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// One CSV/JSON cell.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    U64(u64),
    F64(f64),
    Str(String),
    Empty(()),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Cell {
        Cell::U64(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::F64(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Str(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Str(v.to_string())
    }
}

/// A rectangular result set with named columns; the common shape of every
/// subcommand's output.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Table {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> anyhow::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    write!(out, ",")?;
                }
                first = false;
                match cell {
                    Cell::U64(v) => write!(out, "{v}")?,
                    Cell::F64(v) => write!(out, "{v}")?,
                    Cell::Str(s) => write!(out, "{s}")?,
                    Cell::Empty(()) => {}
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// JSON form: `{"schema": 1, "columns": [...], "rows": [{col: cell}]}`.
    pub fn write_json<W: Write>(&self, out: W) -> anyhow::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: u32,
            columns: &'a [&'static str],
            rows: Vec<std::collections::BTreeMap<&'static str, &'a Cell>>,
        }
        let rows = self
            .rows
            .iter()
            .map(|r| self.columns.iter().copied().zip(r.iter()).collect())
            .collect();
        write_json(
            out,
            &Doc {
                schema: 1,
                columns: &self.columns,
                rows,
            },
        )
    }
}
