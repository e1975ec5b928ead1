// SPDX-License-Identifier: Apache-2.0

//! Number formatting and table writers shared by the subcommands.

use std::io::Write;

use crate::Failure;

/// 17 significant digits in scientific notation; valid as a JSON number.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

fn io(err: csv::Error) -> Failure {
    Failure::Io(err.to_string())
}

/// Header row followed by one record per row.
pub fn write_csv(header: &[&str], rows: &[Vec<Cell>], sink: &mut dyn Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::text)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per row with the header names as keys.
pub fn write_json_lines(header: &[&str], rows: &[Vec<Cell>], sink: &mut dyn Write) -> Result<(), Failure> {
    for row in rows {
        let fields: Vec<String> = header.iter().zip(row).map(|(key, cell)| format!("\"{key}\":{}", cell.text())).collect();
        writeln!(sink, "{{{}}}", fields.join(","))?;
    }
    Ok(())
}
