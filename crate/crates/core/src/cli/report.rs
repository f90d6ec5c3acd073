use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Number(f64),
    Count(u64),
    Flag(bool),
}

impl Cell {
    pub fn as_f64(self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(x),
            Cell::Count(n) => Some(n as f64),
            Cell::Flag(_) => None,
        }
    }

    fn csv(self, out: &mut String) {
        match self {
            Cell::Number(x) => write!(out, "{x:.12e}"),
            Cell::Count(n) => write!(out, "{n}"),
            Cell::Flag(b) => write!(out, "{b}"),
        }
        .expect("writing to a String");
    }

    fn json(self, column: &str) -> Result<Value> {
        Ok(match self {
            Cell::Number(x) => Value::Number(Number::from_f64(x).ok_or_else(|| {
                Error::invalid("report", format!("column `{column}` holds non-finite {x}"))
            })?),
            Cell::Count(n) => Value::from(n),
            Cell::Flag(b) => Value::Bool(b),
        })
    }
}

/// One output line: named columns in a fixed order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportRow {
    columns: Vec<(String, Cell)>,
}

impl ReportRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, cell: Cell) -> &mut Self {
        self.columns.push((name.into(), cell));
        self
    }

    pub fn number(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.push(name, Cell::Number(value))
    }

    pub fn flag(&mut self, name: impl Into<String>, value: bool) -> &mut Self {
        self.push(name, Cell::Flag(value))
    }

    pub fn get(&self, name: &str) -> Option<Cell> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, c)| c)
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn cells(&self) -> &[(String, Cell)] {
        &self.columns
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::invalid(
                "format",
                format!("expected csv or json, got `{other}`"),
            )),
        }
    }
}

fn check_columns(rows: &[ReportRow]) -> Result<()> {
    let first = rows.first().ok_or(Error::EmptyReport)?;
    for (i, row) in rows.iter().enumerate().skip(1) {
        if !row.column_names().eq(first.column_names()) {
            return Err(Error::invalid(
                "report",
                format!("row {i} has a different column set from row 0"),
            ));
        }
    }
    Ok(())
}

/// Renders `rows` to a string in the given format.
pub fn render_report(rows: &[ReportRow], format: ReportFormat) -> Result<String> {
    check_columns(rows)?;
    match format {
        ReportFormat::Csv => {
            let mut out = rows[0].column_names().collect::<Vec<_>>().join(",");
            out.push('\n');
            for row in rows {
                for (i, (_, cell)) in row.cells().iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    cell.csv(&mut out);
                }
                out.push('\n');
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let mut array = Vec::with_capacity(rows.len());
            for row in rows {
                let mut object = Map::new();
                for (name, cell) in row.cells() {
                    object.insert(name.clone(), cell.json(name)?);
                }
                array.push(Value::Object(object));
            }
            let mut out = serde_json::to_string_pretty(&Value::Array(array))?;
            out.push('\n');
            Ok(out)
        }
    }
}

pub fn write_report<W: Write>(rows: &[ReportRow], format: ReportFormat, mut out: W) -> Result<()> {
    let text = render_report(rows, format)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| Error::Io {
            context: "writing report".into(),
            source,
        })
}

pub fn emit_report(rows: &[ReportRow], format: ReportFormat, destination: &Path) -> Result<()> {
    let text = render_report(rows, format)?;
    fs::write(destination, text).map_err(|source| Error::Io {
        context: format!("writing {}", destination.display()),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<ReportRow> {
        let mut a = ReportRow::new();
        a.number("E_V_per_m", 300.0)
            .number("omega0_rad_per_s", 6.324_555_320_336_759e9)
            .flag("ok", false);
        let mut b = ReportRow::new();
        b.number("E_V_per_m", 1.0 / 3.0)
            .number("omega0_rad_per_s", -1e-300)
            .flag("ok", true);
        vec![a, b]
    }

    #[test]
    fn csv_shape() {
        let text = render_report(&rows(), ReportFormat::Csv).unwrap();
        assert!(text.ends_with('\n'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "E_V_per_m,omega0_rad_per_s,ok");
        assert_eq!(lines[1], "3.000000000000e2,6.324555320337e9,false");
        // At least nine significant digits survive the text form.
        let v: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let rows = rows();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        emit_report(&rows, ReportFormat::Json, &path).unwrap();
        let parsed: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let array = parsed.as_array().unwrap();
        assert_eq!(array.len(), 2);
        for (row, object) in rows.iter().zip(array) {
            let keys: Vec<&str> = object
                .as_object()
                .unwrap()
                .keys()
                .map(String::as_str)
                .collect();
            assert_eq!(keys, row.column_names().collect::<Vec<_>>());
            for (name, cell) in row.cells() {
                match cell {
                    Cell::Number(x) => {
                        let y = object[name].as_f64().unwrap();
                        assert!((x - y).abs() <= 1e-12 * x.abs());
                    }
                    Cell::Flag(b) => assert_eq!(object[name].as_bool().unwrap(), *b),
                    Cell::Count(n) => assert_eq!(object[name].as_u64().unwrap(), *n),
                }
            }
        }
    }

    #[test]
    fn empty_and_ragged_rejected() {
        assert!(matches!(
            render_report(&[], ReportFormat::Csv),
            Err(Error::EmptyReport)
        ));
        let mut rows = rows();
        rows[1].number("extra", 1.0);
        assert!(render_report(&rows, ReportFormat::Csv).is_err());
    }

    #[test]
    fn non_finite_json_rejected() {
        let mut row = ReportRow::new();
        row.number("x", f64::NAN);
        assert!(render_report(&[row], ReportFormat::Json).is_err());
    }

    #[test]
    fn unwritable_destination() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("r.csv");
        assert!(matches!(
            emit_report(&rows(), ReportFormat::Csv, &path),
            Err(Error::Io { .. })
        ));
    }
}
