//! CSV and metadata files. Numbers carry 17 significant digits, lines end in
//! `\n`, and every file is assembled in memory and written in one piece.

use std::path::{Path, PathBuf};

use es_riemann::solver::{Grid1D, StepReport};
use es_riemann::SolverError;

use crate::cases::CaseSystem;
use crate::error::CliError;

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>, path: &Path) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.into_error(),
    })
}

/// Writes a header and numeric rows.
pub fn csv_bytes<R>(header: &[&str], rows: R, path: &Path) -> Result<Vec<u8>, CliError>
where
    R: IntoIterator<Item = Vec<f64>>,
{
    let mut w = writer();
    w.write_record(header).map_err(CliError::csv(path))?;
    for row in rows {
        w.write_record(row.iter().map(|&x| format_number(x)))
            .map_err(CliError::csv(path))?;
    }
    finish(w, path)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(CliError::io(path))
}

/// `x,<primitive columns>,S`, one row per cell center.
pub fn solution_csv<S: CaseSystem<N>, const N: usize>(
    grid: &Grid1D<N>,
    system: &S,
    path: &Path,
) -> Result<Vec<u8>, CliError> {
    let mut header = vec!["x"];
    header.extend(S::COLUMNS);
    header.push("S");
    let rows = grid
        .centers()
        .into_iter()
        .zip(grid.states())
        .map(|(x, q)| {
            let mut row = vec![x];
            row.extend(system.to_primitive(q)?);
            row.push(system.entropy_data(q)?.entropy);
            Ok(row)
        })
        .collect::<Result<Vec<_>, SolverError>>()?;
    csv_bytes(&header, rows, path)
}

pub fn emit_solution_csv<S: CaseSystem<N>, const N: usize>(
    grid: &Grid1D<N>,
    system: &S,
    path: &Path,
) -> Result<(), CliError> {
    write_file(path, &solution_csv(grid, system, path)?)
}

pub const AUDIT_COLUMNS: [&str; 5] = ["t", "dt", "total_entropy", "min_production", "max_cell_residual"];

pub fn emit_audit_csv(reports: &[StepReport], path: &Path) -> Result<(), CliError> {
    let rows = reports.iter().map(|r| {
        vec![
            r.t,
            r.dt,
            r.total_entropy,
            r.min_interface_production,
            r.max_cell_residual,
        ]
    });
    write_file(path, &csv_bytes(&AUDIT_COLUMNS, rows, path)?)
}

/// `key = value` lines in the given order.
pub fn emit_metadata(path: &Path, entries: &[(&str, String)]) -> Result<(), CliError> {
    let text: String = entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    write_file(path, text.as_bytes())
}

/// `<path>.meta`
pub fn metadata_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// A solution file read back: the `x` column and every other column by name.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTable {
    pub columns: Vec<String>,
    pub x: Vec<f64>,
    /// `values[c][i]` is column `columns[c]` at row `i`.
    pub values: Vec<Vec<f64>>,
}

impl SolutionTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|c| self.values[c].as_slice())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(CliError::io(path))?;
        Self::parse(&bytes, path)
    }

    pub fn parse(bytes: &[u8], path: &Path) -> Result<Self, CliError> {
        let bad = |message: String| CliError::Format {
            path: path.to_path_buf(),
            message,
        };
        let mut reader = csv::Reader::from_reader(bytes);
        let header = reader.headers().map_err(CliError::csv(path))?.clone();
        if header.get(0) != Some("x") {
            return Err(bad("first column must be `x`".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut x = Vec::new();
        let mut values = vec![Vec::new(); columns.len()];
        for (n, record) in reader.records().enumerate() {
            let record = record.map_err(CliError::csv(path))?;
            let mut fields = record.iter().map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(format!("row {}: `{f}` is not a number", n + 1)))
            });
            x.push(fields.next().ok_or_else(|| bad(format!("row {} is empty", n + 1)))??);
            for column in values.iter_mut() {
                column.push(fields.next().ok_or_else(|| bad(format!("row {} is short", n + 1)))??);
            }
        }
        Ok(Self { columns, x, values })
    }
}
