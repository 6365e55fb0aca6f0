//! Trajectory CSV with a `#`-prefixed metadata block. Values are written
//! with 18 significant digits so a re-read loses nothing that could affect a
//! figure.

use std::io::Write;
use std::path::Path;

use metriplectic::DenseTrajectory;

use crate::CliError;

pub fn format_value(v: f64) -> String {
    format!("{v:.17e}")
}

pub struct CsvMetadata {
    pub lines: Vec<(String, String)>,
}

pub fn write_trajectory(
    path: &Path,
    traj: &DenseTrajectory,
    meta: &CsvMetadata,
    record_every: usize,
) -> Result<(), CliError> {
    let mut out = String::new();
    for (k, v) in &meta.lines {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    let n = traj.dim();
    out.push_str("t");
    for i in 1..=n {
        out.push_str(&format!(",x{i}"));
    }
    out.push('\n');
    let last = traj.knots().len() - 1;
    for (k, (t, x)) in traj.knots().iter().zip(traj.states()).enumerate() {
        if k % record_every != 0 && k != last {
            continue;
        }
        out.push_str(&format_value(*t));
        for v in x {
            out.push(',');
            out.push_str(&format_value(*v));
        }
        out.push('\n');
    }
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(out.as_bytes())
        .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

pub struct CsvData {
    pub columns: Vec<String>,
    /// row-major values, one row per record
    pub rows: Vec<Vec<f64>>,
}

impl CsvData {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvData, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Malformed(format!("{}: no header line", path.display())))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if columns.is_empty() || columns[0] != "t" {
        return Err(CliError::Malformed(format!(
            "{}: header must start with `t`, got `{header}`",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let vals = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|_| CliError::Malformed(format!("{}: row {}: unparseable value", path.display(), i + 2)))?;
        if vals.len() != columns.len() {
            return Err(CliError::Malformed(format!(
                "{}: row {} has {} fields, header has {}",
                path.display(),
                i + 2,
                vals.len(),
                columns.len()
            )));
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(CliError::Malformed(format!("{}: no data rows", path.display())));
    }
    Ok(CsvData { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_format_round_trips() {
        for v in [0.5, -1.0 / 3.0, 1e-17, 123456.789, f64::MIN_POSITIVE] {
            let s = format_value(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }
}
