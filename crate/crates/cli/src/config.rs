//! Flat key–value run configuration, merged from an optional config file and
//! command-line flags (flags win).

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistoryKind {
    Constant,
    Polynomial,
}

#[derive(Debug, Clone)]
pub struct RunSettings {
    pub system: Option<String>,
    pub params: HashMap<String, f64>,
    pub tau: Option<f64>,
    pub history_kind: HistoryKind,
    pub history_values: Option<String>,
    pub t_end: f64,
    pub steps_per_delay: usize,
    pub step: f64,
    pub record_every: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub paper_literal: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            system: None,
            params: HashMap::new(),
            tau: None,
            history_kind: HistoryKind::Constant,
            history_values: None,
            t_end: 100.0,
            steps_per_delay: 100,
            step: 0.01,
            record_every: 1,
            seed: 42,
            out: None,
            paper_literal: false,
        }
    }
}

impl RunSettings {
    /// Reads `key = value` lines; `#` starts a comment, blank lines are
    /// skipped. Unknown keys are an input-file error.
    pub fn apply_config_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Malformed(format!("{}:{}: expected key = value", path.display(), lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            self.apply_key(key, value)
                .map_err(|e| CliError::Malformed(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        }
        Ok(())
    }

    fn apply_key(&mut self, key: &str, value: &str) -> Result<(), String> {
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
        match key {
            "system" => self.system = Some(value.to_string()),
            "tau" => self.tau = Some(parse_f64(value)?),
            "t_end" => self.t_end = parse_f64(value)?,
            "step" => self.step = parse_f64(value)?,
            "steps_per_delay" => {
                self.steps_per_delay = value.parse().map_err(|_| format!("`{value}` is not a count"))?
            }
            "record_every" => {
                self.record_every = value.parse().map_err(|_| format!("`{value}` is not a count"))?
            }
            "seed" => self.seed = value.parse().map_err(|_| format!("`{value}` is not a seed"))?,
            "out" => self.out = Some(PathBuf::from(value)),
            "history.kind" => {
                self.history_kind = match value {
                    "constant" => HistoryKind::Constant,
                    "polynomial" => HistoryKind::Polynomial,
                    other => return Err(format!("unknown history kind `{other}`")),
                }
            }
            "history.values" => self.history_values = Some(value.to_string()),
            _ => {
                if let Some(name) = key.strip_prefix("param.") {
                    self.params.insert(name.to_string(), parse_f64(value)?);
                } else {
                    return Err(format!("unknown key `{key}`"));
                }
            }
        }
        Ok(())
    }

    /// Builds the history function text into per-coordinate rows.
    /// Constant: `v1,v2,...`; polynomial: rows of ascending coefficients
    /// separated by `;`, e.g. `1 0.5; 0; 2 -1 0.3`.
    pub fn parse_history(&self, dim: usize, fallback: &[f64]) -> Result<(HistoryKind, Vec<Vec<f64>>), CliError> {
        let text = match &self.history_values {
            None => {
                return Ok((HistoryKind::Constant, vec![fallback.to_vec()]));
            }
            Some(t) => t,
        };
        let rows: Vec<Vec<f64>> = match self.history_kind {
            HistoryKind::Constant => {
                let vals = text
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|_| CliError::Invalid(format!("history.values `{text}` is not a number list")))?;
                vec![vals]
            }
            HistoryKind::Polynomial => text
                .split(';')
                .map(|row| {
                    row.split_whitespace()
                        .map(|v| v.parse::<f64>())
                        .collect::<Result<Vec<f64>, _>>()
                        .map_err(|_| CliError::Invalid(format!("history row `{row}` is not a coefficient list")))
                })
                .collect::<Result<Vec<Vec<f64>>, CliError>>()?,
        };
        let got = match self.history_kind {
            HistoryKind::Constant => rows[0].len(),
            HistoryKind::Polynomial => rows.len(),
        };
        if got != dim {
            return Err(CliError::Invalid(format!(
                "history has {got} coordinates, system needs {dim}"
            )));
        }
        Ok((self.history_kind, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_keys_and_rejects_unknown() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# demo\nsystem = example-4-5\nparam.a1 = 0.7\ntau = 0.25  # delay\nt_end= 10").unwrap();
        let mut s = RunSettings::default();
        s.apply_config_file(f.path()).unwrap();
        assert_eq!(s.system.as_deref(), Some("example-4-5"));
        assert_eq!(s.params["a1"], 0.7);
        assert_eq!(s.tau, Some(0.25));
        assert_eq!(s.t_end, 10.0);

        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "bogus = 1").unwrap();
        let mut s = RunSettings::default();
        assert!(matches!(s.apply_config_file(f.path()), Err(CliError::Malformed(_))));
    }

    #[test]
    fn history_parsing() {
        let mut s = RunSettings::default();
        s.history_values = Some("0.5, 0.5, 1.0".into());
        let (_, rows) = s.parse_history(3, &[0.0; 3]).unwrap();
        assert_eq!(rows, vec![vec![0.5, 0.5, 1.0]]);

        s.history_kind = HistoryKind::Polynomial;
        s.history_values = Some("1 0.5; 0; 2 -1 0.25".into());
        let (_, rows) = s.parse_history(3, &[0.0; 3]).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2], vec![2.0, -1.0, 0.25]);

        s.history_values = Some("1; 2".into());
        assert!(s.parse_history(3, &[0.0; 3]).is_err());
    }
}
