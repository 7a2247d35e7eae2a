//! Experiment specification and the flat `key = value` config file format.

use std::path::PathBuf;

use hetrank::{Mode, SystemConfig};

use crate::CliError;

/// A sweep over user counts, traffic rates and modes.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub config: SystemConfig,
    /// Inclusive user-count range.
    pub users: (usize, usize),
    pub lambdas: Vec<f64>,
    pub modes: Vec<Mode>,
    /// Repetitions per sweep point; repetition `k` runs with `seed + k`.
    pub reps: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let config = SystemConfig::default();
        ExperimentSpec {
            users: (1, 50),
            lambdas: vec![config.traffic_rate],
            modes: vec![Mode::Heterogeneous, Mode::Hybrid],
            reps: 1,
            out: None,
            config,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        self.config
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.users.0 < 1 || self.users.0 > self.users.1 {
            return Err(CliError::Config(format!(
                "user range {}..{} must satisfy 1 <= a <= b",
                self.users.0, self.users.1
            )));
        }
        if self.lambdas.is_empty() {
            return Err(CliError::Config("lambda list must not be empty".into()));
        }
        if self.modes.is_empty() {
            return Err(CliError::Config("mode list must not be empty".into()));
        }
        if self.reps < 1 {
            return Err(CliError::Config("reps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Inclusive `a..b` range, or a single count `n`.
pub fn parse_users(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("cannot parse user range '{text}' (expected a..b)"));
    let range = if let Some((a, b)) = text.split_once("..") {
        (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        )
    } else {
        let n = text.trim().parse().map_err(|_| bad())?;
        (n, n)
    };
    Ok(range)
}

/// Comma-separated traffic rates, sorted ascending.
pub fn parse_lambdas(text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let value: f64 = part.trim().parse().map_err(|_| {
            CliError::Config(format!("cannot parse traffic rate '{}'", part.trim()))
        })?;
        let rate_ok = value >= 0.0 && value.is_finite();
        if !rate_ok {
            return Err(CliError::Config(format!(
                "traffic rate {value} must be >= 0"
            )));
        }
        values.push(value);
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(values)
}

/// `hybrid`, `het` or `both`; `both` expands in CSV sort order.
pub fn parse_modes(text: &str) -> Result<Vec<Mode>, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "both" => Ok(vec![Mode::Heterogeneous, Mode::Hybrid]),
        other => other
            .parse::<Mode>()
            .map(|m| vec![m])
            .map_err(CliError::Config),
    }
}

/// Applies a config file to a spec. Lines are `key = value`; `#` starts a
/// comment. Keys are the scenario fields (`num_rbs`, `num_antennas`,
/// `se_analog`, `se_digital`, `se_hybrid`, `traffic_rate`, `buffer_capacity`,
/// `ewma_gamma`, `num_slots`, `warmup_slots`, `seed`, `mode`) plus the sweep
/// fields (`users`, `lambdas`, `modes`, `reps`, `out`).
pub fn apply_config_file(spec: &mut ExperimentSpec, text: &str) -> Result<(), CliError> {
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("config line {line_no}: expected 'key = value'"))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad_number = || {
            CliError::Config(format!(
                "config line {line_no}: cannot parse '{value}' for '{key}'"
            ))
        };
        match key {
            "num_rbs" => spec.config.num_rbs = value.parse().map_err(|_| bad_number())?,
            "num_antennas" => spec.config.num_antennas = value.parse().map_err(|_| bad_number())?,
            "se_analog" => spec.config.se_analog = value.parse().map_err(|_| bad_number())?,
            "se_digital" => spec.config.se_digital = value.parse().map_err(|_| bad_number())?,
            "se_hybrid" => spec.config.se_hybrid = value.parse().map_err(|_| bad_number())?,
            "traffic_rate" => {
                spec.config.traffic_rate = value.parse().map_err(|_| bad_number())?;
                spec.lambdas = vec![spec.config.traffic_rate];
            }
            "buffer_capacity" => {
                spec.config.buffer_capacity = value.parse().map_err(|_| bad_number())?
            }
            "ewma_gamma" => spec.config.ewma_gamma = value.parse().map_err(|_| bad_number())?,
            "num_slots" => spec.config.num_slots = value.parse().map_err(|_| bad_number())?,
            "warmup_slots" => spec.config.warmup_slots = value.parse().map_err(|_| bad_number())?,
            "seed" => spec.config.seed = value.parse().map_err(|_| bad_number())?,
            "mode" => {
                spec.config.mode = value.parse::<Mode>().map_err(CliError::Config)?;
                spec.modes = vec![spec.config.mode];
            }
            "users" => spec.users = parse_users(value)?,
            "lambdas" => spec.lambdas = parse_lambdas(value)?,
            "modes" => spec.modes = parse_modes(value)?,
            "reps" => spec.reps = value.parse().map_err(|_| bad_number())?,
            "out" => spec.out = Some(PathBuf::from(value)),
            _ => {
                return Err(CliError::Config(format!(
                    "config line {line_no}: unknown key '{key}'"
                )))
            }
        }
    }
    Ok(())
}
