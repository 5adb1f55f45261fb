//! JSON experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use sbx_core::bath::{BathParams, Scheme};
use sbx_core::model::ModelKind;
use sbx_core::spectrum::ShiftConvention;
use serde::Deserialize;

/// Default cap on the number of grid cells a sweep may evaluate.
pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
    /// 1-based position in the source document, when known.
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError { field: field.to_string(), message: message.into(), line: None, column: None }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "config line {l}, column {c}: {}", self.message),
            _ => write!(f, "config field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Dynamics,
    BoundState,
    CriticalLine,
    EtaMap,
    EnergyScan,
    FidelityScan,
    EntropyScan,
    Boundary,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Dynamics => "dynamics",
            Task::BoundState => "bound_state",
            Task::CriticalLine => "critical_line",
            Task::EtaMap => "eta_map",
            Task::EnergyScan => "energy_scan",
            Task::FidelityScan => "fidelity_scan",
            Task::EntropyScan => "entropy_scan",
            Task::Boundary => "boundary",
        }
    }

    /// Tasks whose cells are `(s, Δ)` families rather than `(α, s, Δ)` points.
    pub fn ignores_alpha(self) -> bool {
        matches!(self, Task::CriticalLine | Task::Boundary)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Rwa,
    Polaron,
}

impl From<Kind> for ModelKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Rwa => ModelKind::Rwa,
            Kind::Polaron => ModelKind::Polaron,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeName {
    Linear,
    #[serde(alias = "logarithmic")]
    Log,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Linear => Scheme::Linear,
            SchemeName::Log => Scheme::Logarithmic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Hamiltonian,
    Flipped,
}

impl From<Convention> for ShiftConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Hamiltonian => ShiftConvention::Hamiltonian,
            Convention::Flipped => ShiftConvention::Flipped,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// A parameter axis: a single value, an explicit list or an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Scalar(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Scalar(v) => vec![*v],
            Axis::List(v) => v.clone(),
            Axis::Range { start, stop, count } => {
                if *count == 1 {
                    return vec![*start];
                }
                let step = (stop - start) / (*count as f64 - 1.0);
                (0..*count)
                    .map(|i| if i + 1 == *count { *stop } else { start + step * i as f64 })
                    .collect()
            }
        }
    }

    fn validate(&self, name: &str) -> Result<(), ConfigError> {
        match self {
            Axis::Scalar(v) if !v.is_finite() => Err(ConfigError::field(name, "must be finite")),
            Axis::List(v) if v.is_empty() => Err(ConfigError::field(name, "list must not be empty")),
            Axis::List(v) if v.iter().any(|x| !x.is_finite()) => {
                Err(ConfigError::field(name, "list entries must be finite"))
            }
            Axis::Range { count: 0, .. } => Err(ConfigError::field(name, "range count must be at least 1")),
            Axis::Range { start, stop, .. } if !(start.is_finite() && stop.is_finite()) => {
                Err(ConfigError::field(name, "range bounds must be finite"))
            }
            Axis::Range { start, stop, .. } if stop < start => {
                Err(ConfigError::field(name, format!("range must be ordered (start {start} > stop {stop})")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// File name or path, relative to the working directory. With `SBX_OUT_DIR`
    /// set only the file name is kept.
    pub path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Csv
}

impl Default for Output {
    fn default() -> Self {
        Output { path: None, format: Format::Csv }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default = "default_kind")]
    pub kind: Kind,
    #[serde(default = "default_alpha")]
    pub alpha: Axis,
    pub s: Axis,
    pub delta: Axis,
    /// Must be 1: all frequencies are ratios to the cutoff.
    #[serde(default = "one")]
    pub omega_c: f64,
    /// Bias of the two-level system; only 0 is supported.
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    /// Spacing of written samples for `dynamics`; a multiple of `dt`.
    #[serde(default = "one")]
    pub output_dt: f64,
    #[serde(default = "default_n_modes")]
    pub n_modes: usize,
    #[serde(default = "default_scheme")]
    pub scheme: SchemeName,
    #[serde(default = "default_dalpha")]
    pub dalpha: f64,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default = "yes")]
    pub detect_jumps: bool,
    #[serde(default = "default_convention")]
    pub shift_convention: Convention,
    #[serde(default = "default_max_cells")]
    pub max_cells: usize,
    #[serde(default)]
    pub output: Output,
}

fn default_kind() -> Kind {
    Kind::Rwa
}
fn default_alpha() -> Axis {
    Axis::Scalar(0.0)
}
fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_dt() -> f64 {
    0.02
}
fn default_t_max() -> f64 {
    4000.0
}
fn default_n_modes() -> usize {
    4000
}
fn default_scheme() -> SchemeName {
    SchemeName::Log
}
fn default_dalpha() -> f64 {
    sbx_core::spectrum::DEFAULT_DALPHA
}
fn default_fd_step() -> f64 {
    sbx_core::spectrum::DEFAULT_FD_STEP
}
fn default_convention() -> Convention {
    Convention::Hamiltonian
}
fn default_max_cells() -> usize {
    DEFAULT_MAX_CELLS
}

/// One grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub alpha: f64,
    pub s: f64,
    pub delta: f64,
}

impl Cell {
    pub fn params(&self) -> sbx_core::Result<BathParams> {
        BathParams::scaled(self.alpha, self.s, self.delta)
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let message = match full.rfind(" at line ") {
                Some(i) => full[..i].to_string(),
                None => full,
            };
            ConfigError { field: String::new(), message, line: Some(e.line()), column: Some(e.column()) }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::field("<file>", format!("cannot read {}: {e}", path.display())))?;
        Ok((Self::from_json(&text)?, text))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.omega_c != 1.0 {
            return Err(ConfigError::field(
                "omega_c",
                "must be 1; give every frequency as a ratio to the cutoff",
            ));
        }
        if self.epsilon != 0.0 {
            return Err(ConfigError::field("epsilon", "only the unbiased model (epsilon = 0) is supported"));
        }
        self.alpha.validate("alpha")?;
        self.s.validate("s")?;
        self.delta.validate("delta")?;
        if self.alpha.values().iter().any(|&a| a < 0.0) {
            return Err(ConfigError::field("alpha", "must be nonnegative"));
        }
        if self.s.values().iter().any(|&s| s <= 0.0) {
            return Err(ConfigError::field("s", "must be positive"));
        }
        if self.delta.values().iter().any(|&d| d <= 0.0) {
            return Err(ConfigError::field("delta", "must be positive"));
        }
        if !(self.dt > 0.0 && self.dt <= sbx_core::dynamics::MAX_DT) {
            return Err(ConfigError::field("dt", format!("must lie in (0, {}]", sbx_core::dynamics::MAX_DT)));
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(ConfigError::field("t_max", "must be finite and nonnegative"));
        }
        if !(self.output_dt >= self.dt && self.output_dt.is_finite()) {
            return Err(ConfigError::field("output_dt", "must be finite and at least dt"));
        }
        if self.n_modes == 0 {
            return Err(ConfigError::field("n_modes", "must be at least 1"));
        }
        if !(self.dalpha >= 0.0 && self.dalpha.is_finite()) {
            return Err(ConfigError::field("dalpha", "must be finite and nonnegative"));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(ConfigError::field("fd_step", "must be positive"));
        }
        if self.max_cells == 0 {
            return Err(ConfigError::field("max_cells", "must be at least 1"));
        }
        Ok(())
    }

    /// Number of grid cells, computed without materializing the grid.
    pub fn cell_count(&self) -> usize {
        let a = if self.task.ignores_alpha() { 1 } else { self.alpha.values().len() };
        a.saturating_mul(self.s.values().len()).saturating_mul(self.delta.values().len())
    }

    /// Cells in grid order: `s` slowest, then `Δ`, then `α`.
    pub fn cells(&self) -> Vec<Cell> {
        let alphas = if self.task.ignores_alpha() { vec![f64::NAN] } else { self.alpha.values() };
        let mut out = Vec::with_capacity(self.cell_count());
        for &s in &self.s.values() {
            for &delta in &self.delta.values() {
                for &alpha in &alphas {
                    out.push(Cell { alpha, s, delta });
                }
            }
        }
        out
    }

    pub fn default_file_name(&self) -> String {
        let ext = match self.output.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        format!("{}_{}.{ext}", self.task.name(), match self.kind {
            Kind::Rwa => "rwa",
            Kind::Polaron => "polaron",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_axis_is_inclusive() {
        let a = Axis::Range { start: 0.1, stop: 1.0, count: 10 };
        let v = a.values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[9], 1.0);
    }

    #[test]
    fn rejects_non_unit_cutoff_and_bias() {
        let e = ExperimentConfig::from_json(r#"{"task":"bound_state","s":0.7,"delta":0.02,"omega_c":2}"#);
        assert_eq!(e.unwrap_err().field, "omega_c");
        let e = ExperimentConfig::from_json(r#"{"task":"bound_state","s":0.7,"delta":0.02,"epsilon":0.1}"#);
        assert_eq!(e.unwrap_err().field, "epsilon");
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let e = ExperimentConfig::from_json("{\n  \"task\": \"dynamics\",\n  \"s\": [0.7,\n}").unwrap_err();
        assert_eq!(e.line, Some(4));
    }

    #[test]
    fn rejects_unordered_range_and_unknown_field() {
        let e = ExperimentConfig::from_json(
            r#"{"task":"bound_state","s":{"start":1,"stop":0.5,"count":3},"delta":0.02}"#,
        );
        assert_eq!(e.unwrap_err().field, "s");
        assert!(ExperimentConfig::from_json(r#"{"task":"bound_state","s":0.7,"delta":0.02,"gamma":1}"#).is_err());
    }

    #[test]
    fn grid_order_and_count() {
        let c = ExperimentConfig::from_json(
            r#"{"task":"fidelity_scan","alpha":[0.01,0.02,0.03],"s":[0.5,0.7],"delta":0.02}"#,
        )
        .unwrap();
        assert_eq!(c.cell_count(), 6);
        let cells = c.cells();
        assert_eq!((cells[0].s, cells[0].alpha), (0.5, 0.01));
        assert_eq!((cells[3].s, cells[3].alpha), (0.7, 0.01));
        let c = ExperimentConfig::from_json(r#"{"task":"critical_line","alpha":[1,2],"s":[0.5,0.7],"delta":0.02}"#)
            .unwrap();
        assert_eq!(c.cell_count(), 2);
    }
}
