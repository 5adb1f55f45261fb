//! Experiment runner for `sbx-core`: JSON configs, parameter sweeps, CSV/JSON
//! result tables and the built-in acceptance suite.

pub mod config;
pub mod spectral;
pub mod table;
pub mod tasks;
pub mod verify;

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use config::{ConfigError, ExperimentConfig, Format};
use table::{format_num, ResultTable};

/// Overrides the directory results are written to.
pub const OUT_DIR_ENV: &str = "SBX_OUT_DIR";

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    /// Sweep larger than the configured cap.
    TooManyCells { cells: usize, cap: usize },
    Numeric { cell: String, message: String },
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::TooManyCells { .. } => 1,
            RunError::Numeric { .. } | RunError::Io(_) => 2,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::TooManyCells { cells, cap } => {
                write!(f, "refusing to evaluate {cells} cells (cap {cap}); raise max_cells or shrink the grid")
            }
            RunError::Numeric { cell, message } => write!(f, "numeric failure at {cell}: {message}"),
            RunError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

/// How cell failures are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureMode {
    /// The first failing cell (in grid order) aborts the run.
    Abort,
    /// Failures are recorded in the `status` column.
    Record,
}

pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn axis_echo(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format_num(*v)).collect();
    format!("[{}]", parts.join(", "))
}

/// Evaluates every cell of `cfg` on `workers` threads. Rows come out in grid
/// order whatever the scheduling.
pub fn execute(
    cfg: &ExperimentConfig,
    config_text: &str,
    workers: usize,
    mode: FailureMode,
) -> Result<ResultTable, RunError> {
    let count = cfg.cell_count();
    if count > cfg.max_cells {
        return Err(RunError::TooManyCells { cells: count, cap: cfg.max_cells });
    }
    let cells = cfg.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| RunError::Io(format!("cannot start worker pool: {e}")))?;

    let outputs: Vec<_> = pool.install(|| {
        let mut families = HashMap::new();
        if tasks::needs_family_pass(cfg.task) {
            let mut keys: Vec<_> = Vec::new();
            for c in &cells {
                let k = tasks::family_key(c);
                if !keys.iter().any(|(kk, _)| *kk == k) {
                    keys.push((k, *c));
                }
            }
            let computed: Vec<_> =
                keys.par_iter().map(|(k, c)| (*k, tasks::family_data(cfg, c))).collect();
            families.extend(computed);
        }
        cells.par_iter().map(|c| tasks::evaluate(cfg, &families, c)).collect()
    });

    let mut table = ResultTable::new(tasks::columns(cfg.task));
    let mut kernel_tol = 0.0f64;
    let mut failures = 0usize;
    for (cell, out) in cells.iter().zip(outputs) {
        if let Some(msg) = &out.error {
            if mode == FailureMode::Abort {
                let at = if cfg.task.ignores_alpha() {
                    format!("s={}, delta={}", cell.s, cell.delta)
                } else {
                    format!("alpha={}, s={}, delta={}", cell.alpha, cell.s, cell.delta)
                };
                return Err(RunError::Numeric { cell: at, message: msg.clone() });
            }
            failures += 1;
        }
        kernel_tol = kernel_tol.max(out.kernel_tolerance);
        table.rows.extend(out.rows);
    }

    table.note("generator", format!("sbx {}", env!("CARGO_PKG_VERSION")));
    table.note("config_sha256", config_hash(config_text));
    table.note("task", cfg.task.name());
    table.note("kind", format!("{:?}", cfg.kind).to_lowercase());
    if !cfg.task.ignores_alpha() {
        table.note("alpha", axis_echo(&cfg.alpha.values()));
    }
    table.note("s", axis_echo(&cfg.s.values()));
    table.note("delta", axis_echo(&cfg.delta.values()));
    table.note("units", "frequencies in omega_c (omega_c = 1), times in 1/omega_c, entropy in nats");
    table.note(
        "tolerances",
        format!(
            "quadrature_rel={:e}, bound_state_abs={:e}, critical_alpha_rel={:e}, boundary_resolution={:e}",
            sbx_core::quad::REL_TOL,
            sbx_core::spectrum::ROOT_TOL,
            sbx_core::spectrum::CRITICAL_TOL,
            sbx_core::polaron::BOUNDARY_RESOLUTION,
        ),
    );
    match cfg.task {
        config::Task::Dynamics => {
            table.note("frame", "amplitude obeys a' + i*delta_eff*a + (k*a) = 0, a(0) = 1/sqrt(2); pz = sqrt(2) Re a; bound pole at nu = E1 + delta_eff/2");
            table.note("grid", format!("dt={}, t_max={}, output_dt={}", cfg.dt, cfg.t_max, cfg.output_dt));
            table.note("kernel_tolerance_achieved", format!("{kernel_tol:e}"));
        }
        config::Task::FidelityScan => {
            table.note("fidelity", format!("dalpha={}, n_modes={}, scheme={:?}", cfg.dalpha, cfg.n_modes, cfg.scheme).to_lowercase());
        }
        config::Task::EnergyScan | config::Task::BoundState => {
            table.note("shift_convention", format!("{:?}", cfg.shift_convention).to_lowercase());
            if cfg.task == config::Task::EnergyScan {
                table.note("fd_step", format_num(cfg.fd_step));
            }
        }
        _ => {}
    }
    table.note("failed_cells", failures.to_string());
    table.timestamp = Some(timestamp());
    Ok(table)
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("{secs} (unix seconds)")
}

/// Where a result file goes: `$SBX_OUT_DIR/<file name>` if the variable is set,
/// else `output.path` (relative to the working directory), else a default name.
pub fn output_path(cfg: &ExperimentConfig) -> PathBuf {
    let configured = cfg.output.path.clone().unwrap_or_else(|| PathBuf::from(cfg.default_file_name()));
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            let name = configured.file_name().map(PathBuf::from).unwrap_or_else(|| cfg.default_file_name().into());
            Path::new(&dir).join(name)
        }
        _ => configured,
    }
}

pub fn write_table(cfg: &ExperimentConfig, table: &ResultTable, path: &Path) -> Result<(), RunError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| RunError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    let file = std::fs::File::create(path).map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))?;
    let writer = std::io::BufWriter::new(file);
    match cfg.output.format {
        Format::Csv => table.write_csv(writer),
        Format::Json => table.write_json(writer),
    }
    .map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Loads, evaluates and writes one config; returns the output path.
pub fn run_file(path: &Path, workers: usize, mode: FailureMode) -> Result<(PathBuf, ResultTable), RunError> {
    let (cfg, text) = ExperimentConfig::load(path)?;
    let table = execute(&cfg, &text, workers, mode)?;
    let out = output_path(&cfg);
    write_table(&cfg, &table, &out)?;
    Ok((out, table))
}
