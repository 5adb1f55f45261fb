//! Per-cell evaluation of each task.

use std::collections::HashMap;

use sbx_core::bath::{self, TimeGrid};
use sbx_core::dynamics;
use sbx_core::model::ModelKind;
use sbx_core::polaron;
use sbx_core::spectrum::{self, EnergyDerivative, ModelFamily, Phase};

use crate::config::{Cell, ExperimentConfig, Task};
use crate::table::{CellValue, Column};

use CellValue::{Int, Num, Text};

/// Columns of a task, parameter columns first and `status` last.
pub fn columns(task: Task) -> Vec<Column> {
    let mut cols = if task.ignores_alpha() {
        vec![Column::new("s", "1"), Column::new("delta", "omega_c")]
    } else {
        vec![Column::new("alpha", "1"), Column::new("s", "1"), Column::new("delta", "omega_c")]
    };
    cols.extend(match task {
        Task::Dynamics => vec![
            Column::new("t", "1/omega_c"),
            Column::new("re_amp", "1"),
            Column::new("im_amp", "1"),
            Column::new("pz", "1"),
        ],
        Task::BoundState => vec![
            Column::new("eta", "1"),
            Column::new("delta_eff", "omega_c"),
            Column::new("phase", "-"),
            Column::new("E1", "omega_c"),
            Column::new("binding", "omega_c"),
            Column::new("d0_sq", "1"),
            Column::new("nu", "omega_c"),
            Column::new("E_g", "omega_c"),
        ],
        Task::CriticalLine => vec![
            Column::new("alpha_c", "1"),
            Column::new("alpha_c_bisection", "1"),
            Column::new("alpha_c_closed_form", "1"),
        ],
        Task::EtaMap => vec![
            Column::new("eta", "1"),
            Column::new("C", "omega_c"),
            Column::new("fixed_points", "count"),
            Column::new("phase", "-"),
            Column::new("alpha_loc", "1"),
        ],
        Task::EnergyScan => vec![
            Column::new("eta", "1"),
            Column::new("C", "omega_c"),
            Column::new("phase", "-"),
            Column::new("E_g", "omega_c"),
            Column::new("dE_g_dalpha", "omega_c"),
            Column::new("derivative", "-"),
            Column::new("dE_g_left", "omega_c"),
            Column::new("dE_g_right", "omega_c"),
            Column::new("alpha_c", "1"),
        ],
        Task::FidelityScan => vec![
            Column::new("dalpha", "1"),
            Column::new("phase", "-"),
            Column::new("phase_next", "-"),
            Column::new("F", "1"),
        ],
        Task::EntropyScan => {
            vec![Column::new("phase", "-"), Column::new("d0_sq", "1"), Column::new("S", "nats")]
        }
        Task::Boundary => vec![Column::new("alpha_loc", "1")],
    });
    cols.push(Column::new("status", "-"));
    cols
}

fn phase_name(p: Phase) -> CellValue {
    Text(match p {
        Phase::NoBound => "no_bound".into(),
        Phase::Bound => "bound".into(),
    })
}

/// Quantities shared by every cell of one `(s, Δ)` family.
#[derive(Debug, Clone, Copy, Default)]
pub struct FamilyData {
    pub alpha_c: Option<f64>,
    pub alpha_loc: Option<f64>,
}

pub type FamilyKey = (u64, u64);

pub fn family_key(cell: &Cell) -> FamilyKey {
    (cell.s.to_bits(), cell.delta.to_bits())
}

pub fn needs_family_pass(task: Task) -> bool {
    matches!(task, Task::EnergyScan | Task::EtaMap)
}

pub fn family_data(cfg: &ExperimentConfig, cell: &Cell) -> Result<FamilyData, String> {
    let base = sbx_core::bath::BathParams::scaled(0.0, cell.s, cell.delta).map_err(|e| e.to_string())?;
    let mut data = FamilyData::default();
    match cfg.task {
        Task::EnergyScan if cfg.detect_jumps => {
            let fam = ModelFamily::new(base, cfg.kind.into());
            data.alpha_c = Some(fam.critical_alpha().map_err(|e| e.to_string())?.alpha);
        }
        Task::EtaMap => {
            data.alpha_loc = Some(polaron::delocalized_boundary(&base).map_err(|e| e.to_string())?);
        }
        _ => {}
    }
    Ok(data)
}

/// Evaluation result of one cell: rows, and the worst kernel tolerance seen.
pub struct CellOutput {
    pub rows: Vec<Vec<CellValue>>,
    pub kernel_tolerance: f64,
    pub error: Option<String>,
}

fn prefix(task: Task, cell: &Cell) -> Vec<CellValue> {
    if task.ignores_alpha() {
        vec![Num(cell.s), Num(cell.delta)]
    } else {
        vec![Num(cell.alpha), Num(cell.s), Num(cell.delta)]
    }
}

/// Evaluates one cell. Failures produce a single row with `nan` values and the
/// diagnostic in `status`.
pub fn evaluate(cfg: &ExperimentConfig, families: &HashMap<FamilyKey, Result<FamilyData, String>>, cell: &Cell) -> CellOutput {
    let width = columns(cfg.task).len();
    let head = prefix(cfg.task, cell);
    let family = families.get(&family_key(cell)).cloned().unwrap_or(Ok(FamilyData::default()));
    let result = family.and_then(|fam| body(cfg, &fam, cell));
    match result {
        Ok((bodies, tol)) => CellOutput {
            rows: bodies
                .into_iter()
                .map(|b| {
                    let mut row = head.clone();
                    row.extend(b);
                    row.push(Text("ok".into()));
                    row
                })
                .collect(),
            kernel_tolerance: tol,
            error: None,
        },
        Err(msg) => {
            let mut row = head.clone();
            while row.len() < width - 1 {
                row.push(Num(f64::NAN));
            }
            row.push(Text(format!("error: {msg}")));
            CellOutput { rows: vec![row], kernel_tolerance: 0.0, error: Some(msg) }
        }
    }
}

type Body = (Vec<Vec<CellValue>>, f64);

fn body(cfg: &ExperimentConfig, fam_data: &FamilyData, cell: &Cell) -> Result<Body, String> {
    let e = |err: sbx_core::Error| err.to_string();
    let kind: ModelKind = cfg.kind.into();
    let base = sbx_core::bath::BathParams::scaled(0.0, cell.s, cell.delta).map_err(e)?;
    let mut family = ModelFamily::new(base, kind);
    family.convention = cfg.shift_convention.into();

    match cfg.task {
        Task::Dynamics => {
            let model = family.model_at(cell.alpha).map_err(e)?;
            let grid = TimeGrid::new(cfg.t_max, cfg.dt).map_err(e)?;
            let kernel = bath::memory_kernel(&model, grid).map_err(e)?;
            let trace = dynamics::integrate(model.delta_eff, &kernel.values, cfg.dt, kind).map_err(e)?;
            let stride = ((cfg.output_dt / cfg.dt).round() as usize).max(1);
            let rows = (0..trace.len())
                .step_by(stride)
                .map(|i| vec![Num(trace.time(i)), Num(trace.amp[i].re), Num(trace.amp[i].im), Num(trace.pz[i])])
                .collect();
            Ok((rows, kernel.achieved_tolerance))
        }
        Task::BoundState => {
            let model = family.model_at(cell.alpha).map_err(e)?;
            let g = spectrum::ground_state(&model, family.convention).map_err(e)?;
            let (e1, x, d0, nu) = match g.bound {
                Some(b) => (b.e1, b.binding, b.d0_sq, -b.binding),
                None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
            };
            Ok((
                vec![vec![
                    Num(model.eta),
                    Num(model.delta_eff),
                    phase_name(g.phase),
                    Num(e1),
                    Num(x),
                    Num(d0),
                    Num(nu),
                    Num(g.energy),
                ]],
                0.0,
            ))
        }
        Task::CriticalLine => {
            let cp = family.critical_alpha().map_err(e)?;
            Ok((
                vec![vec![Num(cp.alpha), Num(cp.bisection), Num(cp.closed_form.unwrap_or(f64::NAN))]],
                0.0,
            ))
        }
        Task::EtaMap => {
            let p = base.with_alpha(cell.alpha).map_err(e)?;
            let sol = polaron::solve_eta(&p).map_err(e)?;
            let phase = if sol.is_localized() { "localized" } else { "delocalized" };
            Ok((
                vec![vec![
                    Num(sol.eta),
                    Num(sol.displacement_energy),
                    Int(sol.fixed_points.len() as i64),
                    Text(phase.into()),
                    Num(fam_data.alpha_loc.unwrap_or(f64::NAN)),
                ]],
                0.0,
            ))
        }
        Task::EnergyScan => {
            let model = family.model_at(cell.alpha).map_err(e)?;
            let g = spectrum::ground_state(&model, family.convention).map_err(e)?;
            let d = match fam_data.alpha_c {
                Some(ac) => spectrum::energy_derivative_at(&family, cell.alpha, cfg.fd_step, ac),
                None => spectrum::energy_derivative(&family, cell.alpha, cfg.fd_step, false),
            }
            .map_err(e)?;
            let (label, left, right) = match d {
                EnergyDerivative::Smooth(v) => ("smooth", v, v),
                EnergyDerivative::Jump { left, right, .. } => ("jump", left, right),
            };
            Ok((
                vec![vec![
                    Num(model.eta),
                    Num(model.shift),
                    phase_name(g.phase),
                    Num(g.energy),
                    Num(d.value()),
                    Text(label.into()),
                    Num(left),
                    Num(right),
                    Num(fam_data.alpha_c.unwrap_or(f64::NAN)),
                ]],
                0.0,
            ))
        }
        Task::FidelityScan => {
            // reference strength 1; each model rescales its couplings
            let reference = base.with_alpha(1.0).map_err(e)?;
            let grid = bath::discretize(&reference, cfg.n_modes, cfg.scheme.into()).map_err(e)?;
            let f = spectrum::ground_fidelity(&family, cell.alpha, cfg.dalpha, &grid).map_err(e)?;
            let a = family.ground_state(cell.alpha).map_err(e)?;
            let b = family.ground_state(cell.alpha + cfg.dalpha).map_err(e)?;
            Ok((vec![vec![Num(cfg.dalpha), phase_name(a.phase), phase_name(b.phase), Num(f)]], 0.0))
        }
        Task::EntropyScan => {
            let g = family.ground_state(cell.alpha).map_err(e)?;
            let d0 = g.bound.map_or(f64::NAN, |b| b.d0_sq);
            let s = spectrum::entanglement_entropy(&family, cell.alpha).map_err(e)?;
            Ok((vec![vec![phase_name(g.phase), Num(d0), Num(s)]], 0.0))
        }
        Task::Boundary => {
            let a = polaron::delocalized_boundary(&base).map_err(e)?;
            Ok((vec![vec![Num(a)]], 0.0))
        }
    }
}
