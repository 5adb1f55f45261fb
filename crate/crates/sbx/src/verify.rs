//! Built-in acceptance suite.

use std::cell::OnceCell;
use std::fmt;
use std::time::{Duration, Instant};

use sbx_core::bath::{self, BathParams, Scheme};
use sbx_core::dynamics::{self, AmplitudeTrace, LATE_FRACTION};
use sbx_core::model::ModelKind;
use sbx_core::polaron;
use sbx_core::spectrum::{self, EnergyDerivative, ModelFamily, DEFAULT_DALPHA, DEFAULT_FD_STEP, FIDELITY_MODES};

use crate::spectral;

/// Reference family used by most checks.
pub const REF_S: f64 = 0.7;
pub const REF_DELTA: f64 = 0.02;
/// Step of the coarsest solve in the step-halving check.
pub const DEFAULT_ORDER_DT: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    CriticalPoints,
    Localization,
    Transition,
    FidelityEntropy,
    Dynamics,
    Oracle,
    Stationarity,
    SolverOrder,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::CriticalPoints,
        Group::Localization,
        Group::Transition,
        Group::FidelityEntropy,
        Group::Dynamics,
        Group::Oracle,
        Group::Stationarity,
        Group::SolverOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::CriticalPoints => "critical_points",
            Group::Localization => "localization",
            Group::Transition => "transition",
            Group::FidelityEntropy => "fidelity_entropy",
            Group::Dynamics => "dynamics",
            Group::Oracle => "oracle",
            Group::Stationarity => "stationarity",
            Group::SolverOrder => "solver_order",
        }
    }

    pub fn parse(name: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.name() == name)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub group: Group,
    pub claim: String,
    pub expected: String,
    pub got: String,
    pub tolerance: String,
    pub pass: bool,
    pub elapsed: Duration,
}

impl Criterion {
    pub fn verdict(&self) -> &'static str {
        if self.pass { "PASS" } else { "FAIL" }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {} | expected {} | got {} | tolerance {} | {:.1}s",
            self.verdict(),
            self.group,
            self.claim,
            self.expected,
            self.got,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub only: Option<Group>,
    /// Coarsest step of the solver-order check; `dt = 0.5` makes it fail.
    pub order_dt: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { only: None, order_dt: DEFAULT_ORDER_DT }
    }
}

fn params(alpha: f64, s: f64, delta: f64) -> sbx_core::Result<BathParams> {
    BathParams::scaled(alpha, s, delta)
}

fn family(kind: ModelKind) -> ModelFamily {
    ModelFamily::new(params(0.0, REF_S, REF_DELTA).expect("reference parameters are valid"), kind)
}

fn kind_name(kind: ModelKind) -> &'static str {
    kind.name()
}

/// Critical couplings of the reference family, computed once per run.
#[derive(Default)]
struct Cache {
    rwa: OnceCell<Result<f64, String>>,
    polaron: OnceCell<Result<f64, String>>,
}

impl Cache {
    fn alpha_c(&self, kind: ModelKind) -> Result<f64, String> {
        let cell = match kind {
            ModelKind::Rwa => &self.rwa,
            ModelKind::Polaron => &self.polaron,
        };
        cell.get_or_init(|| family(kind).critical_alpha().map(|c| c.alpha).map_err(|e| e.to_string())).clone()
    }
}

struct Recorder<'a> {
    group: Group,
    sink: &'a mut dyn FnMut(Criterion),
    failures: usize,
    clock: Instant,
}

impl Recorder<'_> {
    fn lap(&mut self) -> Duration {
        let now = Instant::now();
        let d = now - self.clock;
        self.clock = now;
        d
    }

    fn push(&mut self, claim: impl Into<String>, expected: impl Into<String>, got: impl Into<String>, tolerance: impl Into<String>, pass: bool) {
        let elapsed = self.lap();
        if !pass {
            self.failures += 1;
        }
        (self.sink)(Criterion {
            group: self.group,
            claim: claim.into(),
            expected: expected.into(),
            got: got.into(),
            tolerance: tolerance.into(),
            pass,
            elapsed,
        });
    }

    fn error(&mut self, claim: impl Into<String>, expected: impl Into<String>, err: impl fmt::Display) {
        self.push(claim, expected, format!("error: {err}"), "-", false);
    }

    fn runtime(&mut self, claim: &str, started: Instant, budget: f64) {
        let secs = started.elapsed().as_secs_f64();
        self.push(format!("{claim} runtime"), format!("< {budget} s"), format!("{secs:.1} s"), "-", secs < budget);
    }
}

/// Runs the selected groups, handing each criterion to `sink` as soon as it is
/// decided. Returns the number of failures.
pub fn run(opts: &Options, sink: &mut dyn FnMut(Criterion)) -> usize {
    let cache = Cache::default();
    let mut failures = 0;
    for group in Group::ALL {
        if opts.only.is_some_and(|g| g != group) {
            continue;
        }
        let mut rec = Recorder { group, sink: &mut *sink, failures: 0, clock: Instant::now() };
        match group {
            Group::CriticalPoints => critical_points(&mut rec),
            Group::Localization => localization(&mut rec),
            Group::Transition => transition(&mut rec, &cache),
            Group::FidelityEntropy => fidelity_entropy(&mut rec, &cache),
            Group::Dynamics => dynamics_regimes(&mut rec, &cache),
            Group::Oracle => oracle(&mut rec, &cache),
            Group::Stationarity => stationarity(&mut rec),
            Group::SolverOrder => solver_order(&mut rec, opts.order_dt),
        }
        failures += rec.failures;
    }
    failures
}

/// Collects every criterion of a run.
pub fn collect(opts: &Options) -> Vec<Criterion> {
    let mut out = Vec::new();
    run(opts, &mut |c| out.push(c));
    out
}

fn critical_points(rec: &mut Recorder) {
    let started = Instant::now();
    let mut worst = 0.0f64;
    let mut err = None;
    for i in 1..=10 {
        let s = 0.1 * i as f64;
        for delta in [0.005, 0.02, 0.1] {
            let closed = 2.0 * s * delta;
            match params(0.0, s, delta).and_then(|p| ModelFamily::new(p, ModelKind::Rwa).critical_alpha()) {
                Ok(cp) => worst = worst.max((cp.bisection - closed).abs() / closed),
                Err(e) => err = Some(format!("s={s}, delta={delta}: {e}")),
            }
        }
    }
    let claim = "rwa critical coupling equals 2s*delta over s in 0.1..1.0, delta in {0.005, 0.02, 0.1}";
    match err {
        Some(e) => rec.error(claim, "max rel error <= 1e-6", e),
        None => rec.push(claim, "max rel error <= 1e-6", format!("{worst:.3e}"), "1e-6 rel", worst <= 1e-6),
    }
    match family(ModelKind::Rwa).critical_alpha() {
        Ok(cp) => {
            let rel = (cp.bisection - 0.028).abs() / 0.028;
            rec.push("rwa critical coupling at s=0.7, delta=0.02", "0.028", format!("{:.9}", cp.bisection), "1e-6 rel", rel <= 1e-6)
        }
        Err(e) => rec.error("rwa critical coupling at s=0.7, delta=0.02", "0.028", e),
    }
    let mut worst = 0.0f64;
    let mut err = None;
    for i in 1..=10 {
        let s = 0.1 * i as f64;
        match params(0.0, s, REF_DELTA).and_then(|p| ModelFamily::new(p, ModelKind::Rwa).critical_alpha()) {
            Ok(cp) => worst = worst.max((cp.bisection - 0.04 * s).abs() / (0.04 * s)),
            Err(e) => err = Some(e.to_string()),
        }
    }
    match err {
        Some(e) => rec.error("rwa critical line at delta=0.02 is 0.04s", "max rel error <= 1e-6", e),
        None => rec.push("rwa critical line at delta=0.02 is 0.04s", "max rel error <= 1e-6", format!("{worst:.3e}"), "1e-6 rel", worst <= 1e-6),
    }
    rec.runtime("rwa critical points", started, 10.0);

    let started = Instant::now();
    let claim = "polaron critical coupling at s=0.7, delta=0.02";
    match family(ModelKind::Polaron).critical_alpha() {
        Ok(cp) => rec.push(claim, "in [0.099, 0.109]", format!("{:.7}", cp.alpha), "interval", (0.099..=0.109).contains(&cp.alpha)),
        Err(e) => rec.error(claim, "in [0.099, 0.109]", e),
    }
    rec.runtime("polaron critical point", started, 60.0);
}

fn localization(rec: &mut Recorder) {
    let started = Instant::now();
    let claim = "ohmic delocalized boundary at s=1, delta=1e-3";
    match params(0.0, 1.0, 1e-3).and_then(|p| polaron::delocalized_boundary(&p)) {
        Ok(a) => rec.push(claim, "in [0.95, 1.05]", format!("{a:.5}"), "interval", (0.95..=1.05).contains(&a)),
        Err(e) => rec.error(claim, "in [0.95, 1.05]", e),
    }
    rec.runtime("ohmic boundary", started, 120.0);
}

/// Continuity gap of `E_g` across `α_C`.
pub const CONTINUITY_DELTA: f64 = 1e-6;
pub const CONTINUITY_TOL: f64 = 1e-5;
/// The slope jump must exceed this multiple of the finite-difference noise floor.
pub const JUMP_FACTOR: f64 = 10.0;

struct TransitionData {
    gap: f64,
    left: f64,
    right: f64,
    noise: f64,
}

fn transition_data(kind: ModelKind, ac: f64) -> sbx_core::Result<TransitionData> {
    let fam = family(kind);
    let gap = (fam.ground_state(ac + CONTINUITY_DELTA)?.energy - fam.ground_state(ac - CONTINUITY_DELTA)?.energy).abs();
    let h = DEFAULT_FD_STEP;
    let (left, right) = match spectrum::energy_derivative_at(&fam, ac, h, ac)? {
        EnergyDerivative::Jump { left, right, .. } => (left, right),
        EnergyDerivative::Smooth(d) => (d, d),
    };
    let mut noise = 0.0f64;
    for k in [-5.0, -3.0, 3.0, 5.0] {
        let a = ac + k * h;
        let d1 = spectrum::energy_derivative_at(&fam, a, h, ac)?.value();
        let d2 = spectrum::energy_derivative_at(&fam, a, 0.5 * h, ac)?.value();
        noise = noise.max((d1 - d2).abs());
    }
    Ok(TransitionData { gap, left, right, noise })
}

fn transition(rec: &mut Recorder, cache: &Cache) {
    for kind in [ModelKind::Rwa, ModelKind::Polaron] {
        let name = kind_name(kind);
        let data = cache.alpha_c(kind).and_then(|ac| transition_data(kind, ac).map_err(|e| e.to_string()));
        let d = match data {
            Ok(d) => d,
            Err(e) => {
                rec.error(format!("{name}: E_g continuous and E_g' discontinuous at the critical coupling"), "-", e);
                continue;
            }
        };
        rec.push(
            format!("{name}: E_g continuous across the critical coupling (|E_g(a_c+1e-6) - E_g(a_c-1e-6)|)"),
            format!("<= {CONTINUITY_TOL:e}"),
            format!("{:.3e}", d.gap),
            format!("{CONTINUITY_TOL:e} abs"),
            d.gap <= CONTINUITY_TOL,
        );
        let jump = (d.right - d.left).abs();
        rec.push(
            format!("{name}: E_g' jump at h=1e-4 (left {:.6}, right {:.6}) exceeds 10x FD noise floor", d.left, d.right),
            format!("> {:.3e}", JUMP_FACTOR * d.noise),
            format!("{jump:.3e}"),
            format!("noise floor {:.3e}", d.noise),
            jump > JUMP_FACTOR * d.noise,
        );
    }
}

/// Points within each phase, as fractions of `α_C`.
pub const FIDELITY_BELOW: [f64; 2] = [0.5, 0.9];
pub const FIDELITY_ABOVE: [f64; 2] = [1.15, 1.3];

fn fidelity_entropy(rec: &mut Recorder, cache: &Cache) {
    let started = Instant::now();
    let da = DEFAULT_DALPHA;
    for kind in [ModelKind::Rwa, ModelKind::Polaron] {
        let name = kind_name(kind);
        let fam = family(kind);
        let setup = cache.alpha_c(kind).and_then(|ac| {
            let reference = params(1.0, REF_S, REF_DELTA).map_err(|e| e.to_string())?;
            let grid = bath::discretize(&reference, FIDELITY_MODES, Scheme::Logarithmic).map_err(|e| e.to_string())?;
            Ok((ac, grid))
        });
        let (ac, grid) = match setup {
            Ok(v) => v,
            Err(e) => {
                rec.error(format!("{name}: fidelity and entropy"), "-", e);
                continue;
            }
        };
        let claim = format!("{name}: F(a_c - da/2, a_c + da/2) at da=0.0005");
        match spectrum::ground_fidelity(&fam, ac - 0.5 * da, da, &grid) {
            Ok(f) => rec.push(claim, "<= 1e-10", format!("{f:.3e}"), "1e-10 abs", f <= 1e-10),
            Err(e) => rec.error(claim, "<= 1e-10", e),
        }
        let claim = format!("{name}: min F within a phase at a/a_c in {{0.5, 0.9, 1.15, 1.3}}");
        let within: Result<f64, _> = FIDELITY_BELOW
            .iter()
            .chain(&FIDELITY_ABOVE)
            .map(|r| spectrum::ground_fidelity(&fam, r * ac, da, &grid))
            .try_fold(1.0f64, |m, f| f.map(|f| m.min(f)));
        match within {
            Ok(f) => rec.push(claim, ">= 0.99", format!("{f:.6}"), "0.99", f >= 0.99),
            Err(e) => rec.error(claim, ">= 0.99", e),
        }
        let entropy = |a: f64| spectrum::entanglement_entropy(&fam, a);
        let claim = format!("{name}: S = 0 below the critical coupling (a/a_c in {{0.5, 0.9}})");
        match FIDELITY_BELOW.iter().map(|r| entropy(r * ac)).try_fold(0.0f64, |m, s| s.map(|s| m.max(s))) {
            Ok(s) => rec.push(claim, "0", format!("{s:.3e}"), "exact", s == 0.0),
            Err(e) => rec.error(claim, "0", e),
        }
        let claim = format!("{name}: S > 0 above the critical coupling (a/a_c in {{1.15, 1.3}})");
        match FIDELITY_ABOVE.iter().map(|r| entropy(r * ac)).try_fold(f64::INFINITY, |m, s| s.map(|s| m.min(s))) {
            Ok(s) => rec.push(claim, "> 0", format!("{s:.6}"), "-", s > 0.0),
            Err(e) => rec.error(claim, "> 0", e),
        }
        let claim = format!("{name}: S(a_c + da/2) - S(a_c - da/2)");
        match entropy(ac + 0.5 * da).and_then(|hi| Ok(hi - entropy(ac - 0.5 * da)?)) {
            Ok(j) => rec.push(claim, "> 0", format!("{j:.6}"), "-", j > 0.0),
            Err(e) => rec.error(claim, "> 0", e),
        }
    }
    rec.runtime("fidelity and entropy", started, 60.0);
}

pub const DYNAMICS_T_MAX: f64 = 4000.0;
pub const DYNAMICS_DT: f64 = 0.02;
/// Trailing fraction of the run inspected for decay.
pub const DECAY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Regime {
    Decay,
    Plateau,
    Bound,
}

fn dynamics_cases(cache: &Cache) -> Vec<(ModelKind, Result<f64, String>, Regime)> {
    vec![
        (ModelKind::Rwa, Ok(0.005), Regime::Decay),
        (ModelKind::Rwa, cache.alpha_c(ModelKind::Rwa), Regime::Plateau),
        (ModelKind::Rwa, Ok(0.04), Regime::Bound),
        (ModelKind::Polaron, Ok(0.03), Regime::Decay),
        (ModelKind::Polaron, cache.alpha_c(ModelKind::Polaron), Regime::Plateau),
        (ModelKind::Polaron, Ok(0.15), Regime::Bound),
    ]
}

fn dynamics_regimes(rec: &mut Recorder, cache: &Cache) {
    let started = Instant::now();
    for (kind, alpha, regime) in dynamics_cases(cache) {
        let name = kind_name(kind);
        let fam = family(kind);
        let run = alpha.and_then(|a| {
            let model = fam.model_at(a).map_err(|e| e.to_string())?;
            let trace = dynamics::solve_amplitude(&model, DYNAMICS_T_MAX, DYNAMICS_DT).map_err(|e| e.to_string())?;
            let pred = dynamics::asymptotic_envelope(&model).map_err(|e| e.to_string())?;
            Ok((a, trace, pred))
        });
        let (a, trace, pred) = match run {
            Ok(v) => v,
            Err(e) => {
                rec.error(format!("{name}: dynamics regime {regime:?}"), "-", e);
                continue;
            }
        };
        match regime {
            Regime::Decay => {
                let w = trace.late_window(DECAY_FRACTION);
                rec.push(
                    format!("{name} a={a}: max|P_z| over the last 10% of t=4000 (decay)"),
                    "<= 0.05",
                    format!("{:.4}", w.max_abs),
                    "0.05",
                    w.max_abs <= 0.05,
                );
            }
            Regime::Plateau => {
                let w = trace.late_window(LATE_FRACTION);
                rec.push(format!("{name} a={a:.7}: late-time mean P_z (plateau)"), "> 0.05", format!("{:.4}", w.mean), "0.05", w.mean > 0.05);
                rec.push(
                    format!("{name} a={a:.7}: late-time P_z oscillation amplitude (plateau)"),
                    "< 0.02",
                    format!("{:.4}", w.oscillation),
                    "0.02",
                    w.oscillation < 0.02,
                );
            }
            Regime::Bound => bound_regime(rec, name, a, &trace, pred),
        }
    }
    rec.runtime("dynamics regimes", started, 600.0);
}

fn bound_regime(rec: &mut Recorder, name: &str, a: f64, trace: &AmplitudeTrace, pred: Option<dynamics::ResiduePrediction>) {
    let Some(pred) = pred else {
        rec.push(format!("{name} a={a}: bound state exists"), "bound", "no bound state", "-", false);
        return;
    };
    let w = trace.late_window(LATE_FRACTION);
    let rel = (w.envelope - pred.z).abs() / pred.z;
    rec.push(
        format!("{name} a={a}: late-time envelope vs residue Z"),
        format!("{:.5}", pred.z),
        format!("{:.5}", w.envelope),
        "2% rel",
        rel <= 0.02,
    );
    let peak = spectral::peak_frequency(&trace.pz[w.start..], trace.dt);
    let off = (peak.omega - pred.frequency()).abs();
    rec.push(
        format!("{name} a={a}: FFT peak of late P_z vs |E1 + delta_eff/2|"),
        format!("{:.3e}", pred.frequency()),
        format!("{:.3e}", peak.omega),
        format!("one bin {:.3e}", peak.bin),
        off <= peak.bin,
    );
}

pub const ORACLE_MODES: usize = 4000;
pub const ORACLE_T_MAX: f64 = 2000.0;
pub const ORACLE_DT: f64 = 0.02;
pub const ORACLE_TOL: f64 = 1e-3;

fn oracle(rec: &mut Recorder, cache: &Cache) {
    let started = Instant::now();
    let cases: Vec<(ModelKind, Result<f64, String>, &str)> = vec![
        (ModelKind::Rwa, cache.alpha_c(ModelKind::Rwa).map(|a| 0.5 * a), "0.5 a_c"),
        (ModelKind::Rwa, cache.alpha_c(ModelKind::Rwa), "a_c"),
        (ModelKind::Rwa, cache.alpha_c(ModelKind::Rwa).map(|a| 1.5 * a), "1.5 a_c"),
        (ModelKind::Polaron, cache.alpha_c(ModelKind::Polaron).map(|a| 0.5 * a), "0.5 a_c"),
        (ModelKind::Polaron, cache.alpha_c(ModelKind::Polaron), "a_c"),
        (ModelKind::Polaron, Ok(0.15), "0.15"),
    ];
    for (kind, alpha, label) in cases {
        let name = kind_name(kind);
        let claim = format!("{name} at {label}: Volterra vs exact diagonalization (N=4000 log) on t in [0, 2000]");
        let dev = alpha.and_then(|a| {
            let e = |err: sbx_core::Error| err.to_string();
            let model = family(kind).model_at(a).map_err(e)?;
            let grid = bath::discretize(&params(a, REF_S, REF_DELTA).map_err(e)?, ORACLE_MODES, Scheme::Logarithmic).map_err(e)?;
            let v = dynamics::solve_amplitude(&model, ORACLE_T_MAX, ORACLE_DT).map_err(e)?;
            let ed = dynamics::ed_oracle(&model, &grid, ORACLE_T_MAX, ORACLE_DT).map_err(e)?;
            v.max_deviation(&ed).map_err(e).map(|d| (a, d))
        });
        match dev {
            Ok((a, d)) => rec.push(format!("{claim} (a={a:.7})"), format!("<= {ORACLE_TOL:e}"), format!("{d:.3e}"), "1e-3 abs", d <= ORACLE_TOL),
            Err(e) => rec.error(claim, format!("<= {ORACLE_TOL:e}"), e),
        }
    }
    rec.runtime("oracle equivalence", started, 600.0);
}

pub const STATIONARITY_ALPHA: f64 = 0.05;
pub const STATIONARITY_TOL: f64 = 1e-8;

fn stationarity(rec: &mut Recorder) {
    let started = Instant::now();
    for n in [100, 1000] {
        let claim = format!("max FD gradient of the discretized bound at the optimal displacement, n_modes={n}");
        let grad = params(STATIONARITY_ALPHA, REF_S, REF_DELTA).and_then(|p| {
            let sol = polaron::solve_eta(&p)?;
            let grid = bath::discretize(&p, n, Scheme::Logarithmic)?;
            polaron::variational_gradient_check(&p, &grid, &sol)
        });
        match grad {
            Ok(g) => rec.push(claim, format!("<= {STATIONARITY_TOL:e}"), format!("{g:.3e}"), "1e-8 omega_c", g <= STATIONARITY_TOL),
            Err(e) => rec.error(claim, format!("<= {STATIONARITY_TOL:e}"), e),
        }
    }
    rec.runtime("variational stationarity", started, 30.0);
}

pub const ORDER_ALPHA: f64 = 0.04;
pub const ORDER_T_MAX: f64 = 100.0;
pub const MIN_ORDER: f64 = 1.8;

/// Largest deviation between a trace and a finer one sampled on the coarse grid.
fn coarse_deviation(fine: &AmplitudeTrace, coarse: &AmplitudeTrace) -> f64 {
    let ratio = (coarse.dt / fine.dt).round() as usize;
    coarse
        .amp
        .iter()
        .enumerate()
        .filter_map(|(i, c)| fine.amp.get(i * ratio).map(|f| (c - f).norm()))
        .fold(0.0, f64::max)
}

/// Observed order of the step-halving sequence `dt, dt/2, dt/4`.
pub fn measured_order(dt: f64) -> sbx_core::Result<f64> {
    let model = family(ModelKind::Rwa).model_at(ORDER_ALPHA)?;
    let a = dynamics::solve_amplitude(&model, ORDER_T_MAX, dt)?;
    let b = dynamics::solve_amplitude(&model, ORDER_T_MAX, 0.5 * dt)?;
    let c = dynamics::solve_amplitude(&model, ORDER_T_MAX, 0.25 * dt)?;
    Ok((coarse_deviation(&b, &a) / coarse_deviation(&c, &b)).log2())
}

fn solver_order(rec: &mut Recorder, dt: f64) {
    let started = Instant::now();
    let claim = format!("step-halving order of the amplitude solver (rwa a={ORDER_ALPHA}, dt={dt}, {}, {})", 0.5 * dt, 0.25 * dt);
    match measured_order(dt) {
        Ok(p) => rec.push(claim, format!(">= {MIN_ORDER}"), format!("{p:.3}"), "-", p >= MIN_ORDER),
        Err(e) => rec.error(claim, format!(">= {MIN_ORDER}"), e),
    }
    rec.runtime("solver order", started, 60.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_names_round_trip() {
        for g in Group::ALL {
            assert_eq!(Group::parse(g.name()), Some(g));
        }
        assert_eq!(Group::parse("nope"), None);
    }

    #[test]
    fn filter_runs_one_group() {
        let out = collect(&Options { only: Some(Group::CriticalPoints), ..Default::default() });
        assert!(!out.is_empty());
        assert!(out.iter().all(|c| c.group == Group::CriticalPoints));
    }

    #[test]
    fn coarse_step_breaks_order_check() {
        let out = collect(&Options { only: Some(Group::SolverOrder), order_dt: 0.5 });
        assert!(!out[0].pass);
    }
}
