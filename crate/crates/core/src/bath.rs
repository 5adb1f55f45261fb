//! Power-law bosonic bath: spectral density, moments, discretization and
//! memory kernels.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{self, PI};
use crate::model::{EffectiveModel, ModelKind};
use crate::quad::{self, Estimate, REL_TOL};
use crate::{Error, Result};

/// Spectral-density parameters plus the tunneling amplitude of the two-level system.
///
/// The bias `ε` of the two-level system is fixed at zero; see [`BathParams::epsilon`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    pub alpha: f64,
    pub s: f64,
    pub omega_c: f64,
    pub delta: f64,
}

impl BathParams {
    pub fn new(alpha: f64, s: f64, omega_c: f64, delta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain { what: "alpha", value: alpha });
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain { what: "s", value: s });
        }
        if !(omega_c > 0.0 && omega_c.is_finite()) {
            return Err(Error::Domain { what: "omega_c", value: omega_c });
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Domain { what: "delta", value: delta });
        }
        Ok(BathParams { alpha, s, omega_c, delta })
    }

    /// Parameters in units of the cutoff (`ω_c = 1`).
    pub fn scaled(alpha: f64, s: f64, delta: f64) -> Result<Self> {
        Self::new(alpha, s, 1.0, delta)
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.s, self.omega_c, self.delta)
    }

    /// Bias of the two-level system. Always zero.
    pub fn epsilon(&self) -> f64 {
        0.0
    }

    /// Rejects a nonzero bias; only the unbiased model is supported.
    pub fn check_bias(epsilon: f64) -> Result<()> {
        if epsilon == 0.0 {
            Ok(())
        } else {
            Err(Error::Domain { what: "epsilon (only zero bias is supported)", value: epsilon })
        }
    }

    /// `2πα ω_c^{1-s}`, the prefactor of `ω^s` in `J`.
    pub(crate) fn prefactor(&self) -> f64 {
        2.0 * PI * self.alpha * math::powf(self.omega_c, 1.0 - self.s)
    }
}

/// `J(ω) = 2πα ω_c^{1-s} ω^s Θ(ω_c - ω)`.
pub fn spectral_density(p: &BathParams, omega: f64) -> Result<f64> {
    if !(omega >= 0.0) {
        return Err(Error::Domain { what: "omega", value: omega });
    }
    if omega > p.omega_c {
        return Ok(0.0);
    }
    Ok(p.prefactor() * math::powf(omega, p.s))
}

/// `∫₀^{ω_c} J(ω)/(ω+shift)ⁿ dω` for `n ∈ {1, 2}`.
///
/// Divergent combinations (`shift = 0` with `n ≥ s + 1`) return `+∞`, which
/// callers use as a threshold sentinel.
pub fn moment_integral(p: &BathParams, shift: f64, n: u32) -> Result<f64> {
    if !(shift >= 0.0) {
        return Err(Error::Domain { what: "shift", value: shift });
    }
    if n != 1 && n != 2 {
        return Err(Error::Argument("moment power must be 1 or 2"));
    }
    if p.alpha == 0.0 {
        return Ok(0.0);
    }
    if shift == 0.0 {
        if n == 1 {
            return Ok(2.0 * PI * p.alpha * p.omega_c / p.s);
        }
        let e = quad::power_law(p.s - 2.0, &|_| 1.0, p.omega_c, None, REL_TOL)?;
        return Ok(p.prefactor() * e.value);
    }
    let g = |w: f64| {
        let inv = 1.0 / (w + shift);
        if n == 1 { inv } else { inv * inv }
    };
    let e = quad::power_law(p.s, &g, p.omega_c, Some(shift), REL_TOL)?;
    Ok(p.prefactor() * e.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Linear,
    Logarithmic,
}

/// Lowest log-bin edge, relative to `ω_c`.
pub const LOG_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub omega: f64,
    /// Coupling amplitude `g_k`, with `g_k² = (1/π)∫_bin J`.
    pub g: f64,
}

/// A finite set of bath modes standing in for the continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    pub modes: Vec<Mode>,
    pub scheme: Scheme,
    /// Coupling strength the `g_k` were computed for.
    pub alpha: f64,
}

impl DiscretizedBath {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `Σ_k g_k² X(ω_k)`, the discrete stand-in for `(1/π)∫ J X dω`.
    /// Amplitude rescaling `√(α/α_bath)` that maps these couplings to strength `alpha`.
    pub fn coupling_scale(&self, alpha: f64) -> f64 {
        math::sqrt(self.strength_ratio(alpha))
    }

    /// `α/α_bath`, the factor applied to `g_k²`.
    pub fn strength_ratio(&self, alpha: f64) -> f64 {
        if alpha == self.alpha {
            1.0
        } else {
            debug_assert!(self.alpha > 0.0, "cannot rescale a decoupled bath");
            alpha / self.alpha
        }
    }

    pub fn weighted_sum<F: Fn(f64) -> f64>(&self, x: F) -> f64 {
        self.modes.iter().map(|m| m.g * m.g * x(m.omega)).sum()
    }
}

// b^p - a^p without cancellation for narrow bins
fn pow_diff(a: f64, b: f64, p: f64) -> f64 {
    if a == 0.0 {
        math::powf(b, p)
    } else {
        math::powf(a, p) * libm::expm1(p * math::ln(b / a))
    }
}

/// Splits `(0, ω_c]` into `n_modes` bins and places one mode per bin at its
/// `J`-weighted centroid, with `g_k² = (1/π)∫_bin J(ω) dω`.
///
/// Logarithmic bins span `[ω_c·10⁻⁶, ω_c]` with equal log-width; the first bin is
/// extended down to zero so no spectral weight is dropped, its mode held at the floor.
pub fn discretize(p: &BathParams, n_modes: usize, scheme: Scheme) -> Result<DiscretizedBath> {
    if n_modes == 0 {
        return Err(Error::Argument("n_modes must be at least 1"));
    }
    let wc = p.omega_c;
    let edge = |i: usize| -> f64 {
        if i == 0 {
            return 0.0;
        }
        if i == n_modes {
            return wc;
        }
        match scheme {
            Scheme::Linear => wc * i as f64 / n_modes as f64,
            Scheme::Logarithmic => {
                wc * LOG_FLOOR * math::powf(1.0 / LOG_FLOOR, i as f64 / n_modes as f64)
            }
        }
    };
    let s = p.s;
    let modes = (0..n_modes)
        .map(|i| {
            let (a, b) = (edge(i), edge(i + 1));
            let m1 = pow_diff(a, b, s + 1.0) / (s + 1.0);
            let m2 = pow_diff(a, b, s + 2.0) / (s + 2.0);
            let weight = p.prefactor() * m1 / PI;
            let mut omega = m2 / m1;
            if i == 0 && scheme == Scheme::Logarithmic {
                omega = omega.max(wc * LOG_FLOOR);
            }
            Mode { omega, g: math::sqrt(weight) }
        })
        .collect();
    Ok(DiscretizedBath { modes, scheme, alpha: p.alpha })
}

/// Uniform time grid `t_i = i·dt`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub len: usize,
}

impl TimeGrid {
    /// Grid covering `[0, t_max]` with step `dt` (the last point is at or just past `t_max`).
    pub fn new(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain { what: "dt", value: dt });
        }
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::Domain { what: "t_max", value: t_max });
        }
        let steps = math::ceil(t_max / dt - 1e-9).max(0.0) as usize;
        Ok(TimeGrid { dt, len: steps + 1 })
    }

    pub fn t_max(&self) -> f64 {
        self.dt * (self.len - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        self.dt * i as f64
    }
}

/// Fixed quadrature rule for `∫₀^{ω_c} ω^s φ(ω) dω` with `φ` smooth on the scale
/// `scale` and oscillating no faster than `e^{-iω t_max}`.
#[derive(Debug, Clone)]
pub(crate) struct SpectralRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const RULE_ORDER: usize = 10;

impl SpectralRule {
    pub fn new(s: f64, omega_c: f64, t_max: f64, scale: Option<f64>, refine: usize) -> Self {
        let (gx, gw) = quad::gauss_legendre(RULE_ORDER);
        let width = (PI / t_max.max(1e-300)).min(omega_c / 32.0) / refine as f64;
        let low = scale.map_or(width, |d| d.min(width));
        let e_min = 1e-4 * low;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();

        // head panel [0, e_min]: ω = e_min u^{1/(s+1)} absorbs ω^s
        let sp1 = s + 1.0;
        let head = math::powf(e_min, sp1) / sp1;
        for (x, w) in gx.iter().zip(&gw) {
            let u = 0.5 * (x + 1.0);
            nodes.push(e_min * math::powf(u, 1.0 / sp1));
            weights.push(head * 0.5 * w);
        }
        let push_panel = |a: f64, b: f64, nodes: &mut Vec<f64>, weights: &mut Vec<f64>| {
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gx.iter().zip(&gw) {
                let om = c + h * x;
                nodes.push(om);
                weights.push(h * w * math::powf(om, s));
            }
        };
        // geometric grading up to the first full-width panel
        let mut lo = e_min;
        while lo < width.min(omega_c) {
            let hi = (2.0 * lo).min(width).min(omega_c);
            push_panel(lo, hi, &mut nodes, &mut weights);
            lo = hi;
        }
        let remaining = omega_c - lo;
        if remaining > 0.0 {
            let count = math::ceil(remaining / width).max(1.0) as usize;
            let step = remaining / count as f64;
            for i in 0..count {
                let a = lo + step * i as f64;
                let b = if i + 1 == count { omega_c } else { a + step };
                push_panel(a, b, &mut nodes, &mut weights);
            }
        }
        SpectralRule { nodes, weights }
    }
}

/// Memory kernel samples `k(t_i)` for `t_i ≥ 0`; `k(-t) = conj(k(t))`.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub dt: f64,
    pub values: Vec<Complex64>,
    pub which: ModelKind,
    /// Largest discrepancy seen between the production rule and an independent
    /// reference (adaptive quadrature at `t = 0`, a refined rule at `t_max`).
    pub achieved_tolerance: f64,
}

impl KernelTable {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| i as f64 * self.dt)
    }
}

fn rule_sum(model: &EffectiveModel, rule: &SpectralRule, t: f64) -> Complex64 {
    let pref = 2.0 * model.params.alpha * math::powf(model.params.omega_c, 1.0 - model.params.s);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .fold(Complex64::new(0.0, 0.0), |acc, (&w, &wt)| {
            acc + math::cis(-w * t) * (wt * model.coupling_weight(w))
        })
        * pref
}

/// `k(t) = (1/π)∫₀^{ω_c} K(ω) e^{-iωt} dω` on the grid, where `K` is the model's
/// coupling spectral function. For the RWA model (`K = J/4`) this is the
/// familiar `(1/4π)∫ J(ω) e^{-iωt} dω`.
///
/// The frequency axis is cut into panels no wider than `π/t_max` so every panel
/// sees at most half an oscillation; phases are advanced by recurrence and
/// resynchronized every 512 steps.
pub fn memory_kernel(model: &EffectiveModel, grid: TimeGrid) -> Result<KernelTable> {
    let p = &model.params;
    let t_max = grid.t_max();
    let rule = SpectralRule::new(p.s, p.omega_c, t_max, model.scale(), 1);
    let pref = 2.0 * p.alpha * math::powf(p.omega_c, 1.0 - p.s);
    let amp: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&w, &wt)| pref * wt * model.coupling_weight(w))
        .collect();
    let m = rule.nodes.len();
    let mut re = alloc::vec![0.0; m];
    let mut im = alloc::vec![0.0; m];
    let mut rot_re = alloc::vec![0.0; m];
    let mut rot_im = alloc::vec![0.0; m];
    for j in 0..m {
        let r = math::cis(-rule.nodes[j] * grid.dt);
        rot_re[j] = r.re;
        rot_im[j] = r.im;
    }
    let mut values = Vec::with_capacity(grid.len);
    for i in 0..grid.len {
        if i % 512 == 0 {
            let t = grid.time(i);
            for j in 0..m {
                let z = math::cis(-rule.nodes[j] * t);
                re[j] = z.re;
                im[j] = z.im;
            }
        }
        let (mut sr, mut si) = (0.0, 0.0);
        for j in 0..m {
            sr += amp[j] * re[j];
            si += amp[j] * im[j];
            let nr = re[j] * rot_re[j] - im[j] * rot_im[j];
            let ni = re[j] * rot_im[j] + im[j] * rot_re[j];
            re[j] = nr;
            im[j] = ni;
        }
        values.push(Complex64::new(sr, si));
    }

    // accuracy: t = 0 against adaptive quadrature, t_max against a refined rule
    let k0 = model.integral(0.0, &|_| 1.0, None)?.value;
    let mut achieved = (values[0].re - k0).abs() + values[0].im.abs();
    if grid.len > 1 {
        let fine = SpectralRule::new(p.s, p.omega_c, t_max, model.scale(), 2);
        let reference = rule_sum(model, &fine, t_max);
        achieved = achieved.max(math::cabs(values[grid.len - 1] - reference));
    }
    if achieved > 1e-8 * k0.max(f64::MIN_POSITIVE) && achieved > 1e-14 {
        return Err(Error::Quadrature { achieved, requested: 1e-8 });
    }
    Ok(KernelTable { dt: grid.dt, values, which: model.kind, achieved_tolerance: achieved })
}

/// Integral estimate of `∫₀^{ω_c} ω^{s+extra} h(ω) dω` (no prefactor); shared
/// by the model-level integrals.
pub(crate) fn raw_power_integral<H: Fn(f64) -> f64>(
    p: &BathParams,
    extra: f64,
    h: &H,
    scale: Option<f64>,
) -> Result<Estimate> {
    quad::power_law(p.s + extra, h, p.omega_c, scale, REL_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, s: f64) -> BathParams {
        BathParams::scaled(alpha, s, 0.02).unwrap()
    }

    #[test]
    fn spectral_density_values() {
        let j = spectral_density(&p(0.1, 1.0), 0.5).unwrap();
        assert!((j - 0.1 * PI).abs() < 1e-15);
        assert_eq!(spectral_density(&p(0.3, 0.4), 1.5).unwrap(), 0.0);
        let j = spectral_density(&p(0.028, 0.7), 0.01).unwrap();
        assert!((j - 2.0 * PI * 0.028 * 0.01f64.powf(0.7)).abs() < 1e-15);
        assert!((j - 7.004e-3).abs() < 1e-6);
        assert!(spectral_density(&p(0.1, 1.0), -1e-3).is_err());
    }

    #[test]
    fn moment_closed_forms() {
        let m = moment_integral(&p(0.028, 0.7), 0.0, 1).unwrap();
        assert!((m - 0.251_327_412_287_183_5).abs() < 1e-12);
        let m = moment_integral(&p(0.1, 1.0), 0.0, 1).unwrap();
        assert!((m - 0.2 * PI).abs() < 1e-14);
        assert!(moment_integral(&p(0.1, 0.7), 0.0, 2).unwrap().is_infinite());
        assert!(moment_integral(&p(0.1, 1.0), 0.0, 2).unwrap().is_infinite());
        assert!(moment_integral(&p(0.1, 0.7), 0.1, 3).is_err());
    }

    #[test]
    fn moment_quadrature_matches_closed_form_route() {
        // shift=0, n=1 by quadrature vs closed form
        let q = p(0.05, 0.3);
        let e = raw_power_integral(&q, -1.0, &|_| 1.0, None).unwrap().value * q.prefactor();
        let closed = moment_integral(&q, 0.0, 1).unwrap();
        assert!((e - closed).abs() < 1e-10 * closed);
        // super-Ohmic n=2 at zero shift is finite: ∫ω^{s-2} = 1/(s-1)
        let q = p(0.05, 1.5);
        let m = moment_integral(&q, 0.0, 2).unwrap();
        assert!((m - q.prefactor() / 0.5).abs() < 1e-10 * m);
    }

    #[test]
    fn single_linear_mode() {
        let bath = discretize(&p(0.3, 1.0), 1, Scheme::Linear).unwrap();
        assert_eq!(bath.len(), 1);
        assert!((bath.modes[0].g.powi(2) - 0.3).abs() < 1e-14);
        assert!((bath.modes[0].omega - 2.0 / 3.0).abs() < 1e-14);
        assert!(discretize(&p(0.3, 1.0), 0, Scheme::Linear).is_err());
    }

    #[test]
    fn log_floor_respected() {
        let bath = discretize(&p(0.1, 0.5), 400, Scheme::Logarithmic).unwrap();
        assert!(bath.modes[0].omega >= LOG_FLOOR);
        assert!(bath.modes.windows(2).all(|w| w[0].omega < w[1].omega));
        assert!(bath.modes.last().unwrap().omega <= 1.0);
    }

    #[test]
    fn time_grid_covers_t_max() {
        let g = TimeGrid::new(10.0, 0.02).unwrap();
        assert_eq!(g.len, 501);
        assert!((g.t_max() - 10.0).abs() < 1e-12);
    }
}
