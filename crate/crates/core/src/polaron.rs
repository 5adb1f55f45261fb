//! Zero-temperature variational polaron transformation.
//!
//! The displacement `ξ(ω) = ω/(ω+ηΔ)` minimizes the Bogoliubov bound, and the
//! renormalization factor obeys the self-consistency
//! `η = exp[-(1/2π)∫₀^{ω_c} J(ω)/(ω+ηΔ)² dω]`. Among the fixed points the one with
//! the lowest zero-temperature bound `E_B(η) = -ηΔ/2 + C(η)` is selected; `η = 0`
//! is the localized phase.

use alloc::vec::Vec;

use crate::bath::{self, BathParams, DiscretizedBath};
use crate::math::{self, PI};
use crate::model::EffectiveModel;
use crate::roots;
use crate::{Error, Result};

pub use crate::model::ModelKind;

/// Number of linearly spaced `η` samples on `(0, 1]` used to locate fixed points.
pub const ETA_GRID: usize = 10_000;
/// Logarithmic extension of the scan below the linear grid: decades covered and
/// samples per decade.
pub const ETA_LOG_FLOOR: f64 = 1e-100;
const ETA_LOG_PER_DECADE: usize = 20;

/// A self-consistent `η` and its bound energy relative to the `η = 0` state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub eta: f64,
    /// `E_B(η) - E_B(0) = -ηΔ/2 + C(η) - C(0)`.
    pub bound_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolaronSolution {
    pub eta: f64,
    /// Displacement energy `C = Σ_k (g_k²/4ω_k) ξ_k(ξ_k-2)` in continuum form; `≤ 0`.
    pub displacement_energy: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Every nontrivial fixed point located by the scan, ascending in `η`.
    pub fixed_points: Vec<FixedPoint>,
}

impl PolaronSolution {
    pub fn is_localized(&self) -> bool {
        self.eta == 0.0
    }

    /// Zero-temperature bound `E_B = -ηΔ/2 + C`.
    pub fn bound_energy(&self, p: &BathParams) -> f64 {
        -0.5 * self.eta * p.delta + self.displacement_energy
    }
}

/// `ξ(ω) = ω/(ω+ηΔ)`.
pub fn xi(omega: f64, eta: f64, p: &BathParams) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain { what: "omega", value: omega });
    }
    if !(eta >= 0.0) {
        return Err(Error::Domain { what: "eta", value: eta });
    }
    if omega.is_infinite() {
        return Ok(1.0);
    }
    Ok(omega / (omega + eta * p.delta))
}

/// Exponent of the self-consistency, `(1/2π)∫ J/(ω+ηΔ)² dω`.
fn eta_exponent(p: &BathParams, eta: f64) -> Result<f64> {
    if p.alpha == 0.0 {
        return Ok(0.0);
    }
    let d = eta * p.delta;
    let pref = p.prefactor() / (2.0 * PI);
    if d == 0.0 {
        let e = bath::raw_power_integral(p, -2.0, &|_| 1.0, None)?;
        return Ok(pref * e.value);
    }
    // cheap lower bound: (ω+d) ≤ 2ω on [d, ω_c]
    if d < p.omega_c {
        let (s, wc) = (p.s, p.omega_c);
        let lower = if (s - 1.0).abs() < 1e-12 {
            0.25 * math::ln(wc / d)
        } else {
            0.25 * (math::powf(d, s - 1.0) - math::powf(wc, s - 1.0)) / (1.0 - s)
        };
        if pref * lower > 750.0 {
            return Ok(f64::INFINITY);
        }
    }
    let g = |w: f64| {
        let inv = 1.0 / (w + d);
        inv * inv
    };
    Ok(pref * bath::raw_power_integral(p, 0.0, &g, Some(d))?.value)
}

/// Right-hand side of the self-consistency, `exp[-(1/2π)∫J/(ω+ηΔ)²]`.
pub fn eta_map(p: &BathParams, eta: f64) -> Result<f64> {
    Ok(math::exp(-eta_exponent(p, eta)?))
}

/// `C(η) - C(0) = (1/4π)∫ J(ω) (ηΔ)²/(ω(ω+ηΔ)²) dω ≥ 0`.
fn displacement_excess(p: &BathParams, eta: f64) -> Result<f64> {
    let d = eta * p.delta;
    if d == 0.0 || p.alpha == 0.0 {
        return Ok(0.0);
    }
    let g = |w: f64| {
        let r = d / (w + d);
        r * r
    };
    let e = bath::raw_power_integral(p, -1.0, &g, Some(d))?;
    Ok(p.prefactor() / (4.0 * PI) * e.value)
}

/// `C = (1/4π)∫₀^{ω_c} J(ω) ξ(ω)(ξ(ω)-2)/ω dω`.
///
/// Evaluated as `C(0) + [C(η) - C(0)]` with `C(0) = -αω_c/(2s)`, which keeps full
/// relative precision when `ηΔ` is tiny.
pub fn displacement_constant(p: &BathParams, eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain { what: "eta", value: eta });
    }
    let c0 = -p.alpha * p.omega_c / (2.0 * p.s);
    Ok(c0 + displacement_excess(p, eta)?)
}

fn scan_grid() -> Vec<f64> {
    let decades = -math::log10(ETA_LOG_FLOOR) - 4.0;
    let n_log = (decades as usize) * ETA_LOG_PER_DECADE;
    let mut grid = Vec::with_capacity(n_log + ETA_GRID);
    for i in 0..n_log {
        grid.push(ETA_LOG_FLOOR * math::powf(10.0, i as f64 / ETA_LOG_PER_DECADE as f64));
    }
    for i in 1..=ETA_GRID {
        grid.push(i as f64 / ETA_GRID as f64);
    }
    grid
}

/// Finds every fixed point of the `η` map and selects the one with the lowest
/// zero-temperature bound; returns `η = 0` (localized) when no nontrivial fixed
/// point wins.
pub fn solve_eta(p: &BathParams) -> Result<PolaronSolution> {
    if p.alpha == 0.0 {
        return Ok(PolaronSolution {
            eta: 1.0,
            displacement_energy: 0.0,
            converged: true,
            iterations: 0,
            fixed_points: alloc::vec![FixedPoint { eta: 1.0, bound_gap: -0.5 * p.delta }],
        });
    }
    let residual = |eta: f64| -> Result<f64> { Ok(eta - eta_map(p, eta)?) };
    let grid = scan_grid();
    let mut roots_found = Vec::new();
    let mut iterations = 0;
    let mut prev_eta = grid[0];
    let mut prev_r = residual(prev_eta)?;
    if prev_r == 0.0 {
        roots_found.push(prev_eta);
    }
    for &eta in &grid[1..] {
        let r = residual(eta)?;
        if r == 0.0 {
            roots_found.push(eta);
        } else if prev_r != 0.0 && r.signum() != prev_r.signum() {
            let root = roots::bisect(residual, prev_eta, eta, 4.0 * f64::EPSILON * eta, 1e-14, 400)?;
            iterations += root.iterations;
            roots_found.push(root.x);
        }
        prev_eta = eta;
        prev_r = r;
    }

    let mut fixed_points = Vec::with_capacity(roots_found.len());
    for &eta in &roots_found {
        let gap = -0.5 * eta * p.delta + displacement_excess(p, eta)?;
        fixed_points.push(FixedPoint { eta, bound_gap: gap });
    }
    // η = 0 is itself a fixed point whenever ∫J/ω² diverges (s ≤ 1)
    let zero_is_fixed = eta_map(p, 0.0)? == 0.0;
    let best = fixed_points
        .iter()
        .copied()
        .filter(|fp| !zero_is_fixed || fp.bound_gap < 0.0)
        .min_by(|a, b| a.bound_gap.total_cmp(&b.bound_gap));
    let eta = best.map_or(0.0, |fp| fp.eta);
    let converged = match best {
        Some(fp) => residual(fp.eta)?.abs() <= 1e-10,
        None => true,
    };
    Ok(PolaronSolution {
        eta,
        displacement_energy: displacement_constant(p, eta)?,
        converged,
        iterations,
        fixed_points,
    })
}

/// Effective RWA-like model of the transformed Hamiltonian: `Δ_eff = ηΔ` and
/// `K(ω) = (ηΔ)² J(ω)/(ω+ηΔ)²`.
pub fn effective_model(p: &BathParams, sol: &PolaronSolution) -> Result<EffectiveModel> {
    if sol.is_localized() {
        return Err(Error::Localized { alpha: p.alpha });
    }
    Ok(EffectiveModel::polaron(*p, sol.eta, sol.displacement_energy))
}

/// Solves for `η` and builds the effective model in one step.
pub fn polaron_model(p: &BathParams) -> Result<EffectiveModel> {
    effective_model(p, &solve_eta(p)?)
}

/// Resolution in `α` of [`delocalized_boundary`].
pub const BOUNDARY_RESOLUTION: f64 = 1e-4;

/// Largest `α` (to [`BOUNDARY_RESOLUTION`]) at which the selected solution is
/// still delocalized, for the `s`, `Δ`, `ω_c` of `p`.
pub fn delocalized_boundary(p: &BathParams) -> Result<f64> {
    let localized = |alpha: f64| -> Result<bool> { Ok(solve_eta(&p.with_alpha(alpha)?)?.is_localized()) };
    let mut lo = 0.0;
    let mut hi = 0.25;
    while !localized(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NoBracket { what: "localization boundary", last: hi });
        }
    }
    while hi - lo > BOUNDARY_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if localized(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Discretized zero-temperature bound
/// `E_B({ξ_k}) = -ηΔ/2 + Σ_k (g_k²/4ω_k) ξ_k(ξ_k-2)` with
/// `η = exp[-Σ_k g_k² ξ_k²/(2ω_k²)]`.
pub fn discrete_bound(p: &BathParams, bath: &DiscretizedBath, xi: &[f64]) -> f64 {
    let r2 = bath.strength_ratio(p.alpha);
    let mut exponent = 0.0;
    let mut c = 0.0;
    for (m, &x) in bath.modes.iter().zip(xi) {
        let g2 = r2 * m.g * m.g;
        exponent += g2 * x * x / (2.0 * m.omega * m.omega);
        c += g2 / (4.0 * m.omega) * x * (x - 2.0);
    }
    -0.5 * p.delta * math::exp(-exponent) + c
}

/// Discrete displacement energy `Σ_k (g_k²/4ω_k) ξ_k(ξ_k-2)` with `ξ_k = ω_k/(ω_k+ηΔ)`.
pub fn discrete_displacement(p: &BathParams, bath: &DiscretizedBath, eta: f64) -> f64 {
    let d = eta * p.delta;
    let r2 = bath.strength_ratio(p.alpha);
    r2 * bath.weighted_sum(|w| {
        let x = w / (w + d);
        x * (x - 2.0) / (4.0 * w)
    })
}

/// Largest central finite difference `|∂E_B/∂ξ_k|` (step `10⁻⁶`) at the given `ξ`.
pub fn bound_gradient(p: &BathParams, bath: &DiscretizedBath, xi: &[f64]) -> f64 {
    const STEP: f64 = 1e-6;
    let mut work = xi.to_vec();
    let mut worst: f64 = 0.0;
    for k in 0..xi.len() {
        work[k] = xi[k] + STEP;
        let up = discrete_bound(p, bath, &work);
        work[k] = xi[k] - STEP;
        let down = discrete_bound(p, bath, &work);
        work[k] = xi[k];
        worst = worst.max(((up - down) / (2.0 * STEP)).abs());
    }
    worst
}

/// Self-consistent `η` of the discretized bath nearest to `guess`.
pub fn discrete_eta(p: &BathParams, bath: &DiscretizedBath, guess: f64) -> Result<f64> {
    let residual = |eta: f64| -> Result<f64> {
        let d = eta * p.delta;
        let e: f64 = bath.strength_ratio(p.alpha) * bath.weighted_sum(|w| 0.5 / ((w + d) * (w + d)));
        Ok(eta - math::exp(-e))
    };
    let mut width = 1e-3;
    loop {
        let lo = (guess * (1.0 - width)).max(0.0);
        let hi = (guess * (1.0 + width)).min(1.0);
        let (rl, rh) = (residual(lo)?, residual(hi)?);
        if rl == 0.0 {
            return Ok(lo);
        }
        if rh == 0.0 {
            return Ok(hi);
        }
        if rl.signum() != rh.signum() {
            return Ok(roots::bisect(residual, lo, hi, 4.0 * f64::EPSILON * hi, 0.0, 400)?.x);
        }
        if width >= 1.0 {
            return Err(Error::NoBracket { what: "discrete eta", last: guess });
        }
        width = (width * 4.0).min(1.0);
    }
}

/// Stationarity check of the displacement `ξ_k = ω_k/(ω_k+ηΔ)`: the largest
/// finite-difference gradient of the discretized bound, with `η` made
/// self-consistent on the discretized bath.
pub fn variational_gradient_check(
    p: &BathParams,
    bath: &DiscretizedBath,
    sol: &PolaronSolution,
) -> Result<f64> {
    if sol.is_localized() {
        return Err(Error::Localized { alpha: p.alpha });
    }
    let eta = if p.alpha == 0.0 { 1.0 } else { discrete_eta(p, bath, sol.eta)? };
    let xi: Vec<f64> = bath.modes.iter().map(|m| m.omega / (m.omega + eta * p.delta)).collect();
    Ok(bound_gradient(p, bath, &xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::Scheme;

    fn p(alpha: f64) -> BathParams {
        BathParams::scaled(alpha, 0.7, 0.02).unwrap()
    }

    #[test]
    fn xi_limits() {
        let q = p(0.05);
        assert_eq!(xi(0.3, 0.0, &q).unwrap(), 1.0);
        assert!((xi(0.01, 0.5, &q).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(xi(f64::INFINITY, 0.5, &q).unwrap(), 1.0);
        assert!(xi(0.0, 0.5, &q).is_err());
        assert!(xi(-1.0, 0.5, &q).is_err());
    }

    #[test]
    fn zero_coupling_is_unrenormalized() {
        let sol = solve_eta(&p(0.0)).unwrap();
        assert_eq!(sol.eta, 1.0);
        assert_eq!(displacement_constant(&p(0.0), 0.3).unwrap(), 0.0);
    }

    #[test]
    fn deep_coupling_localizes() {
        let sol = solve_eta(&p(2.0)).unwrap();
        assert_eq!(sol.eta, 0.0);
        assert!(effective_model(&p(2.0), &sol).is_err());
    }

    #[test]
    fn displacement_at_zero_eta() {
        let c = displacement_constant(&p(0.05), 0.0).unwrap();
        assert!((c + 0.05 / 1.4).abs() < 1e-15);
        assert!((c + 0.035_714_3).abs() < 1e-7);
    }

    #[test]
    fn fixed_point_residual_and_sign_of_c() {
        let q = p(0.05);
        let sol = solve_eta(&q).unwrap();
        assert!(sol.converged);
        assert!(sol.eta > 0.0 && sol.eta < 1.0);
        assert!((sol.eta - eta_map(&q, sol.eta).unwrap()).abs() <= 1e-10);
        assert!(sol.displacement_energy <= 0.0);
    }

    #[test]
    fn gradient_not_stationary_at_unit_xi() {
        // super-Ohmic so η stays finite at ξ = 1
        let q = BathParams::scaled(0.05, 1.5, 0.02).unwrap();
        let bath = bath::discretize(&q, 100, Scheme::Logarithmic).unwrap();
        let ones = alloc::vec![1.0; 100];
        assert!(bound_gradient(&q, &bath, &ones) > 1e-6);
        let free = p(0.0);
        let bath0 = bath::discretize(&free, 100, Scheme::Logarithmic).unwrap();
        assert_eq!(bound_gradient(&free, &bath0, &ones), 0.0);
        assert_eq!(discrete_bound(&free, &bath0, &ones), -0.01);
    }
}
