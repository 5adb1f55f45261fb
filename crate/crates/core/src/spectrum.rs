//! Bound state of the single-excitation sector and the quantum phase transition
//! it drives.
//!
//! With binding energy `x = -(E₁ + Δ_eff/2) ≥ 0` the eigenvalue condition
//! `y(E₁) = E₁` becomes `Δ_eff + x = (1/π)∫ K(ω)/(ω+x) dω`, whose left side grows and
//! right side falls with `x`. A root exists iff `(1/π)∫ K/ω ≥ Δ_eff`.

use alloc::vec::Vec;

use crate::arrowhead;
use crate::bath::{BathParams, DiscretizedBath};
use crate::math;
use crate::model::{EffectiveModel, ModelKind};
use crate::polaron;
use crate::roots;
use crate::{Error, Result};

/// `|threshold margin|` below which a model counts as sitting exactly at `α_C`.
pub const THRESHOLD_TOL: f64 = 1e-12;
/// Residual target `|y(E₁) - E₁|` of the bound-state solve, in units of `ω_c`.
pub const ROOT_TOL: f64 = 1e-12;
/// Bisection tolerance in `α` for critical couplings.
pub const CRITICAL_TOL: f64 = 1e-9;
/// Fidelity step used in the reference figures.
pub const DEFAULT_DALPHA: f64 = 0.0005;
/// Finite-difference step for `dE_g/dα`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Bath size for the discretized fidelity overlap.
pub const FIDELITY_MODES: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub e1: f64,
    /// `x = -(E₁ + Δ_eff/2) ≥ 0`.
    pub binding: f64,
    /// Excited-component weight `|d₀|² = [1 + (1/π)∫ K/(ω+x)²]⁻¹`; zero at a threshold
    /// where that integral diverges.
    pub d0_sq: f64,
}

impl BoundState {
    /// Amplitudes `(d₀, d_k)` on a discretized bath, normalized in the discrete
    /// representation.
    pub fn amplitudes(&self, model: &EffectiveModel, bath: &DiscretizedBath) -> Vec<f64> {
        let disc = model.discretize(bath);
        arrowhead::eigenvector(&disc, -self.binding)
    }
}

/// `y(E) = Δ_eff/2 - (1/π)∫ K(ω)/(ω - (E + Δ_eff/2)) dω` for `E < -Δ_eff/2`.
pub fn level_shift(model: &EffectiveModel, e: f64) -> Result<f64> {
    let x = -(e + 0.5 * model.delta_eff);
    if !(x > 0.0) {
        return Err(Error::Domain { what: "energy (must lie below -Δ_eff/2)", value: e });
    }
    Ok(0.5 * model.delta_eff - shifted_integral(model, x)?)
}

/// Limit of [`level_shift`] as `E → -Δ_eff/2` from below: `Δ_eff/2 - (1/π)∫ K/ω`.
pub fn level_shift_at_threshold(model: &EffectiveModel) -> Result<f64> {
    Ok(0.5 * model.delta_eff - model.integral(-1.0, &|_| 1.0, None)?.value)
}

fn shifted_integral(model: &EffectiveModel, x: f64) -> Result<f64> {
    Ok(model.integral(0.0, &|w: f64| 1.0 / (w + x), Some(x))?.value)
}

/// `(1/π)∫ K/ω - Δ_eff`: nonnegative iff a bound state exists.
pub fn threshold_margin(model: &EffectiveModel) -> Result<f64> {
    Ok(model.integral(-1.0, &|_| 1.0, None)?.value - model.delta_eff)
}

fn excited_weight(model: &EffectiveModel, x: f64) -> Result<f64> {
    let norm = if x == 0.0 {
        model.integral(-2.0, &|_| 1.0, None)?.value
    } else {
        model.integral(0.0, &|w: f64| 1.0 / ((w + x) * (w + x)), Some(x))?.value
    };
    Ok(if norm.is_infinite() { 0.0 } else { 1.0 / (1.0 + norm) })
}

/// Solves for the bound state below the continuum edge, if one exists.
pub fn bound_state(model: &EffectiveModel) -> Result<Option<BoundState>> {
    let margin = threshold_margin(model)?;
    let edge = -0.5 * model.delta_eff;
    if margin < -THRESHOLD_TOL {
        return Ok(None);
    }
    if margin <= THRESHOLD_TOL {
        return Ok(Some(BoundState { e1: edge, binding: 0.0, d0_sq: excited_weight(model, 0.0)? }));
    }
    let h = |x: f64| -> Result<f64> { Ok(model.delta_eff + x - shifted_integral(model, x)?) };
    let mut hi = model.delta_eff.max(1e-6 * model.params.omega_c);
    while h(hi)? <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoBracket { what: "bound-state energy", last: hi });
        }
    }
    let root = roots::bisect(h, 0.0, hi, 0.0, ROOT_TOL * model.params.omega_c, 400)?;
    let x = root.x;
    Ok(Some(BoundState { e1: edge - x, binding: x, d0_sq: excited_weight(model, x)? }))
}

/// Sign with which the polaron constant `C` enters the ground-state energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftConvention {
    /// `E_g = -ηΔ/2 + C` or `E₁ + C`, as the transformed Hamiltonian carries `+C`.
    #[default]
    Hamiltonian,
    /// `E_g = -ηΔ/2 - C` or `E₁ - C`.
    Flipped,
}

impl ShiftConvention {
    fn apply(self, c: f64) -> f64 {
        match self {
            ShiftConvention::Hamiltonian => c,
            ShiftConvention::Flipped => -c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Ground state `|-, {0_k}⟩` with energy `-Δ_eff/2`.
    NoBound,
    /// Ground state is the bound state.
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub phase: Phase,
    pub energy: f64,
    pub bound: Option<BoundState>,
}

pub fn ground_state(model: &EffectiveModel, convention: ShiftConvention) -> Result<GroundState> {
    let bound = bound_state(model)?;
    let offset = convention.apply(model.shift);
    Ok(match bound {
        Some(b) => GroundState { phase: Phase::Bound, energy: b.e1 + offset, bound },
        None => GroundState { phase: Phase::NoBound, energy: -0.5 * model.delta_eff + offset, bound },
    })
}

/// Lowest energy of the discretized effective Hamiltonian, constant included:
/// `min(-Δ_eff/2, λ_min - Δ_eff/2) + C_disc`, with `C_disc` the discrete displacement sum.
pub fn discrete_ground_energy(
    model: &EffectiveModel,
    bath: &DiscretizedBath,
    convention: ShiftConvention,
) -> Result<f64> {
    let low = arrowhead::lowest(&model.discretize(bath))?;
    let c = match model.kind {
        ModelKind::Rwa => 0.0,
        ModelKind::Polaron => polaron::discrete_displacement(&model.params, bath, model.eta),
    };
    Ok(low.value.min(0.0) - 0.5 * model.delta_eff + convention.apply(c))
}

/// A one-parameter family of models with `α` free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelFamily {
    pub params: BathParams,
    pub kind: ModelKind,
    pub convention: ShiftConvention,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub alpha: f64,
    /// Bisection estimate of the existence boundary.
    pub bisection: f64,
    /// `2sΔ/ω_c` for the RWA family.
    pub closed_form: Option<f64>,
}

impl ModelFamily {
    pub fn new(params: BathParams, kind: ModelKind) -> Self {
        ModelFamily { params, kind, convention: ShiftConvention::Hamiltonian }
    }

    pub fn model_at(&self, alpha: f64) -> Result<EffectiveModel> {
        let p = self.params.with_alpha(alpha)?;
        match self.kind {
            ModelKind::Rwa => Ok(EffectiveModel::rwa(p)),
            ModelKind::Polaron => polaron::polaron_model(&p),
        }
    }

    pub fn ground_state(&self, alpha: f64) -> Result<GroundState> {
        ground_state(&self.model_at(alpha)?, self.convention)
    }

    fn no_bound_energy(&self, alpha: f64) -> Result<f64> {
        let m = self.model_at(alpha)?;
        Ok(-0.5 * m.delta_eff + self.convention.apply(m.shift))
    }

    /// Coupling at which the bound state appears.
    ///
    /// RWA: `2sΔ/ω_c`, cross-checked against a bisection of the existence criterion
    /// (evaluated by quadrature) to `10⁻⁶` relative. Polaron: bisection of
    /// `(1/π)∫ K_polaron/ω = ηΔ` with `η(α)` solved at every step.
    pub fn critical_alpha(&self) -> Result<CriticalPoint> {
        let margin = |alpha: f64| -> Result<f64> { threshold_margin(&self.model_at(alpha)?) };
        let p = &self.params;
        let mut hi = 2.0 * p.s * p.delta / p.omega_c;
        while margin(hi)? < 0.0 {
            hi *= 1.5;
            if hi > 1e3 {
                return Err(Error::NoBracket { what: "critical coupling", last: hi });
            }
        }
        let root = roots::bisect(margin, 0.0, hi, CRITICAL_TOL * hi.max(1e-3), 0.0, 400)?;
        let bisection = if root.f >= 0.0 { root.x } else { root.hi };
        match self.kind {
            ModelKind::Rwa => {
                let closed = 2.0 * p.s * p.delta / p.omega_c;
                if (bisection - closed).abs() > 1e-6 * closed {
                    return Err(Error::Inconsistent { what: "RWA critical coupling", a: closed, b: bisection });
                }
                Ok(CriticalPoint { alpha: closed, bisection, closed_form: Some(closed) })
            }
            ModelKind::Polaron => Ok(CriticalPoint { alpha: bisection, bisection, closed_form: None }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyDerivative {
    Smooth(f64),
    /// The stencil straddled `α_C`; one-sided slopes on each branch.
    Jump { alpha_c: f64, left: f64, right: f64, jump: f64 },
}

impl EnergyDerivative {
    /// Central value, or the mean of the one-sided slopes at a jump.
    pub fn value(&self) -> f64 {
        match *self {
            EnergyDerivative::Smooth(d) => d,
            EnergyDerivative::Jump { left, right, .. } => 0.5 * (left + right),
        }
    }
}

/// Central finite difference of `E_g(α)` with step `h`.
///
/// When `α ± h` fall in different phases the stencil straddles `α_C`: with `detect`
/// the critical point is located and one-sided slopes are returned, otherwise
/// [`Error::Straddle`].
pub fn energy_derivative(family: &ModelFamily, alpha: f64, h: f64, detect: bool) -> Result<EnergyDerivative> {
    let lo = family.ground_state(alpha - h)?;
    let hi = family.ground_state(alpha + h)?;
    if lo.phase == hi.phase {
        return Ok(EnergyDerivative::Smooth((hi.energy - lo.energy) / (2.0 * h)));
    }
    if !detect {
        return Err(Error::Straddle { alpha, alpha_c: f64::NAN, h });
    }
    let alpha_c = family.critical_alpha()?.alpha;
    energy_derivative_at(family, alpha, h, alpha_c)
}

/// [`energy_derivative`] with a known critical coupling.
pub fn energy_derivative_at(
    family: &ModelFamily,
    alpha: f64,
    h: f64,
    alpha_c: f64,
) -> Result<EnergyDerivative> {
    if (alpha - alpha_c).abs() >= h {
        let lo = family.ground_state(alpha - h)?;
        let hi = family.ground_state(alpha + h)?;
        return Ok(EnergyDerivative::Smooth((hi.energy - lo.energy) / (2.0 * h)));
    }
    let at = family.no_bound_energy(alpha_c)?;
    let left = (at - family.ground_state(alpha_c - h)?.energy) / h;
    let right = (family.ground_state(alpha_c + h)?.energy - at) / h;
    Ok(EnergyDerivative::Jump { alpha_c, left, right, jump: right - left })
}

/// Ground-state fidelity `|⟨φ_g(α)|φ_g(α+δα)⟩|`.
///
/// Distinct phases are orthogonal (`⟨-,{0_k}|φ₁⟩ = 0`); two bound states are
/// overlapped as lowest eigenvectors of the discretized model on the shared `bath`.
pub fn ground_fidelity(family: &ModelFamily, alpha: f64, dalpha: f64, bath: &DiscretizedBath) -> Result<f64> {
    if dalpha == 0.0 {
        return Ok(1.0);
    }
    let a = family.ground_state(alpha)?;
    let b = family.ground_state(alpha + dalpha)?;
    match (a.phase, b.phase) {
        (Phase::NoBound, Phase::NoBound) => Ok(1.0),
        (Phase::NoBound, Phase::Bound) | (Phase::Bound, Phase::NoBound) => Ok(0.0),
        (Phase::Bound, Phase::Bound) => {
            let va = bound_vector(&family.model_at(alpha)?, bath)?;
            let vb = bound_vector(&family.model_at(alpha + dalpha)?, bath)?;
            let overlap: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
            Ok(overlap.abs().min(1.0))
        }
    }
}

fn bound_vector(model: &EffectiveModel, bath: &DiscretizedBath) -> Result<Vec<f64>> {
    let disc = model.discretize(bath);
    let low = arrowhead::lowest(&disc)?;
    Ok(arrowhead::eigenvector(&disc, low.value))
}

/// `-p ln p - (1-p) ln(1-p)` in nats.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * math::ln(q) };
    term(p) + term(1.0 - p)
}

/// Entanglement entropy between the two-level system and the bath in the ground
/// state (nats). The reduced density matrix is `diag(|d₀|², 1-|d₀|²)`.
pub fn entanglement_entropy(family: &ModelFamily, alpha: f64) -> Result<f64> {
    let g = family.ground_state(alpha)?;
    Ok(g.bound.map_or(0.0, |b| binary_entropy(b.d0_sq)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rwa(alpha: f64) -> EffectiveModel {
        EffectiveModel::rwa(BathParams::scaled(alpha, 0.7, 0.02).unwrap())
    }

    #[test]
    fn level_shift_limits() {
        let m = rwa(0.0);
        assert_eq!(level_shift(&m, -0.3).unwrap(), 0.01);
        let m = rwa(0.05);
        let far = level_shift(&m, -1e9).unwrap();
        assert!((far - 0.01).abs() < 1e-9);
        assert!(level_shift(&m, -0.01).is_err());
        assert!(level_shift(&m, 0.2).is_err());
    }

    #[test]
    fn threshold_value_at_critical_coupling() {
        let y = level_shift_at_threshold(&rwa(0.028)).unwrap();
        assert!((y + 0.01).abs() < 1e-12);
    }

    #[test]
    fn bound_state_regimes() {
        assert!(bound_state(&rwa(0.02)).unwrap().is_none());
        let at = bound_state(&rwa(0.028)).unwrap().unwrap();
        assert_eq!(at.e1, -0.01);
        assert_eq!(at.d0_sq, 0.0);
        let above = bound_state(&rwa(0.05)).unwrap().unwrap();
        assert!(above.e1 < -0.01);
        assert!(above.d0_sq > 0.0 && above.d0_sq < 1.0);
        let y = level_shift(&rwa(0.05), above.e1).unwrap();
        assert!((y - above.e1).abs() <= 1e-12);
    }

    #[test]
    fn entropy_is_maximal_at_half() {
        assert!((binary_entropy(0.5) - core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
    }

    #[test]
    fn derivative_straddle_needs_detector() {
        let fam = ModelFamily::new(BathParams::scaled(0.0, 0.7, 0.02).unwrap(), ModelKind::Rwa);
        assert!(matches!(energy_derivative(&fam, 0.028, 1e-4, false), Err(Error::Straddle { .. })));
        let d = energy_derivative(&fam, 0.028, 1e-4, true).unwrap();
        assert!(matches!(d, EnergyDerivative::Jump { .. }));
        let below = energy_derivative(&fam, 0.02, 1e-4, false).unwrap();
        assert_eq!(below, EnergyDerivative::Smooth(0.0));
    }
}
