//! The effective single-excitation model shared by the RWA and polaron treatments.
//!
//! Both reduce to `H = (Δ_eff/2)σ_z + Σ ω_k b_k†b_k + Σ c_k(σ_+ b_k + σ_- b_k†) + C`
//! with continuum couplings `Σ_k c_k² X(ω_k) = (1/π)∫ K(ω) X(ω) dω`:
//!
//! * RWA: `Δ_eff = Δ`, `c_k = g_k/2`, `K = J/4`, `C = 0`.
//! * polaron: `Δ_eff = ηΔ`, `c_k = ν_k = ηΔ g_k/(ω_k+ηΔ)`, `K = (ηΔ)² J/(ω+ηΔ)²`.

use alloc::vec::Vec;

use crate::bath::{self, BathParams, DiscretizedBath};
use crate::math::PI;
use crate::quad::Estimate;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Rwa,
    Polaron,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Rwa => "rwa",
            ModelKind::Polaron => "polaron",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveModel {
    pub params: BathParams,
    pub kind: ModelKind,
    /// Renormalization factor; exactly 1 for the RWA model.
    pub eta: f64,
    pub delta_eff: f64,
    /// Constant energy `C` of the transformed Hamiltonian (0 for RWA).
    pub shift: f64,
}

impl EffectiveModel {
    pub fn rwa(params: BathParams) -> Self {
        EffectiveModel { params, kind: ModelKind::Rwa, eta: 1.0, delta_eff: params.delta, shift: 0.0 }
    }

    pub(crate) fn polaron(params: BathParams, eta: f64, shift: f64) -> Self {
        EffectiveModel {
            params,
            kind: ModelKind::Polaron,
            eta,
            delta_eff: eta * params.delta,
            shift,
        }
    }

    /// `K(ω)/J(ω)`.
    #[inline]
    pub fn coupling_weight(&self, omega: f64) -> f64 {
        match self.kind {
            ModelKind::Rwa => 0.25,
            ModelKind::Polaron => {
                let r = self.delta_eff / (omega + self.delta_eff);
                r * r
            }
        }
    }

    /// The coupling spectral function `K(ω)`; zero above the cutoff.
    pub fn coupling_spectrum(&self, omega: f64) -> Result<f64> {
        Ok(bath::spectral_density(&self.params, omega)? * self.coupling_weight(omega))
    }

    /// Frequency scale below which `K/J` varies (`ηΔ` for the polaron model).
    pub fn scale(&self) -> Option<f64> {
        match self.kind {
            ModelKind::Rwa => None,
            ModelKind::Polaron => Some(self.delta_eff),
        }
    }

    /// `(1/π)∫₀^{ω_c} K(ω) ω^{extra} h(ω) dω`; `scale` marks where `h` varies.
    ///
    /// Returns `+∞` when the integrand is not integrable at the origin.
    pub fn integral<H: Fn(f64) -> f64>(
        &self,
        extra: f64,
        h: &H,
        scale: Option<f64>,
    ) -> Result<Estimate> {
        if self.params.alpha == 0.0 {
            return Ok(Estimate::ZERO);
        }
        let scale = match (self.scale(), scale) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let g = |w: f64| self.coupling_weight(w) * h(w);
        let e = bath::raw_power_integral(&self.params, extra, &g, scale)?;
        Ok(e.scale(self.params.prefactor() / PI))
    }

    /// Mode couplings `c_k` of this model on a discretized bath.
    ///
    /// The bath may have been built for another `α` (same `s`, `ω_c`); its couplings
    /// are rescaled to this model's strength.
    pub fn discretize(&self, bath: &DiscretizedBath) -> DiscreteModel {
        let scale = bath.coupling_scale(self.params.alpha);
        let couplings = bath
            .modes
            .iter()
            .map(|m| {
                let g = scale * m.g;
                match self.kind {
                    ModelKind::Rwa => 0.5 * g,
                    ModelKind::Polaron => self.delta_eff * g / (m.omega + self.delta_eff),
                }
            })
            .collect();
        DiscreteModel {
            delta_eff: self.delta_eff,
            omegas: bath.modes.iter().map(|m| m.omega).collect(),
            couplings,
            shift: self.shift,
        }
    }
}

/// Single-excitation model on a finite set of modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModel {
    pub delta_eff: f64,
    pub omegas: Vec<f64>,
    pub couplings: Vec<f64>,
    pub shift: f64,
}
