//! Exact eigendecomposition of the single-excitation (arrowhead) matrix
//!
//! ```text
//!     | a   z₁  z₂ … |
//! M = | z₁  d₁       |
//!     | z₂      d₂   |
//!     | …          … |
//! ```
//!
//! Eigenvalues are the roots of the secular function
//! `f(λ) = λ - a - Σ z_k²/(λ - d_k)`, one below `d₁`, one in each gap and one above
//! the last pole. Each root is bisected in a coordinate centred on the nearer pole
//! so `λ - d_k` keeps full relative precision.

use alloc::vec::Vec;

use crate::math;
use crate::model::DiscreteModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Squared weight of the apex (excited-state) component of the normalized eigenvector.
    pub weight: f64,
}

struct Secular<'a> {
    apex: f64,
    poles: &'a [f64],
    z2: &'a [f64],
}

impl Secular<'_> {
    // f and Σ z²/(λ-d)² at λ = poles[origin] + tau
    fn eval(&self, origin: usize, tau: f64) -> (f64, f64) {
        let base = self.poles[origin];
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for (&d, &z2) in self.poles.iter().zip(self.z2) {
            let gap = (base - d) + tau;
            let q = z2 / gap;
            sum += q;
            sum2 += q / gap;
        }
        ((base + tau) - self.apex - sum, sum2)
    }

    /// Root in `(lo, hi)` measured from `poles[origin]`; `f(lo) < 0 < f(hi)`.
    fn root(&self, origin: usize, mut lo: f64, mut hi: f64) -> Eigenpair {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (f, _) = self.eval(origin, mid);
            if f < 0.0 {
                lo = mid;
            } else if f > 0.0 {
                hi = mid;
            } else {
                lo = mid;
                hi = mid;
                break;
            }
        }
        let tau = 0.5 * (lo + hi);
        let (_, s2) = self.eval(origin, tau);
        Eigenpair { value: self.poles[origin] + tau, weight: 1.0 / (1.0 + s2) }
    }

    fn interior(&self, k: usize) -> Eigenpair {
        let gap = self.poles[k + 1] - self.poles[k];
        let (f_mid, _) = self.eval(k, 0.5 * gap);
        if f_mid >= 0.0 {
            self.root(k, 0.0, 0.5 * gap)
        } else {
            self.root(k + 1, -0.5 * gap, 0.0)
        }
    }
}

fn split(model: &DiscreteModel) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut poles = Vec::with_capacity(model.omegas.len());
    let mut z2 = Vec::with_capacity(model.omegas.len());
    let mut decoupled = Vec::new();
    for (&w, &c) in model.omegas.iter().zip(&model.couplings) {
        if c == 0.0 {
            decoupled.push(w);
        } else {
            poles.push(w);
            z2.push(c * c);
        }
    }
    (poles, z2, decoupled)
}

fn check(model: &DiscreteModel) -> Result<()> {
    if model.omegas.len() != model.couplings.len() {
        return Err(Error::Argument("mode and coupling counts differ"));
    }
    if !model.omegas.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Argument("mode frequencies must be strictly increasing"));
    }
    Ok(())
}

fn outer_bound(model: &DiscreteModel, z2: &[f64]) -> f64 {
    math::sqrt(z2.iter().sum::<f64>()) + 1e-12 * (1.0 + model.delta_eff.abs())
}

/// Lowest eigenpair of the shifted single-excitation matrix
/// (apex `Δ_eff`, poles `ω_k`, couplings `c_k`).
pub fn lowest(model: &DiscreteModel) -> Result<Eigenpair> {
    check(model)?;
    let (poles, z2, decoupled) = split(model);
    let apex = model.delta_eff;
    let mut best = if poles.is_empty() {
        Eigenpair { value: apex, weight: 1.0 }
    } else {
        let sec = Secular { apex, poles: &poles, z2: &z2 };
        let lo = apex.min(poles[0]) - outer_bound(model, &z2) - poles[0];
        sec.root(0, lo, 0.0)
    };
    if let Some(&w) = decoupled.first() {
        if w < best.value {
            best = Eigenpair { value: w, weight: 0.0 };
        }
    }
    Ok(best)
}

/// Full spectrum (ascending) with apex weights; the weights sum to one.
pub fn eigen(model: &DiscreteModel) -> Result<Vec<Eigenpair>> {
    check(model)?;
    let (poles, z2, decoupled) = split(model);
    let apex = model.delta_eff;
    let mut pairs = Vec::with_capacity(model.omegas.len() + 1);
    if poles.is_empty() {
        pairs.push(Eigenpair { value: apex, weight: 1.0 });
    } else {
        let sec = Secular { apex, poles: &poles, z2: &z2 };
        let bound = outer_bound(model, &z2);
        let n = poles.len();
        pairs.push(sec.root(0, apex.min(poles[0]) - bound - poles[0], 0.0));
        for k in 0..n - 1 {
            pairs.push(sec.interior(k));
        }
        pairs.push(sec.root(n - 1, 0.0, apex.max(poles[n - 1]) + bound - poles[n - 1]));
    }
    pairs.extend(decoupled.iter().map(|&w| Eigenpair { value: w, weight: 0.0 }));
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}

/// Normalized eigenvector for eigenvalue `lambda`: `(v₀, v₁, …)` with `v₀ ≥ 0`.
pub fn eigenvector(model: &DiscreteModel, lambda: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(model.omegas.len() + 1);
    v.push(1.0);
    for (&w, &c) in model.omegas.iter().zip(&model.couplings) {
        v.push(c / (lambda - w));
    }
    let norm = math::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    v.iter_mut().for_each(|x| *x /= norm);
    v
}
