//! Time evolution of the excited amplitude in the single-excitation sector.
//!
//! Both the RWA amplitude `c(t)` and the polaron-frame amplitude `h(t)` obey
//!
//! ```text
//! ȧ(t) + iΔ_eff a(t) + ∫₀ᵗ k(t-τ) a(τ) dτ = 0,    a(0) = 1/√2,
//! ```
//!
//! with `k` from [`bath::memory_kernel`]. The frame is the one in which the
//! bound-state pole sits at `ν = E₁ + Δ_eff/2`, and `P_z(t) = √2 Re a(t)`.

use alloc::vec::Vec;

use crate::arrowhead;
use crate::bath::{self, DiscretizedBath, TimeGrid};
use crate::math::{self, FRAC_1_SQRT_2, SQRT_2};
use crate::model::{EffectiveModel, ModelKind};
use crate::spectrum;
use crate::{Complex64, Error, Result};

/// Largest accepted step, in units of `1/ω_c`.
pub const MAX_DT: f64 = 0.05;
/// `|a| > 1/√2 + UNSTABLE_MARGIN` aborts the integration.
pub const UNSTABLE_MARGIN: f64 = 1e-3;
/// Fraction of a trace treated as the late-time window.
pub const LATE_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub dt: f64,
    pub amp: Vec<Complex64>,
    pub pz: Vec<f64>,
    pub kind: ModelKind,
}

impl AmplitudeTrace {
    fn from_amp(dt: f64, amp: Vec<Complex64>, kind: ModelKind) -> Self {
        let pz = pz_series(&amp);
        AmplitudeTrace { dt, amp, pz, kind }
    }

    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.dt * i as f64
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.len().saturating_sub(1))
    }

    /// Largest `|a(t)|`.
    pub fn max_modulus(&self) -> f64 {
        self.amp.iter().map(|z| math::cabs(*z)).fold(0.0, f64::max)
    }

    /// Largest `|a - b|` over the common prefix of two traces on the same step.
    pub fn max_deviation(&self, other: &AmplitudeTrace) -> Result<f64> {
        if (self.dt - other.dt).abs() > 1e-12 * self.dt {
            return Err(Error::Inconsistent { what: "trace time steps", a: self.dt, b: other.dt });
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| math::cabs(*a - *b))
            .fold(0.0, f64::max))
    }

    /// Statistics of the final `fraction` of the trace.
    pub fn late_window(&self, fraction: f64) -> LateWindow {
        let start = late_start(self.len(), fraction);
        let pz = &self.pz[start..];
        let n = pz.len() as f64;
        let (lo, hi) = pz.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        LateWindow {
            start,
            mean: pz.iter().sum::<f64>() / n,
            oscillation: 0.5 * (hi - lo),
            max_abs: pz.iter().fold(0.0, |m, x| m.max(x.abs())),
            envelope: self.amp[start..].iter().map(|z| SQRT_2 * math::cabs(*z)).sum::<f64>() / n,
        }
    }
}

/// First index of the trailing `fraction` of `len` samples.
pub fn late_start(len: usize, fraction: f64) -> usize {
    let keep = (math::ceil(len as f64 * fraction) as usize).clamp(1, len.max(1));
    len - keep
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateWindow {
    pub start: usize,
    pub mean: f64,
    /// Half the peak-to-peak excursion of `P_z`.
    pub oscillation: f64,
    pub max_abs: f64,
    /// Mean of `√2|a(t)|`; tends to `Z` when a bound state exists.
    pub envelope: f64,
}

/// `√2 Re a` elementwise (computed as `Re a / (1/√2)` so `a(0)` maps to exactly 1).
pub fn pz_series(amp: &[Complex64]) -> Vec<f64> {
    amp.iter().map(|z| z.re / FRAC_1_SQRT_2).collect()
}

/// Integrates the amplitude equation on `[0, t_max]` with step `dt`.
///
/// The convolution uses trapezoid weights and the step is the trapezoidal
/// predictor-corrector iterated to its fixed point, which for this linear equation
/// is the closed form
/// `a_n [1 + (dt/2)(iΔ_eff + dt k₀/2)] = a_{n-1} + (dt/2) F_{n-1} - (dt/2) H_n`
/// with `H_n` the history part of the convolution. Second order, A-stable.
pub fn solve_amplitude(model: &EffectiveModel, t_max: f64, dt: f64) -> Result<AmplitudeTrace> {
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::Domain { what: "dt (must lie in (0, 0.05/ω_c])", value: dt });
    }
    let grid = TimeGrid::new(t_max, dt)?;
    let kernel = bath::memory_kernel(model, grid)?;
    integrate(model.delta_eff, &kernel.values, dt, model.kind)
}

/// [`solve_amplitude`] on precomputed kernel samples `k(i·dt)`.
pub fn integrate(delta_eff: f64, kernel: &[Complex64], dt: f64, kind: ModelKind) -> Result<AmplitudeTrace> {
    let n = kernel.len();
    if n == 0 {
        return Err(Error::Argument("empty kernel table"));
    }
    // reversed split copies so the history sum is a contiguous dot product
    let kr_re: Vec<f64> = kernel.iter().rev().map(|z| z.re).collect();
    let kr_im: Vec<f64> = kernel.iter().rev().map(|z| z.im).collect();
    let mut c_re = Vec::with_capacity(n);
    let mut c_im = Vec::with_capacity(n);
    let mut amp = Vec::with_capacity(n);

    let c0 = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let k0 = kernel[0];
    let rot = Complex64::new(0.0, delta_eff);
    let denom = Complex64::new(1.0, 0.0) + (rot + k0 * (0.5 * dt)) * (0.5 * dt);
    let inv = denom.inv();
    let limit = FRAC_1_SQRT_2 + UNSTABLE_MARGIN;

    c_re.push(c0.re);
    c_im.push(c0.im);
    amp.push(c0);
    // F_{n-1} = -iΔ a_{n-1} - I_{n-1}; I_0 = 0
    let mut f_prev = -rot * c0;
    for step in 1..n {
        // H = dt [ k_n a_0 / 2 + Σ_{j=1}^{n-1} k_{n-j} a_j ]
        let off = n - 1 - step;
        let hist = dot(&kr_re[off + 1..off + step], &kr_im[off + 1..off + step], &c_re[1..step], &c_im[1..step]);
        let h = (kernel[step] * c0 * 0.5 + hist) * dt;
        let c = (amp[step - 1] + f_prev * (0.5 * dt) - h * (0.5 * dt)) * inv;
        let m = math::cabs(c);
        if !(m <= limit) {
            return Err(Error::Unstable { time: step as f64 * dt, magnitude: m, dt });
        }
        f_prev = -rot * c - h - k0 * c * (0.5 * dt);
        c_re.push(c.re);
        c_im.push(c.im);
        amp.push(c);
    }
    Ok(AmplitudeTrace::from_amp(dt, amp, kind))
}

// Σ k_j c_j over split re/im slices, four fixed lanes for a reproducible sum order.
fn dot(kr: &[f64], ki: &[f64], cr: &[f64], ci: &[f64]) -> Complex64 {
    let len = kr.len();
    let (kr, ki, cr, ci) = (&kr[..len], &ki[..len], &cr[..len], &ci[..len]);
    let mut sr = [0.0f64; 4];
    let mut si = [0.0f64; 4];
    let chunks = len / 4;
    for q in 0..chunks {
        let b = 4 * q;
        for l in 0..4 {
            let (a, bi, x, y) = (kr[b + l], ki[b + l], cr[b + l], ci[b + l]);
            sr[l] += a * x - bi * y;
            si[l] += a * y + bi * x;
        }
    }
    let mut re = (sr[0] + sr[1]) + (sr[2] + sr[3]);
    let mut im = (si[0] + si[1]) + (si[2] + si[3]);
    for j in 4 * chunks..len {
        re += kr[j] * cr[j] - ki[j] * ci[j];
        im += kr[j] * ci[j] + ki[j] * cr[j];
    }
    Complex64::new(re, im)
}

/// Exact evolution on a discretized bath.
///
/// The single-excitation matrix (apex `Δ_eff`, diagonal `ω_k`, couplings `c_k`) is
/// diagonalized once; then `a(t) = (1/√2) Σ_j |⟨e|φ_j⟩|² e^{-iλ_j t}`, the same frame
/// as [`solve_amplitude`].
pub fn ed_oracle(model: &EffectiveModel, bath: &DiscretizedBath, t_max: f64, dt: f64) -> Result<AmplitudeTrace> {
    let grid = TimeGrid::new(t_max, dt)?;
    let pairs = arrowhead::eigen(&model.discretize(bath))?;
    let w: Vec<f64> = pairs.iter().map(|p| p.weight * FRAC_1_SQRT_2).collect();
    let lam: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let m = lam.len();
    let mut re = alloc::vec![0.0; m];
    let mut im = alloc::vec![0.0; m];
    let rot: Vec<Complex64> = lam.iter().map(|&l| math::cis(-l * dt)).collect();
    let mut amp = Vec::with_capacity(grid.len);
    for i in 0..grid.len {
        if i % 256 == 0 {
            let t = grid.time(i);
            for j in 0..m {
                let z = math::cis(-lam[j] * t);
                re[j] = z.re;
                im[j] = z.im;
            }
        }
        let (mut sr, mut si) = (0.0, 0.0);
        for j in 0..m {
            sr += w[j] * re[j];
            si += w[j] * im[j];
            let nr = re[j] * rot[j].re - im[j] * rot[j].im;
            let ni = re[j] * rot[j].im + im[j] * rot[j].re;
            re[j] = nr;
            im[j] = ni;
        }
        amp.push(Complex64::new(sr, si));
    }
    Ok(AmplitudeTrace::from_amp(dt, amp, model.kind))
}

/// Long-time prediction from the bound-state pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResiduePrediction {
    /// Residue, equal to the excited weight `|d₀|²` of the bound state.
    pub z: f64,
    /// `E₁ + Δ_eff/2 ≤ 0`.
    pub nu: f64,
}

impl ResiduePrediction {
    /// Angular frequency of the persistent oscillation of `P_z`.
    pub fn frequency(&self) -> f64 {
        self.nu.abs()
    }
}

/// `P_z(t → ∞) ≈ Z cos(|ν| t + φ)` if a bound state exists, else `None`.
pub fn asymptotic_envelope(model: &EffectiveModel) -> Result<Option<ResiduePrediction>> {
    Ok(spectrum::bound_state(model)?.map(|b| ResiduePrediction { z: b.d0_sq, nu: -b.binding }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{BathParams, Scheme};

    #[test]
    fn dot_matches_naive() {
        let kr: Vec<f64> = (0..11).map(|i| i as f64 * 0.3 - 1.0).collect();
        let ki: Vec<f64> = (0..11).map(|i| (i as f64).sin()).collect();
        let cr: Vec<f64> = (0..11).map(|i| (i as f64).cos()).collect();
        let ci: Vec<f64> = (0..11).map(|i| 0.1 * i as f64).collect();
        let d = dot(&kr, &ki, &cr, &ci);
        let mut naive = Complex64::new(0.0, 0.0);
        for j in 0..11 {
            naive += Complex64::new(kr[j], ki[j]) * Complex64::new(cr[j], ci[j]);
        }
        assert!((d - naive).norm() < 1e-13);
    }

    #[test]
    fn decoupled_rotates() {
        let m = EffectiveModel::rwa(BathParams::scaled(0.0, 0.7, 0.02).unwrap());
        let tr = solve_amplitude(&m, 50.0, 0.05).unwrap();
        assert_eq!(tr.pz[0], 1.0);
        for (i, p) in tr.pz.iter().enumerate() {
            assert!((p - (0.02 * tr.time(i)).cos()).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_large_step() {
        let m = EffectiveModel::rwa(BathParams::scaled(0.01, 0.7, 0.02).unwrap());
        assert!(solve_amplitude(&m, 10.0, 0.1).is_err());
    }

    #[test]
    fn ed_decoupled_has_unit_modulus() {
        let p = BathParams::scaled(0.0, 0.7, 0.02).unwrap();
        let bath = bath::discretize(&BathParams::scaled(0.01, 0.7, 0.02).unwrap(), 50, Scheme::Logarithmic).unwrap();
        let tr = ed_oracle(&EffectiveModel::rwa(p), &bath, 100.0, 0.1).unwrap();
        assert!(tr.amp.iter().all(|z| (z.norm() - FRAC_1_SQRT_2).abs() < 1e-12));
    }

    #[test]
    fn late_window_of_cosine() {
        let amp: Vec<Complex64> = (0..1000).map(|i| Complex64::from_polar(FRAC_1_SQRT_2 * 0.5, 0.1 * i as f64)).collect();
        let tr = AmplitudeTrace::from_amp(1.0, amp, ModelKind::Rwa);
        let w = tr.late_window(0.25);
        assert_eq!(w.start, 750);
        assert!((w.envelope - 0.5).abs() < 1e-12);
        assert!((w.oscillation - 0.5).abs() < 1e-3);
    }
}
