//! Quadrature: adaptive Gauss–Kronrod, Gauss–Legendre rules, and an integrator
//! for power-law weighted integrands `∫₀ᵇ ω^a g(ω) dω` with `a > -1`.

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Default relative tolerance for every scalar integral in the crate.
pub const REL_TOL: f64 = 1e-10;

const MAX_INTERVALS: usize = 4000;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_980_946,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// An integral value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: 0.0, error: 0.0 };

    pub fn infinite() -> Self {
        Estimate { value: f64::INFINITY, error: 0.0 }
    }

    fn add(self, other: Estimate) -> Estimate {
        Estimate { value: self.value + other.value, error: self.error + other.error }
    }

    pub fn scale(self, k: f64) -> Estimate {
        Estimate { value: self.value * k, error: self.error * k.abs() }
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = 0.0;
    let mut kronrod = fc * WGK[10];
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate { value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Adaptive Gauss–Kronrod (G10/K21) integration of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// error is below `max(rel_tol·|I|, abs_tol)`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::ZERO);
    }
    let first = kronrod21(f, a, b);
    let mut parts: Vec<(f64, f64, Estimate)> = alloc::vec![(a, b, first)];
    let mut total = first;
    loop {
        if !total.value.is_finite() {
            return Err(Error::Quadrature { achieved: f64::NAN, requested: rel_tol });
        }
        let target = (rel_tol * total.value.abs()).max(abs_tol);
        if total.error <= target {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            let achieved = total.error / total.value.abs().max(f64::MIN_POSITIVE);
            return Err(Error::Quadrature { achieved, requested: rel_tol });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.2.error > acc.1 { (i, p.2.error) } else { acc });
        let (lo, hi, est) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine precision; accept what we have
            let achieved = total.error / total.value.abs().max(f64::MIN_POSITIVE);
            if achieved < 1e3 * rel_tol {
                return Ok(total);
            }
            return Err(Error::Quadrature { achieved, requested: rel_tol });
        }
        let left = kronrod21(f, lo, mid);
        let right = kronrod21(f, mid, hi);
        total = Estimate {
            value: total.value - est.value + left.value + right.value,
            error: total.error - est.error + left.error + right.error,
        };
        parts.push((lo, mid, left));
        parts.push((mid, hi, right));
        // re-sum occasionally to avoid drift in the running totals
        if parts.len().is_multiple_of(64) {
            total = parts.iter().fold(Estimate::ZERO, |acc, p| acc.add(p.2));
        }
    }
}

/// Integrates `ω^a g(ω)` over `[0, upper]` for `a > -1` and smooth `g`.
///
/// `scale` marks the smallest frequency at which `g` varies (a shift such as
/// `1/(ω+x)`); the range is split into geometric panels starting below it so
/// that integrands spanning many decades stay resolved. The first panel uses
/// the substitution `ω = p₀ u^{1/(a+1)}`, which absorbs the endpoint singularity.
///
/// Returns `+∞` when `a ≤ -1`, where the integral diverges at the origin for any
/// `g(0) ≠ 0`.
pub fn power_law<F: Fn(f64) -> f64>(
    a: f64,
    g: &F,
    upper: f64,
    scale: Option<f64>,
    rel_tol: f64,
) -> Result<Estimate> {
    if a <= -1.0 {
        return Ok(Estimate::infinite());
    }
    if upper <= 0.0 {
        return Ok(Estimate::ZERO);
    }
    let p0 = match scale {
        Some(x) if x > 0.0 => (x / 16.0).min(upper),
        _ => upper,
    };
    let ap1 = a + 1.0;
    let inv = 1.0 / ap1;
    let head = adaptive(&|u: f64| g(p0 * math::powf(u, inv)), 0.0, 1.0, rel_tol, 0.0)?
        .scale(math::powf(p0, ap1) / ap1);
    let mut total = head;
    let mut lo = p0;
    while lo < upper {
        let hi = (lo * 8.0).min(upper);
        let panel = adaptive(&|w: f64| math::powf(w, a) * g(w), lo, hi, rel_tol, 0.0)?;
        total = total.add(panel);
        lo = hi;
    }
    Ok(total)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = math::cos(math::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
