// Brute-force references shared by the integration tests. Nothing here calls into
// the library's quadrature or root finders.
#![allow(dead_code)]

use std::f64::consts::PI;

pub const RIEMANN_POINTS: usize = 1_000_000;

/// Midpoint sum of `f` over `[0, 1]`.
pub fn riemann<F: Fn(f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / RIEMANN_POINTS as f64;
    let mut acc = 0.0;
    for i in 0..RIEMANN_POINTS {
        acc += f((i as f64 + 0.5) * h);
    }
    acc * h
}

pub fn riemann_complex<F: Fn(f64) -> (f64, f64)>(f: F) -> (f64, f64) {
    let h = 1.0 / RIEMANN_POINTS as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..RIEMANN_POINTS {
        let (a, b) = f((i as f64 + 0.5) * h);
        re += a;
        im += b;
    }
    (re * h, im * h)
}

/// `J(ω)` with `ω_c = 1`.
pub fn j(alpha: f64, s: f64, w: f64) -> f64 {
    2.0 * PI * alpha * w.powf(s)
}

/// Plain bisection on a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let flo = f(lo);
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
