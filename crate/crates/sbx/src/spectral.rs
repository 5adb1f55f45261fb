//! Frequency analysis of late-time coherence windows.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Zero-padding factor applied before the transform.
pub const PADDING: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Angular frequency of the largest spectral magnitude.
    pub omega: f64,
    /// Resolution of the unpadded window, `2π/T`.
    pub bin: f64,
}

/// Dominant angular frequency of `samples` taken every `dt`, searched over
/// `[0, π/dt]` on a `PADDING`-times zero-padded transform.
pub fn peak_frequency(samples: &[f64], dt: f64) -> Peak {
    let n = samples.len();
    let m = (n * PADDING).max(1);
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    buf.resize(m, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let (k, _) = buf[..m / 2 + 1]
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bk, bv), (k, z)| {
            let v = z.norm_sqr();
            if v > bv { (k, v) } else { (bk, bv) }
        });
    let total = dt * n as f64;
    Peak { omega: 2.0 * std::f64::consts::PI * k as f64 / (dt * m as f64), bin: 2.0 * std::f64::consts::PI / total }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cosine_frequency() {
        let dt = 0.05;
        let w = 0.37;
        let x: Vec<f64> = (0..4000).map(|i| 0.8 * (w * i as f64 * dt + 0.3).cos()).collect();
        let p = peak_frequency(&x, dt);
        assert!((p.omega - w).abs() < p.bin / 4.0, "{p:?}");
    }

    #[test]
    fn constant_peaks_at_zero() {
        let p = peak_frequency(&[0.5; 100], 1.0);
        assert_eq!(p.omega, 0.0);
    }
}
