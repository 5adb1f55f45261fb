//! Bracketing root search.

use crate::{Error, Result};

/// Outcome of a bisection: the root estimate and the final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Bisects `f` on `[lo, hi]` (which must bracket a sign change) until
/// `|f(x)| ≤ f_tol` or the bracket is narrower than `x_tol`.
///
/// When the bracket collapses to adjacent floats without meeting `f_tol` the
/// endpoint with the smaller residual is returned; a residual worse than
/// `1e6·f_tol` at that point is reported as [`Error::Bisection`].
pub fn bisect<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    f_tol: f64,
    max_iter: usize,
) -> Result<Root> {
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Root { x: lo, lo, hi: lo, f: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, lo: hi, hi, f: 0.0, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bisection { lo, hi, f_lo, f_hi });
    }
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 || fm.abs() <= f_tol {
            return Ok(Root { x: mid, lo, hi, f: fm, iterations: it });
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
        if hi - lo <= x_tol {
            let (x, fx) = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
            return Ok(Root { x, lo, hi, f: fx, iterations: it });
        }
    }
    let (x, fx) = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    if fx.abs() <= 1e6 * f_tol {
        Ok(Root { x, lo, hi, f: fx, iterations: max_iter })
    } else {
        Err(Error::Bisection { lo, hi, f_lo, f_hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-15, 0.0, 200).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_bracket() {
        assert!(matches!(
            bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 0.0, 50),
            Err(Error::Bisection { .. })
        ));
    }
}
