use core::fmt;

/// Errors raised by the numerical routines.
///
/// Variants carry enough context (brackets, achieved tolerances) to diagnose a
/// failed solve without rerunning it.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A structural argument is invalid (zero modes, empty grid, ...).
    Argument(&'static str),
    /// Adaptive quadrature hit its subdivision limit.
    Quadrature { achieved: f64, requested: f64 },
    /// A bracketing root search failed to converge.
    Bisection { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// No bracket could be established for a root search.
    NoBracket { what: &'static str, last: f64 },
    /// The polaron solution is in the localized phase (`η = 0`) where the effective
    /// model does not exist.
    Localized { alpha: f64 },
    /// The amplitude grew past the contractive bound; the time step is too large.
    Unstable { time: f64, magnitude: f64, dt: f64 },
    /// Two routes to the same quantity disagree beyond tolerance.
    Inconsistent { what: &'static str, a: f64, b: f64 },
    /// A finite-difference stencil straddles the critical point and no jump
    /// detector was requested.
    Straddle { alpha: f64, alpha_c: f64, h: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Quadrature { achieved, requested } => write!(
                f,
                "quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}"
            ),
            Error::Bisection { lo, hi, f_lo, f_hi } => write!(
                f,
                "bisection failed on [{lo:.12e}, {hi:.12e}] with f = ({f_lo:.3e}, {f_hi:.3e})"
            ),
            Error::NoBracket { what, last } => {
                write!(f, "could not bracket {what} (last trial {last:.6e})")
            }
            Error::Localized { alpha } => {
                write!(f, "localized phase at alpha = {alpha}: renormalized tunneling is zero")
            }
            Error::Unstable { time, magnitude, dt } => write!(
                f,
                "amplitude {magnitude:.6} exceeds contractive bound at t = {time:.3}; reduce dt (now {dt})"
            ),
            Error::Inconsistent { what, a, b } => {
                write!(f, "{what}: routes disagree ({a:.12e} vs {b:.12e})")
            }
            Error::Straddle { alpha, alpha_c, h } => write!(
                f,
                "stencil [{:.6}, {:.6}] straddles alpha_c = {alpha_c:.6}; enable the jump detector",
                alpha - h,
                alpha + h
            ),
        }
    }
}

impl core::error::Error for Error {}
