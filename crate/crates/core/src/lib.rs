//! Numerics for the spin-boson model in its single-excitation sector.
//!
//! The crate covers four layers that build on each other:
//!
//! * [`bath`]: the power-law spectral density `J(ω) = 2πα ω_c^{1-s} ω^s Θ(ω_c-ω)`,
//!   its moment integrals, discretization into modes and memory kernels.
//! * [`polaron`]: the variational (Silbey–Harris type) polaron transformation at zero
//!   temperature, the self-consistent renormalization factor `η` and the effective
//!   RWA-like model it produces.
//! * [`spectrum`]: the bound state below the continuum edge, critical couplings and
//!   ground-state diagnostics (energy, derivative, fidelity, entanglement entropy).
//! * [`dynamics`]: the Volterra integro-differential equation for the excited
//!   amplitude and an exact-diagonalization oracle on a discretized bath.
//!
//! Frequencies are measured in units of the cutoff `ω_c`, times in `1/ω_c`.
//!
//! The crate is `no_std` (it needs `alloc`); all transcendental functions go through
//! `libm` so results are bit-for-bit reproducible across targets.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrowhead;
pub mod bath;
pub mod dynamics;
mod error;
mod math;
pub mod model;
pub mod polaron;
pub mod quad;
pub mod roots;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
