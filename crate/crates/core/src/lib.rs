//! Simulation library for a double quantum dot capacitively coupled to a
//! superconducting transmission-line resonator.
//!
//! The crate covers four layers of the device physics:
//!
//! - [`device`]: charge eigenbasis of the double dot, resonator mode
//!   structure, and the dot-resonator coupling constants.
//! - [`maser`]: semiclassical rate equations for the current-pumped
//!   double-dot micro-maser (threshold, saturation, photon number, output
//!   power) plus adaptive time integration.
//! - [`lindblad`]: full quantum master equation for the pumped
//!   Jaynes-Cummings system on a truncated Fock space, used as a small-photon-
//!   number cross-check of the semiclassical treatment.
//! - [`raman`]: far-off-resonant Raman spin-photon state transfer through a
//!   virtually populated charge superposition, with its decoherence budget.
//! - [`quasimode`]: Lorentzian quasimode filtering of low-frequency
//!   dephasing by the resonator.
//!
//! # Unit conventions
//!
//! Every frequency, coupling constant, and rate is stored as an *ordinary*
//! frequency in Hz (the value a spectrum analyzer reads, i.e. omega/2pi).
//! Rates are inverse lifetimes in 1/s and are numerically interchangeable
//! with Hz. Inside dynamical equations, coherent quantities (couplings and
//! detunings) enter as angular frequencies, `2*pi*f`, while incoherent rates
//! enter as-is; algebraic results quoted by the accessors (transfer times,
//! error probabilities, thresholds) follow the same bookkeeping throughout,
//! so no caller ever multiplies or divides by 2pi.

pub mod device;
pub mod error;
pub mod lindblad;
pub mod maser;
pub mod ode;
pub mod quadrature;
pub mod quasimode;
pub mod raman;
pub mod sparse;

pub use error::{Error, Result};
pub use num_complex::Complex64;
