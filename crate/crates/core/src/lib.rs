//! Floquet analysis of one and two periodically driven Rydberg atoms.
//!
//! Energies are in units of the Rabi frequency Ω and times in units of 1/Ω.
//! The detuning is modulated as Δ(t) = Δ₀ + δ sin ωt and α = δ/ω.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod cli;
pub mod error;
pub mod figures;
pub mod floquet;
pub mod hamiltonian;
pub mod io;
pub mod model;
pub mod observables;
pub mod propagate;
pub mod resonance;
pub mod sweep;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
