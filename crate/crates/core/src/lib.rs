//! Quantum and classical correlations generated by driving transverse-field
//! spin chains through quantum critical points.
//!
//! * [`kernels`]: Landau–Zener excitation probabilities and their moments `β_n`.
//! * [`xstate`]: two-qubit states, entropies, classical correlation, discord
//!   and concurrence.
//! * [`quench`]: the post-quench two-spin state at separation `n`.
//! * [`scaling`]: τ and J3 sweeps, power-law fits.
//! * [`central`]: decoherence of two central qubits coupled to a driven chain.

pub mod central;
pub mod error;
pub mod kernels;
pub mod ode;
pub mod quadrature;
pub mod quench;
pub mod scaling;
pub mod xstate;

pub use error::{Error, Result};
