//! Bohmian (de Broglie-Bohm) trajectories for time-dependent harmonic
//! oscillators, built on quadratic dynamical invariants.
//!
//! The pipeline runs: oscillator model -> complex classical mode ->
//! invariant frame (g-, g0, g+, accumulated phase) -> exact eigenstate /
//! coherent-state wavefunctions -> quantum trajectories, each step paired
//! with an independent numerical check (guidance-equation integration,
//! quadrature, truncated Fock-space matrix algebra).

pub mod error;
pub mod fock;
pub mod frame;
pub mod mode;
pub mod oscillator;
pub mod ode;
pub mod quad;

pub use error::{Error, Result};
