//! Driven two-level atom and Jaynes-Cummings dynamics.
//!
//! Closed-form rotating-wave propagators for both models, a numerical
//! Schrodinger integrator for the exact Hamiltonians, the disentangling
//! (Riccati) pathway for the driven atom, and a scenario runner that
//! measures how far the rotating-wave solutions drift from the exact ones.
//!
//! Units: hbar = 1; every frequency is an angular frequency.

pub mod error;
pub mod fock;
pub mod integrator;
pub mod jc;
pub mod linalg;
pub mod runner;
pub mod scenario;
pub mod semiclassical;

pub use error::{Error, Result};
pub use fock::{FockTruncation, LadderSet};
pub use integrator::{fidelity, integrate, observable_series, Flag, IntegratorConfig, Method, TimeSeries};
pub use jc::JcParams;
pub use linalg::{ComplexMatrix, StateVector};
pub use semiclassical::{DisentangleState, DriveParams};
