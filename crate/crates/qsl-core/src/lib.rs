//! Operational quantum speed limits.
//!
//! The minimum evolution time tau to reach a target Bloch angle Theta is
//! defined over the set S of initial states that can reach it at all, and
//! the guaranteed time zeta bounds when every member has done so. This crate
//! computes S, tau and zeta for time-independent Hamiltonians (closed form
//! and grid scan), the Landau-Zener sweep, and Lindblad open systems
//! (spontaneous emission, damped Jaynes-Cummings, parallel dephasing),
//! together with the variance-, energy-, Fisher- and Bloch-speed-based
//! literature bounds and the transverse-Ising phase-transition indicator.

pub mod bloch;
pub mod bounds;
pub mod error;
pub mod ising;
pub mod linalg;
pub mod numerics;
pub mod scanner;
pub mod unitary;

pub use error::{QslError, Result};
