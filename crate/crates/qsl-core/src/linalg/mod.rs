//! Small dense linear algebra used by the Bloch-space solvers.

mod cmatrix;
mod rmatrix;

pub use cmatrix::CMatrix;
pub use rmatrix::RMatrix;
