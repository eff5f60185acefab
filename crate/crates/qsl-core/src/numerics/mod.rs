//! Shared numerical machinery: quadrature, ODE stepping, root finding.

pub mod ode;
pub mod quad;
pub mod roots;
