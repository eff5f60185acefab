//! Landau-Zener sweep H = Delta sigma_x + v t sigma_z on the Bloch sphere.
//!
//! The Bloch equation is dr/dt = 2 (Delta, 0, v t) x r; the factor 2 comes
//! from the Pauli commutators, so for Delta = 0 the accumulated z-rotation
//! angle is v t^2 (not v t^2 / 2). The Delta = 0 dynamics is closed form and
//! periodic in the return-to-start sense with T = sqrt(2 pi / v); a nonzero
//! Delta is integrated numerically.

use crate::bloch::BlochVector;
use crate::error::{QslError, Result};
use crate::numerics::{ode::Rk45, quad};
use crate::scanner::{self, DynamicsBackend, ScanGrid};

/// Sweep parameters: static gap `delta` >= 0, rate `v` > 0, target angle.
#[derive(Clone, Copy, Debug)]
pub struct LzParams {
    pub delta: f64,
    pub v: f64,
    pub theta: f64,
}

impl LzParams {
    pub fn validate(&self) -> Result<()> {
        if self.delta < 0.0 {
            return Err(QslError::DomainError("delta must be nonnegative".into()));
        }
        if self.v <= 0.0 {
            return Err(QslError::DomainError("sweep rate v must be positive".into()));
        }
        if !(self.theta > 0.0 && self.theta <= std::f64::consts::PI) {
            return Err(QslError::ThetaOutOfRange(self.theta));
        }
        Ok(())
    }
}

fn bloch_rhs(delta: f64, v: f64, t: f64, r: &[f64]) -> Vec<f64> {
    vec![
        -2.0 * v * t * r[1],
        2.0 * v * t * r[0] - 2.0 * delta * r[2],
        2.0 * delta * r[1],
    ]
}

/// Propagate a Bloch vector from `t0` to `t1`. Delta = 0 rotates about z by
/// v (t1^2 - t0^2) exactly; otherwise adaptive Runge-Kutta integration.
pub fn lz_propagate_between(r: &BlochVector, p: &LzParams, t0: f64, t1: f64) -> BlochVector {
    assert_eq!(r.dim, 2);
    if p.delta == 0.0 {
        let phi = p.v * (t1 * t1 - t0 * t0);
        let (s, c) = phi.sin_cos();
        return BlochVector::new(
            2,
            vec![
                c * r.coeffs[0] - s * r.coeffs[1],
                s * r.coeffs[0] + c * r.coeffs[1],
                r.coeffs[2],
            ],
        );
    }
    let rk = Rk45 { rel_tol: 1e-10, abs_tol: 1e-12 };
    let f = |t: f64, y: &[f64]| bloch_rhs(p.delta, p.v, t, y);
    BlochVector::new(2, rk.integrate(&f, t0, &r.coeffs, t1))
}

/// Propagate from time zero.
pub fn lz_propagate(r: &BlochVector, p: &LzParams, t: f64) -> BlochVector {
    lz_propagate_between(r, p, 0.0, t)
}

/// Scanner backend for the sweep dynamics.
pub struct LzBackend {
    pub params: LzParams,
}

impl LzBackend {
    pub fn new(params: LzParams) -> Self {
        LzBackend { params }
    }
}

impl DynamicsBackend for LzBackend {
    fn state_dim(&self) -> usize {
        2
    }

    fn evolve_between(&self, r: &BlochVector, t0: f64, t1: f64) -> BlochVector {
        lz_propagate_between(r, &self.params, t0, t1)
    }

    fn sample_step(&self, horizon: f64) -> f64 {
        // fastest precession on [0, horizon]
        let omega_max =
            2.0 * (self.params.delta.powi(2) + (self.params.v * horizon).powi(2)).sqrt();
        (2.0 * std::f64::consts::PI / omega_max / 64.0).min(horizon / 64.0)
    }

    fn period(&self) -> Option<f64> {
        if self.params.delta == 0.0 {
            Some((2.0 * std::f64::consts::PI / self.params.v).sqrt())
        } else {
            None
        }
    }

    fn default_horizon(&self) -> f64 {
        let t = (2.0 * std::f64::consts::PI / self.params.v).sqrt();
        if self.params.delta == 0.0 {
            t
        } else {
            20.0 * t
        }
    }
}

/// Minimum time for the pure sweep (Delta = 0): sqrt(Theta / v).
pub fn lz_tau_analytic(v: f64, theta: f64) -> f64 {
    (theta / v).sqrt()
}

/// Guaranteed time for the pure sweep: (sqrt(2 pi) - sqrt(Theta)) / sqrt(v),
/// i.e. period minus minimum time.
pub fn lz_zeta_analytic(v: f64, theta: f64) -> f64 {
    ((2.0 * std::f64::consts::PI).sqrt() - theta.sqrt()) / v.sqrt()
}

/// Scanner-derived minimum time. For Delta != 0 the dynamics is unitary, so
/// membership does not depend on the purity and the scan fixes eta = 1.
pub fn lz_tau_numeric(
    p: &LzParams,
    grid: &ScanGrid,
    horizon: Option<f64>,
) -> Result<f64> {
    p.validate()?;
    let backend = LzBackend::new(*p);
    let grid = if p.delta == 0.0 {
        grid.clone()
    } else {
        ScanGrid { etas: vec![1.0], alphas: grid.alphas.clone(), phis: grid.phis.clone() }
    };
    let result = scanner::scan_s(&backend, &grid, p.theta, horizon)?;
    result.min_t_first().ok_or(QslError::EmptySet)
}

/// Bloch-speed bound Theta / Q at evaluation time `t`.
///
/// For Delta = 0 this is Theta / (v t) * sqrt(|r|^2 / (|r|^2 - r_z^2));
/// otherwise Q = (2/t) int_0^t sqrt(Delta^2 + v^2 t'^2
/// - (Delta r_x(t') + v t' r_z(t'))^2 / |r|^2) dt' along the trajectory.
pub fn lz_tau_b(r0: &BlochVector, p: &LzParams, t_eval: f64, theta: f64) -> Result<f64> {
    p.validate()?;
    if t_eval <= 0.0 {
        return Err(QslError::DomainError("evaluation time must be positive".into()));
    }
    let norm_sq = r0.coeffs.iter().map(|c| c * c).sum::<f64>();
    if norm_sq == 0.0 {
        return Err(QslError::ZeroBlochVector);
    }
    if p.delta == 0.0 {
        let rz_sq = r0.coeffs[2] * r0.coeffs[2];
        if norm_sq - rz_sq <= 1e-14 * norm_sq {
            return Err(QslError::DomainError(
                "polar states have zero Bloch speed for the pure sweep".into(),
            ));
        }
        return Ok(theta / (p.v * t_eval) * (norm_sq / (norm_sq - rz_sq)).sqrt());
    }
    let integrand = |t: f64| {
        let r = lz_propagate(r0, p, t);
        let proj = p.delta * r.coeffs[0] + p.v * t * r.coeffs[2];
        (p.delta * p.delta + p.v * p.v * t * t - proj * proj / norm_sq).max(0.0).sqrt()
    };
    let q = 2.0 / t_eval * quad::adaptive_simpson(integrand, 0.0, t_eval, 1e-8)?;
    Ok(theta / q)
}
