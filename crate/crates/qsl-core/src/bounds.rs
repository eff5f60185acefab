//! Literature lower bounds on the evolution time: the variance (MT) and
//! mean-energy (ML) orthogonalization bounds, their Bures-angle extension,
//! the Fisher-information bound and the Bloch-speed bound.
//!
//! These are compared against the operational minimum time; the operational
//! value is attainable by construction, so it is the tightest of the family.
//! The ML-type bounds follow the convention of shifting the spectrum so the
//! ground energy is zero before taking expectation values.

use num_complex::Complex64;

use crate::bloch::DensityMatrix;
use crate::error::{QslError, Result};
use crate::linalg::CMatrix;
use crate::numerics::quad;

fn expectation(rho: &DensityMatrix, h: &CMatrix) -> f64 {
    rho.matrix.mul(h).trace().re
}

/// Shift the spectrum so the lowest eigenvalue is zero.
pub fn shift_ground_to_zero(h: &CMatrix) -> Result<CMatrix> {
    let (vals, _) = h.eigh()?;
    let e0 = vals[0];
    let mut out = h.clone();
    for i in 0..h.n {
        out[(i, i)] -= Complex64::new(e0, 0.0);
    }
    Ok(out)
}

/// Energy standard deviation sqrt(<H^2> - <H>^2).
pub fn energy_deviation(rho: &DensityMatrix, h: &CMatrix) -> f64 {
    let mean = expectation(rho, h);
    let second = rho.matrix.mul(&h.mul(h)).trace().re;
    (second - mean * mean).max(0.0).sqrt()
}

/// Variance-based orthogonalization time pi / (2 dH); infinite when the
/// state has no energy spread.
pub fn mt_bound(rho: &DensityMatrix, h: &CMatrix) -> f64 {
    let dev = energy_deviation(rho, h);
    if dev <= 1e-14 {
        return f64::INFINITY;
    }
    std::f64::consts::PI / (2.0 * dev)
}

/// Mean-energy orthogonalization time pi / (2 <H>) with the ground energy
/// shifted to zero; infinite for the ground state.
pub fn ml_bound(rho: &DensityMatrix, h: &CMatrix) -> Result<f64> {
    let shifted = shift_ground_to_zero(h)?;
    let mean = expectation(rho, &shifted);
    if mean <= 1e-14 {
        return Ok(f64::INFINITY);
    }
    Ok(std::f64::consts::PI / (2.0 * mean))
}

/// Uhlmann fidelity Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)). Two-level states
/// use the determinant closed form.
pub fn fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(QslError::DimensionMismatch(format!(
            "{} vs {}",
            rho0.dim(),
            rho1.dim()
        )));
    }
    if rho0.dim() == 2 {
        let det = |m: &CMatrix| (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re.max(0.0);
        let f_sq = rho0.matrix.mul(&rho1.matrix).trace().re
            + 2.0 * (det(&rho0.matrix) * det(&rho1.matrix)).sqrt();
        return Ok(f_sq.clamp(0.0, 1.0).sqrt());
    }
    let root = rho0.matrix.sqrt_psd()?;
    let inner = root.mul(&rho1.matrix).mul(&root);
    let (vals, _) = inner.eigh()?;
    Ok(vals.iter().map(|v| v.max(0.0).sqrt()).sum::<f64>().clamp(0.0, 1.0))
}

/// Bures angle arccos of the fidelity.
pub fn bures_angle(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    Ok(fidelity(rho0, rho1)?.clamp(-1.0, 1.0).acos())
}

/// Combined Bures-angle bound max{ A / dH, 2 A^2 / (pi <H>) }, with the
/// ground-energy-zero convention on <H>.
pub fn tau_c(rho: &DensityMatrix, h: &CMatrix, target: &DensityMatrix) -> Result<f64> {
    let angle = bures_angle(rho, target)?;
    let dev = energy_deviation(rho, h);
    let mean = expectation(rho, &shift_ground_to_zero(h)?);
    let by_dev = if dev <= 1e-14 { f64::INFINITY } else { angle / dev };
    let by_mean = if mean <= 1e-14 {
        f64::INFINITY
    } else {
        2.0 * angle * angle / (std::f64::consts::PI * mean)
    };
    Ok(by_dev.max(by_mean))
}

/// Quantum Fisher information of the unitary family e^{-iHt} rho e^{iHt}:
/// F = 2 sum_{i != j} (p_i - p_j)^2 / (p_i + p_j) |<i|H|j>|^2.
pub fn quantum_fisher_information(rho: &DensityMatrix, h: &CMatrix) -> Result<f64> {
    let (probs, vecs) = rho.matrix.eigh()?;
    let h_in_eigenbasis = h.conjugate_by(&vecs);
    let n = rho.dim();
    let mut f = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let psum = probs[i] + probs[j];
            if psum <= 1e-12 {
                continue;
            }
            let pdiff = probs[i] - probs[j];
            f += 2.0 * pdiff * pdiff / psum * h_in_eigenbasis[(i, j)].norm_sqr();
        }
    }
    Ok(f)
}

/// Fisher-information bound 2 A / sqrt(F); infinite when F vanishes.
pub fn qfi_tau_f(rho: &DensityMatrix, h: &CMatrix, target: &DensityMatrix) -> Result<f64> {
    let f = quantum_fisher_information(rho, h)?;
    let angle = bures_angle(rho, target)?;
    if f <= 1e-20 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * angle / f.sqrt())
}

/// Instantaneous Bloch speed sqrt(2 Tr(rho^2 H^2 - rho H rho H) /
/// (Tr rho^2 - 1/N)).
pub fn bloch_speed(rho: &DensityMatrix, h: &CMatrix) -> Result<f64> {
    let n = rho.dim() as f64;
    let den = rho.purity() - 1.0 / n;
    if den <= 1e-12 {
        return Err(QslError::DomainError(
            "Bloch speed undefined for the maximally mixed state".into(),
        ));
    }
    let rh = rho.matrix.mul(h);
    let num = 2.0 * (rho.matrix.mul(&rh).mul(h).trace().re - rh.mul(&rh).trace().re);
    Ok((num.max(0.0) / den).sqrt())
}

/// Time-averaged Bloch speed Q along a trajectory, by adaptive Simpson
/// quadrature to relative tolerance 1e-8.
pub fn time_averaged_bloch_speed<R, H>(trajectory: R, h_of_t: H, t_eval: f64) -> Result<f64>
where
    R: Fn(f64) -> DensityMatrix,
    H: Fn(f64) -> CMatrix,
{
    if t_eval <= 0.0 {
        return Err(QslError::DomainError("evaluation time must be positive".into()));
    }
    let integrand = |t: f64| {
        bloch_speed(&trajectory(t), &h_of_t(t)).unwrap_or(f64::NAN)
    };
    let integral = quad::adaptive_simpson(integrand, 0.0, t_eval, 1e-8)?;
    if !integral.is_finite() {
        return Err(QslError::QuadratureNonConvergence);
    }
    Ok(integral / t_eval)
}

/// Bloch-angle bound Theta / Q evaluated at time `t_eval` along the
/// trajectory.
pub fn tau_b<R, H>(trajectory: R, h_of_t: H, t_eval: f64, theta: f64) -> Result<f64>
where
    R: Fn(f64) -> DensityMatrix,
    H: Fn(f64) -> CMatrix,
{
    let q = time_averaged_bloch_speed(trajectory, h_of_t, t_eval)?;
    if q <= 0.0 {
        return Err(QslError::DomainError("zero average speed".into()));
    }
    Ok(theta / q)
}
