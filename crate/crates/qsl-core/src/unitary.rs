//! Closed-form unitary evolution on Bloch coefficients, reachable-set
//! membership and the minimum/guaranteed times for time-independent
//! Hamiltonians.
//!
//! In the energy basis the evolution matrix C(t) is block diagonal: each
//! level pair (i, n) carries a 2x2 rotation by (E_n - E_i) t on its
//! coherence coefficients while the diagonal coefficients stay fixed. The
//! membership function
//!
//!   f(t) = (1/|r|^2) sum_{n,i} (1 - cos[(E_n - E_i) t]) (r_a^2 + r_b^2),
//!
//! with (a, b) the coefficient pair of (i, n), equals 1 - cos(theta(t)), so
//! a state reaches the target angle exactly when f(t) hits 1 - cos(Theta).

use num_complex::Complex64;

use crate::bloch::{self, BlochVector, DensityMatrix};
use crate::error::{QslError, Result};
use crate::linalg::{CMatrix, RMatrix};
use crate::numerics::roots;

/// Relative tolerance used to decide whether energy gaps are commensurable.
pub const PERIOD_REL_TOL: f64 = 1e-9;

/// Samples per fastest oscillation period in first-crossing searches.
pub const SAMPLES_PER_PERIOD: f64 = 64.0;

/// Default search horizon for incommensurable spectra, in pseudo-periods of
/// the slowest oscillation.
pub const DEFAULT_HORIZON_PERIODS: u32 = 50;

/// Hamiltonian reduced to its sorted spectrum, plus the unitary relating the
/// input basis to the energy basis when the input was a matrix.
#[derive(Clone, Debug)]
pub struct SpectralHamiltonian {
    energies: Vec<f64>,
    basis_transform: Option<CMatrix>,
}

impl SpectralHamiltonian {
    /// From already-sorted energies (ascending).
    pub fn from_energies(energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(QslError::DimensionTooSmall(energies.len()));
        }
        if energies.windows(2).any(|w| w[0] > w[1]) {
            return Err(QslError::InvalidState("energies must be sorted ascending".into()));
        }
        Ok(SpectralHamiltonian { energies, basis_transform: None })
    }

    /// Diagonalize a Hermitian matrix; eigenvalues are sorted ascending with
    /// ties kept in the order the eigensolver produced them.
    pub fn from_matrix(h: &CMatrix) -> Result<Self> {
        let (energies, vectors) = h.eigh()?;
        Ok(SpectralHamiltonian { energies, basis_transform: Some(vectors) })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Unitary whose columns are the energy eigenvectors, when known.
    pub fn basis_transform(&self) -> Option<&CMatrix> {
        self.basis_transform.as_ref()
    }

    /// Rotate a state given in the input basis into the energy basis.
    pub fn to_energy_basis(&self, rho: &DensityMatrix) -> DensityMatrix {
        match &self.basis_transform {
            Some(u) => DensityMatrix { matrix: rho.matrix.conjugate_by(u) },
            None => rho.clone(),
        }
    }

    pub fn max_gap(&self) -> f64 {
        self.energies[self.energies.len() - 1] - self.energies[0]
    }

    /// Smallest nonzero gap between any two levels, if one exists.
    pub fn min_nonzero_gap(&self) -> Option<f64> {
        let mut min: Option<f64> = None;
        for i in 0..self.energies.len() {
            for j in (i + 1)..self.energies.len() {
                let g = self.energies[j] - self.energies[i];
                if g > 0.0 && min.map_or(true, |m| g < m) {
                    min = Some(g);
                }
            }
        }
        min
    }
}

/// Real orthogonal Bloch-space evolution matrix at a fixed time.
#[derive(Clone, Debug)]
pub struct EvolutionMatrix {
    pub matrix: RMatrix,
    pub time: f64,
}

impl EvolutionMatrix {
    /// Apply r(t) = C^T(t) r.
    pub fn evolve(&self, r: &BlochVector) -> BlochVector {
        let n = self.matrix.n;
        assert_eq!(r.coeffs.len(), n);
        let mut out = vec![0.0; n];
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..n {
                acc += self.matrix[(i, j)] * r.coeffs[i];
            }
            out[j] = acc;
        }
        BlochVector::new(r.dim, out)
    }
}

/// Block-diagonal evolution matrix C(t) for the ordered su(N) basis.
pub fn c_matrix(h: &SpectralHamiltonian, t: f64) -> EvolutionMatrix {
    let n = h.dim();
    let mut m = RMatrix::identity(n * n - 1);
    for block in 1..n {
        for i in 0..block {
            let gap = h.energies()[block] - h.energies()[i];
            let (a, b) = bloch::pair_index(n, block, i).expect("indices in range");
            let (s, c) = (gap * t).sin_cos();
            m[(a, a)] = c;
            m[(a, b)] = -s;
            m[(b, a)] = s;
            m[(b, b)] = c;
        }
    }
    EvolutionMatrix { matrix: m, time: t }
}

/// Rotate Bloch coefficients forward by `dt` without building the full
/// matrix; identical to applying `c_matrix(h, dt)` transposed.
pub fn evolve_coeffs(h: &SpectralHamiltonian, r: &BlochVector, dt: f64) -> BlochVector {
    let n = h.dim();
    let mut out = r.coeffs.clone();
    for block in 1..n {
        for i in 0..block {
            let gap = h.energies()[block] - h.energies()[i];
            if gap == 0.0 {
                continue;
            }
            let (a, b) = bloch::pair_index(n, block, i).expect("indices in range");
            let (s, c) = (gap * dt).sin_cos();
            let (ra, rb) = (out[a], out[b]);
            out[a] = c * ra + s * rb;
            out[b] = -s * ra + c * rb;
        }
    }
    BlochVector::new(r.dim, out)
}

/// Squared coefficient weight of every level pair, plus the squared norm.
fn pair_weights(r: &BlochVector, h: &SpectralHamiltonian) -> (Vec<(f64, f64)>, f64) {
    let n = h.dim();
    let mut weights = Vec::with_capacity(n * (n - 1) / 2);
    for block in 1..n {
        for i in 0..block {
            let gap = h.energies()[block] - h.energies()[i];
            let (a, b) = bloch::pair_index(n, block, i).expect("indices in range");
            let w = r.coeffs[a] * r.coeffs[a] + r.coeffs[b] * r.coeffs[b];
            weights.push((gap, w));
        }
    }
    (weights, r.coeffs.iter().map(|c| c * c).sum())
}

/// Membership function f(t); zero iff the state is stationary up to phase.
pub fn membership_function_f(r: &BlochVector, h: &SpectralHamiltonian, t: f64) -> Result<f64> {
    let (weights, norm_sq) = pair_weights(r, h);
    if norm_sq == 0.0 {
        return Err(QslError::ZeroBlochVector);
    }
    Ok(weights
        .iter()
        .map(|(gap, w)| (1.0 - (gap * t).cos()) * w)
        .sum::<f64>()
        / norm_sq)
}

/// Outcome of a reachable-set membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub in_s: bool,
    /// Smallest positive time at which the target angle is reached.
    pub t_first: Option<f64>,
    /// Whether a negative answer is conclusive (true for periodic spectra,
    /// where one period decides; false when the search merely exhausted a
    /// finite horizon of an aperiodic evolution).
    pub definitive: bool,
}

/// Test whether `r` (in the energy basis) can reach target angle `theta`,
/// searching `horizon_periods` pseudo-periods when the spectrum is
/// incommensurable. Periodic spectra are decided within one period.
pub fn in_s(
    r: &BlochVector,
    h: &SpectralHamiltonian,
    theta: f64,
    horizon_periods: u32,
) -> Result<Membership> {
    check_theta(theta)?;
    let (weights, norm_sq) = pair_weights(r, h);
    if norm_sq == 0.0 {
        return Err(QslError::ZeroBlochVector);
    }
    let target = 1.0 - theta.cos();
    let sup_bound = 2.0 * weights.iter().map(|(_, w)| w).sum::<f64>() / norm_sq;
    if sup_bound < target - 1e-12 {
        return Ok(Membership { in_s: false, t_first: None, definitive: true });
    }

    let Some(g_min) = h.min_nonzero_gap() else {
        // fully degenerate spectrum: nothing moves
        return Ok(Membership { in_s: false, t_first: None, definitive: true });
    };
    let period = period(h, PERIOD_REL_TOL);
    let (horizon, definitive) = match period {
        Some(t_p) => (t_p, true),
        None => (horizon_periods as f64 * 2.0 * std::f64::consts::PI / g_min, false),
    };
    let step = 2.0 * std::f64::consts::PI / h.max_gap() / SAMPLES_PER_PERIOD;

    let g = |t: f64| {
        weights
            .iter()
            .map(|(gap, w)| (1.0 - (gap * t).cos()) * w)
            .sum::<f64>()
            / norm_sq
            - target
    };
    match roots::first_level_crossing(&g, step, horizon, 1e-12, 1e-10) {
        Some(t) => Ok(Membership { in_s: true, t_first: Some(t), definitive: true }),
        None => Ok(Membership { in_s: false, t_first: None, definitive }),
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= std::f64::consts::PI) {
        return Err(QslError::ThetaOutOfRange(theta));
    }
    Ok(())
}

/// Minimum time over the reachable set: Theta / (E_max - E_0).
pub fn qsl_tau(h: &SpectralHamiltonian, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let gap = h.max_gap();
    if gap <= 0.0 {
        return Err(QslError::DegenerateSpectrum);
    }
    Ok(theta / gap)
}

/// Minimum time over states supported on the single pair (k, m).
pub fn tau_km(h: &SpectralHamiltonian, k: usize, m: usize, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if m >= k || k > h.dim() - 1 {
        return Err(QslError::DomainError(format!("need m < k <= N-1, got k={k}, m={m}")));
    }
    let gap = h.energies()[k] - h.energies()[m];
    if gap <= 0.0 {
        return Err(QslError::DegenerateSpectrum);
    }
    Ok(theta / gap)
}

/// States attaining the minimum time: maximally mixed diagonal plus a
/// coherence `xi` between the lowest and highest levels, |xi| in (0, 1/N].
pub fn optimal_states(h: &SpectralHamiltonian, xi: Complex64) -> Result<DensityMatrix> {
    let n = h.dim();
    let mag = xi.norm();
    if mag <= 0.0 || mag > 1.0 / n as f64 + 1e-15 {
        return Err(QslError::InvalidCoefficient(mag));
    }
    let mut m = CMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0));
    m[(0, n - 1)] = xi;
    m[(n - 1, 0)] = xi.conj();
    DensityMatrix::new(m)
}

/// Period of C(t) when all nonzero gaps are integer multiples of a common
/// divisor; `None` for incommensurable spectra.
pub fn period(h: &SpectralHamiltonian, rel_tol: f64) -> Option<f64> {
    let mut gaps = Vec::new();
    for i in 0..h.dim() {
        for j in (i + 1)..h.dim() {
            let g = h.energies()[j] - h.energies()[i];
            if g > 0.0 {
                gaps.push(g);
            }
        }
    }
    let max_gap = gaps.iter().cloned().fold(f64::NAN, f64::max);
    if gaps.is_empty() || !max_gap.is_finite() {
        return None;
    }
    let stop = rel_tol * max_gap;
    let mut g = gaps[0];
    for &x in &gaps[1..] {
        g = float_gcd(g, x, stop);
        if g < max_gap * 1e-6 {
            return None;
        }
    }
    // every gap must be an integer multiple of g
    for &x in &gaps {
        let k = (x / g).round();
        if k < 1.0 || (x - k * g).abs() > rel_tol * x {
            return None;
        }
    }
    Some(2.0 * std::f64::consts::PI / g)
}

fn float_gcd(a: f64, b: f64, stop: f64) -> f64 {
    let (mut a, mut b) = (a.max(b), a.min(b));
    while b > stop {
        let r = (a - b * (a / b).round()).abs();
        a = b;
        b = r;
    }
    a
}

/// Guaranteed time zeta = T - tau for periodic evolutions.
pub fn guaranteed_time(h: &SpectralHamiltonian, theta: f64) -> Result<f64> {
    let t_period = period(h, PERIOD_REL_TOL).ok_or(QslError::AperiodicEvolution)?;
    Ok(t_period - qsl_tau(h, theta)?)
}

/// Polar-angle band of the two-level reachable set: [Theta/2, pi - Theta/2].
pub fn tls_alpha_band(theta: f64) -> Result<(f64, f64)> {
    check_theta(theta)?;
    Ok((0.5 * theta, std::f64::consts::PI - 0.5 * theta))
}
