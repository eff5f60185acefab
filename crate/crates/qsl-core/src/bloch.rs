//! su(N) generator bases, Bloch-vector / density-matrix conversions and the
//! target-angle function.
//!
//! The generator ordering is the block convention that makes unitary
//! evolution act on coefficient pairs: for every level n in 1..N, the
//! real/imaginary coherence generators between level i < n and level n sit at
//! coefficient indices (n^2 + 2i - 1, n^2 + 2i), and the diagonal generator
//! closing block n sits at (n+1)^2 - 2. All generators are Hermitian,
//! traceless and normalized to Tr(g_i g_j) = 2 delta_ij.

use num_complex::Complex64;

use crate::error::{QslError, Result};
use crate::linalg::CMatrix;

/// Tolerance for positivity checks on reconstructed density matrices.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Ordered su(N) generator basis.
#[derive(Clone, Debug)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    /// Number of Hilbert-space levels N.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, N^2 - 1.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, index: usize) -> &CMatrix {
        &self.generators[index]
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }
}

/// Real coefficient vector over an ordered su(N) basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    pub dim: usize,
    pub coeffs: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), dim * dim - 1, "coefficient count must be N^2 - 1");
        BlochVector { dim, coeffs }
    }

    /// Qubit vector from spherical coordinates, r = eta (sin a cos p, sin a sin p, cos a).
    pub fn qubit(eta: f64, alpha: f64, phi: f64) -> Self {
        BlochVector::new(
            2,
            vec![
                eta * alpha.sin() * phi.cos(),
                eta * alpha.sin() * phi.sin(),
                eta * alpha.cos(),
            ],
        )
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn negated(&self) -> BlochVector {
        BlochVector::new(self.dim, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Complex N x N density matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub matrix: CMatrix,
}

impl DensityMatrix {
    /// Validate hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let scale = matrix.max_abs().max(1.0);
        if !matrix.is_hermitian(1e-12 * scale) {
            return Err(QslError::InvalidState("density matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(QslError::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let (vals, _) = matrix.eigh()?;
        if let Some(min) = vals.first() {
            if *min < -POSITIVITY_TOL {
                return Err(QslError::InvalidState(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    /// Maximally mixed state 1/N.
    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix { matrix: CMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)) }
    }

    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }
}

/// Zero-based coefficient indices of the (E_i, E_n) coherence pair.
pub fn pair_index(dim: usize, n: usize, i: usize) -> Result<(usize, usize)> {
    if n < 1 || n > dim - 1 || i > n - 1 {
        return Err(QslError::DomainError(format!(
            "pair (n={n}, i={i}) out of range for N={dim}"
        )));
    }
    Ok((n * n + 2 * i - 1, n * n + 2 * i))
}

/// Zero-based coefficient index of the diagonal generator closing block n.
pub fn diagonal_index(n: usize) -> usize {
    (n + 1) * (n + 1) - 2
}

/// Build the ordered su(N) generator basis.
///
/// For N = 2 this is Pauli X, Y, Z; for N = 3 the Gell-Mann matrices in block
/// order; higher N follows the same pattern.
pub fn build_generator_basis(dim: usize) -> Result<GeneratorBasis> {
    if dim < 2 {
        return Err(QslError::DimensionTooSmall(dim));
    }
    let count = dim * dim - 1;
    let mut generators = vec![CMatrix::zeros(dim); count];
    for n in 1..dim {
        for i in 0..n {
            let (re_idx, im_idx) = pair_index(dim, n, i)?;
            let mut x = CMatrix::zeros(dim);
            x[(i, n)] = Complex64::new(1.0, 0.0);
            x[(n, i)] = Complex64::new(1.0, 0.0);
            generators[re_idx] = x;
            let mut y = CMatrix::zeros(dim);
            y[(i, n)] = Complex64::new(0.0, -1.0);
            y[(n, i)] = Complex64::new(0.0, 1.0);
            generators[im_idx] = y;
        }
        // diag(1, ..., 1, -n, 0, ..., 0) / sqrt(n(n+1)/2)
        let norm = (2.0 / (n as f64 * (n as f64 + 1.0))).sqrt();
        let mut d = CMatrix::zeros(dim);
        for k in 0..n {
            d[(k, k)] = Complex64::new(norm, 0.0);
        }
        d[(n, n)] = Complex64::new(-(n as f64) * norm, 0.0);
        generators[diagonal_index(n)] = d;
    }
    Ok(GeneratorBasis { dim, generators })
}

/// rho = (1/N)(I + sqrt(N(N-1)/2) r . lambda), rejecting non-positive results.
pub fn rho_from_bloch(r: &BlochVector, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    if r.dim != basis.dim() {
        return Err(QslError::DimensionMismatch(format!(
            "vector dim {} vs basis dim {}",
            r.dim,
            basis.dim()
        )));
    }
    let n = basis.dim();
    let pref = (n as f64 * (n as f64 - 1.0) / 2.0).sqrt() / n as f64;
    let mut m = CMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0));
    for (c, g) in r.coeffs.iter().zip(basis.generators()) {
        if *c == 0.0 {
            continue;
        }
        m = m.add(&g.scale(Complex64::new(pref * c, 0.0)));
    }
    DensityMatrix::new(m)
}

/// Inverse of [`rho_from_bloch`]: r_i = sqrt(N / (2(N-1))) Tr(rho g_i).
pub fn bloch_from_rho(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochVector> {
    if rho.dim() != basis.dim() {
        return Err(QslError::DimensionMismatch(format!(
            "state dim {} vs basis dim {}",
            rho.dim(),
            basis.dim()
        )));
    }
    let n = basis.dim();
    let pref = (n as f64 / (2.0 * (n as f64 - 1.0))).sqrt();
    let coeffs = basis
        .generators()
        .iter()
        .map(|g| pref * rho.matrix.mul(g).trace().re)
        .collect();
    Ok(BlochVector::new(n, coeffs))
}

/// Angle between two nonzero Bloch vectors, arccos of the normalized inner
/// product. The zero vector has no direction, so it is rejected; callers must
/// treat trajectories passing through the origin separately.
pub fn angle_between(r1: &BlochVector, r2: &BlochVector) -> Result<f64> {
    let n1 = r1.norm();
    let n2 = r2.norm();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(QslError::ZeroBlochVector);
    }
    let c = (r1.dot(r2) / (n1 * n2)).clamp(-1.0, 1.0);
    Ok(c.acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pauli() -> Vec<CMatrix> {
        build_generator_basis(2).unwrap().generators().to_vec()
    }

    #[test]
    fn basis_n2_is_pauli() {
        let g = pauli();
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(g[0][(0, 1)], one);
        assert_eq!(g[0][(1, 0)], one);
        assert_eq!(g[1][(0, 1)], -i);
        assert_eq!(g[1][(1, 0)], i);
        assert_eq!(g[2][(0, 0)], one);
        assert_eq!(g[2][(1, 1)], -one);
    }

    #[test]
    fn basis_rejects_n1() {
        assert!(build_generator_basis(1).is_err());
    }

    #[test]
    fn basis_n4_matches_listed_generators() {
        let b = build_generator_basis(4).unwrap();
        // lambda_7 = diag(1,1,-2,0)/sqrt(3)
        let l7 = b.generator(7);
        let s3 = 1.0 / 3.0f64.sqrt();
        assert_abs_diff_eq!(l7[(0, 0)].re, s3, epsilon = 1e-15);
        assert_abs_diff_eq!(l7[(1, 1)].re, s3, epsilon = 1e-15);
        assert_abs_diff_eq!(l7[(2, 2)].re, -2.0 * s3, epsilon = 1e-15);
        assert_abs_diff_eq!(l7[(3, 3)].re, 0.0, epsilon = 1e-15);
        // lambda_14 = diag(1,1,1,-3)/sqrt(6)
        let l14 = b.generator(14);
        let s6 = 1.0 / 6.0f64.sqrt();
        for k in 0..3 {
            assert_abs_diff_eq!(l14[(k, k)].re, s6, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(l14[(3, 3)].re, -3.0 * s6, epsilon = 1e-15);
        // lambda_8 couples levels 0 and 3
        let l8 = b.generator(8);
        assert_eq!(l8[(0, 3)], Complex64::new(1.0, 0.0));
        assert_eq!(l8[(3, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn basis_orthonormality() {
        for n in 2..=6 {
            let b = build_generator_basis(n).unwrap();
            for i in 0..b.len() {
                assert!(b.generator(i).trace().norm() < 1e-12, "traceless");
                assert!(b.generator(i).is_hermitian(1e-14), "Hermitian");
                for j in 0..b.len() {
                    let t = b.generator(i).mul(b.generator(j)).trace();
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!(
                        (t.re - expect).abs() < 1e-12 && t.im.abs() < 1e-12,
                        "Tr(g{i} g{j}) = {t} at N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn pair_index_examples() {
        assert_eq!(pair_index(2, 1, 0).unwrap(), (0, 1));
        assert_eq!(pair_index(3, 2, 1).unwrap(), (5, 6));
        let n = 5usize;
        assert_eq!(pair_index(n, n - 1, 0).unwrap(), (n * n - 2 * n, n * n - 2 * n + 1));
        assert!(pair_index(3, 3, 0).is_err());
        assert!(pair_index(3, 1, 1).is_err());
    }

    #[test]
    fn pair_and_diagonal_indices_partition_coefficients() {
        for n in 2..=6 {
            let mut seen = vec![false; n * n - 1];
            for block in 1..n {
                for i in 0..block {
                    let (a, b) = pair_index(n, block, i).unwrap();
                    assert!(!seen[a] && !seen[b], "pair indices must be unique");
                    seen[a] = true;
                    seen[b] = true;
                }
                let d = diagonal_index(block);
                assert!(!seen[d]);
                seen[d] = true;
            }
            assert!(seen.iter().all(|&s| s), "indices must cover 0..N^2-2 at N={n}");
        }
    }

    #[test]
    fn rho_from_bloch_poles_and_mixed() {
        let b2 = build_generator_basis(2).unwrap();
        let north = rho_from_bloch(&BlochVector::new(2, vec![0.0, 0.0, 1.0]), &b2).unwrap();
        assert_abs_diff_eq!(north.matrix[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(north.matrix[(1, 1)].re, 0.0, epsilon = 1e-14);

        let plus_x = rho_from_bloch(&BlochVector::new(2, vec![1.0, 0.0, 0.0]), &b2).unwrap();
        let (vals, _) = plus_x.matrix.eigh().unwrap();
        assert_abs_diff_eq!(vals[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-14);

        let b3 = build_generator_basis(3).unwrap();
        let mixed = rho_from_bloch(&BlochVector::new(3, vec![0.0; 8]), &b3).unwrap();
        for k in 0..3 {
            assert_abs_diff_eq!(mixed.matrix[(k, k)].re, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rho_from_bloch_rejects_nonpositive() {
        let b3 = build_generator_basis(3).unwrap();
        // Full-length vector along a coherence pair direction is outside the
        // positivity body for N = 3.
        let mut coeffs = vec![0.0; 8];
        coeffs[3] = 1.0;
        assert!(rho_from_bloch(&BlochVector::new(3, coeffs), &b3).is_err());
    }

    #[test]
    fn bloch_round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 2..=6 {
            let basis = build_generator_basis(n).unwrap();
            for _ in 0..20 {
                // random valid state rho = A A^dag / Tr
                let mut a = CMatrix::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        a[(i, j)] =
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    }
                }
                let aa = a.mul(&a.adjoint());
                let rho =
                    DensityMatrix::new(aa.scale(Complex64::new(1.0 / aa.trace().re, 0.0))).unwrap();
                let r = bloch_from_rho(&rho, &basis).unwrap();
                let back = rho_from_bloch(&r, &basis).unwrap();
                for i in 0..n {
                    for j in 0..n {
                        assert!((back.matrix[(i, j)] - rho.matrix[(i, j)]).norm() < 1e-12);
                    }
                }
                let r2 = bloch_from_rho(&back, &basis).unwrap();
                for (x, y) in r.coeffs.iter().zip(r2.coeffs.iter()) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bloch_from_rho_trivial_cases() {
        let b2 = build_generator_basis(2).unwrap();
        let r = bloch_from_rho(&DensityMatrix::maximally_mixed(2), &b2).unwrap();
        assert!(r.norm() < 1e-15);

        // (I + sigma_y)/2 -> (0, 1, 0)
        let mut m = CMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        m[(0, 1)] = Complex64::new(0.0, -0.5);
        m[(1, 0)] = Complex64::new(0.0, 0.5);
        let r = bloch_from_rho(&DensityMatrix::new(m).unwrap(), &b2).unwrap();
        assert_abs_diff_eq!(r.coeffs[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coeffs[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.coeffs[2], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn angle_between_basics() {
        let ex = BlochVector::new(2, vec![1.0, 0.0, 0.0]);
        let ey = BlochVector::new(2, vec![0.0, 1.0, 0.0]);
        assert_abs_diff_eq!(
            angle_between(&ex, &ey).unwrap(),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(angle_between(&ex, &ex).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            angle_between(&ex, &ex.negated()).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-15
        );
        let zero = BlochVector::new(2, vec![0.0; 3]);
        assert!(angle_between(&ex, &zero).is_err());
    }

    #[test]
    fn angle_is_symmetric_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = BlochVector::new(
                2,
                (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(),
            );
            let b = BlochVector::new(
                2,
                (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(),
            );
            if a.norm() == 0.0 || b.norm() == 0.0 {
                continue;
            }
            let t1 = angle_between(&a, &b).unwrap();
            let t2 = angle_between(&b, &a).unwrap();
            assert_abs_diff_eq!(t1, t2, epsilon = 1e-15);
        }
    }
}
