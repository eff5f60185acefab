//! Grid search over initial states: membership in the reachable set, first
//! crossing times, and the extremes tau (minimum) and zeta (guaranteed).
//!
//! The scanner is backend-agnostic; anything that can propagate a Bloch
//! vector forward in time plugs in. Searches are deterministic: fixed
//! sampling, bisection refinement, no randomness.

use crate::bloch::{self, BlochVector};
use crate::error::{QslError, Result};
use crate::numerics::roots;
use crate::unitary::{self, SpectralHamiltonian};

/// Bloch vectors shorter than this are treated as the zero vector, where the
/// angle is undefined.
pub const NORM_EPS: f64 = 1e-12;

/// Propagator for Bloch vectors under some fixed dynamics.
pub trait DynamicsBackend {
    /// Hilbert-space dimension N.
    fn state_dim(&self) -> usize;

    /// State at `t1` given the state `r` at `t0 <= t1`. Time-homogeneous
    /// dynamics only depend on `t1 - t0`; time-dependent Hamiltonians use
    /// both endpoints.
    fn evolve_between(&self, r: &BlochVector, t0: f64, t1: f64) -> BlochVector;

    fn evolve(&self, r0: &BlochVector, t: f64) -> BlochVector {
        self.evolve_between(r0, 0.0, t)
    }

    /// Sampling step that resolves the fastest oscillation on `[0, horizon]`.
    fn sample_step(&self, horizon: f64) -> f64;

    /// Exact return-to-start period, when one exists.
    fn period(&self) -> Option<f64>;

    /// Search horizon used when the caller does not override it.
    fn default_horizon(&self) -> f64;
}

/// Closed-form unitary evolution driven by a spectral Hamiltonian.
pub struct UnitaryBackend {
    h: SpectralHamiltonian,
}

impl UnitaryBackend {
    pub fn new(h: SpectralHamiltonian) -> Self {
        UnitaryBackend { h }
    }

    pub fn hamiltonian(&self) -> &SpectralHamiltonian {
        &self.h
    }
}

impl DynamicsBackend for UnitaryBackend {
    fn state_dim(&self) -> usize {
        self.h.dim()
    }

    fn evolve_between(&self, r: &BlochVector, t0: f64, t1: f64) -> BlochVector {
        unitary::evolve_coeffs(&self.h, r, t1 - t0)
    }

    fn sample_step(&self, _horizon: f64) -> f64 {
        2.0 * std::f64::consts::PI / self.h.max_gap() / unitary::SAMPLES_PER_PERIOD
    }

    fn period(&self) -> Option<f64> {
        unitary::period(&self.h, unitary::PERIOD_REL_TOL)
    }

    fn default_horizon(&self) -> f64 {
        match self.period() {
            Some(t) => t,
            None => {
                let g_min = self.h.min_nonzero_gap().unwrap_or_else(|| self.h.max_gap());
                unitary::DEFAULT_HORIZON_PERIODS as f64 * 2.0 * std::f64::consts::PI / g_min
            }
        }
    }
}

/// First time in `(0, horizon]` at which the evolved state makes angle
/// `theta` with the initial state; `None` if the horizon is exhausted.
///
/// Crossings of cos(theta(t)) through cos(Theta) are bisected; tangential
/// touches are accepted when the refined residual drops below 1e-12. For
/// Theta = pi, a trajectory passing through the origin with a direction
/// reversal counts as reaching the target at the passage time.
pub fn time_to_target(
    backend: &dyn DynamicsBackend,
    r0: &BlochVector,
    theta: f64,
    horizon: f64,
) -> Result<Option<f64>> {
    if !(theta > 0.0 && theta <= std::f64::consts::PI) {
        return Err(QslError::ThetaOutOfRange(theta));
    }
    if horizon <= 0.0 {
        return Err(QslError::DomainError("horizon must be positive".into()));
    }
    let n0 = r0.norm();
    if n0 <= NORM_EPS {
        return Err(QslError::ZeroBlochVector);
    }
    let target = theta.cos();
    let theta_is_pi = (theta - std::f64::consts::PI).abs() < 1e-12;
    let step = backend.sample_step(horizon).min(horizon / 4.0);
    let k_max = (horizon / step).ceil() as usize;

    struct Sample {
        t: f64,
        r: BlochVector,
        norm: f64,
        g: Option<f64>,
    }

    let make_g = |base: &Sample, tt: f64, backend: &dyn DynamicsBackend| -> f64 {
        let r = backend.evolve_between(&base.r, base.t, tt);
        let n = r.norm();
        if n <= NORM_EPS {
            // undefined angle; large value so refinement steers away
            return 1e6;
        }
        r0.dot(&r) / (n0 * n) - target
    };

    let mut prev2: Option<Sample> = None;
    let mut prev: Option<Sample> = None;
    for k in 0..=k_max {
        let t = (k as f64 * step).min(horizon);
        let r = match &prev {
            None => r0.clone(),
            Some(p) => backend.evolve_between(&p.r, p.t, t),
        };
        let norm = r.norm();
        let g = (norm > NORM_EPS).then(|| r0.dot(&r) / (n0 * norm) - target);
        let cur = Sample { t, r, norm, g };

        // Origin passage with direction reversal (target angle pi only).
        if theta_is_pi {
            if let (Some(p2), Some(p1)) = (&prev2, &prev) {
                if p1.norm <= p2.norm && p1.norm <= cur.norm && p1.norm < 0.5 * n0 {
                    let norm_at =
                        |tt: f64| backend.evolve_between(&p2.r, p2.t, tt).norm();
                    let (t_dip, n_dip) = roots::minimize_abs(&norm_at, p2.t, cur.t, 1e-13);
                    if n_dip <= (1e-9 * n0).max(1e-12) && t_dip > 1e-12 {
                        let d = (step * 1e-3).max(1e-9);
                        let before = backend.evolve_between(&p2.r, p2.t, t_dip - d);
                        let after = backend.evolve_between(&p2.r, p2.t, t_dip + d);
                        if before.dot(&after) < 0.0 {
                            return Ok(Some(t_dip));
                        }
                    }
                }
            }
        }

        // Tangential touch centred on the previous sample.
        if let (Some(p2), Some(p1)) = (&prev2, &prev) {
            if let (Some(g2), Some(g1), Some(gk)) = (p2.g, p1.g, cur.g) {
                if g1.abs() <= g2.abs()
                    && g1.abs() <= gk.abs()
                    && (g1.abs() < g2.abs() || g1.abs() < gk.abs())
                    && g1.signum() == g2.signum()
                    && g1.signum() == gk.signum()
                {
                    let g_at = |tt: f64| make_g(p2, tt, backend);
                    let (t_touch, g_min) = roots::minimize_abs(&g_at, p2.t, cur.t, 1e-13);
                    if g_min <= 1e-12 && t_touch > 1e-12 {
                        return Ok(Some(t_touch));
                    }
                }
            }
        }

        // Plain sign change between the last two defined samples.
        if let Some(p1) = &prev {
            if let (Some(g1), Some(gk)) = (p1.g, cur.g) {
                if g1 == 0.0 && p1.t > 0.0 {
                    return Ok(Some(p1.t));
                }
                if gk == 0.0 {
                    return Ok(Some(cur.t));
                }
                if g1.signum() != gk.signum() {
                    let g_at = |tt: f64| make_g(p1, tt, backend);
                    let t_cross = roots::bisect(&g_at, p1.t, cur.t, 1e-13);
                    return Ok(Some(t_cross));
                }
            }
        }

        prev2 = prev;
        prev = Some(cur);
    }
    Ok(None)
}

/// Rectangular (eta, alpha, phi) grid of initial states.
#[derive(Clone, Debug)]
pub struct ScanGrid {
    pub etas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl ScanGrid {
    /// Uniform grid: eta on (0, 1] (endpoint included, zero excluded),
    /// alpha on [0, pi], phi on [0, 2 pi).
    pub fn uniform(n_eta: usize, n_alpha: usize, n_phi: usize) -> Self {
        assert!(n_eta > 0 && n_alpha > 1 && n_phi > 0);
        let etas = (1..=n_eta).map(|j| j as f64 / n_eta as f64).collect();
        let alphas = (0..n_alpha)
            .map(|i| i as f64 * std::f64::consts::PI / (n_alpha - 1) as f64)
            .collect();
        let phis = (0..n_phi)
            .map(|k| k as f64 * 2.0 * std::f64::consts::PI / n_phi as f64)
            .collect();
        ScanGrid { etas, alphas, phis }
    }

    /// The default resolution: 48 alpha x 32 phi x 16 eta.
    pub fn default_figure() -> Self {
        ScanGrid::uniform(16, 48, 32)
    }

    pub fn len(&self) -> usize {
        self.etas.len() * self.alphas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<()> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if self.etas.is_empty() || self.alphas.is_empty() || self.phis.is_empty() {
            return Err(QslError::DomainError("grid axes must be nonempty".into()));
        }
        if !increasing(&self.etas) || !increasing(&self.alphas) || !increasing(&self.phis) {
            return Err(QslError::DomainError("grid axes must be strictly increasing".into()));
        }
        if self.etas[0] <= 0.0 {
            return Err(QslError::DomainError("eta axis must exclude zero".into()));
        }
        Ok(())
    }
}

/// Maps grid coordinates onto Bloch vectors.
///
/// Two-level systems use the spherical parameterization directly. For N > 2
/// the grid spans the qubit-like submanifold of the highest-gap coherence
/// pair plus the last diagonal direction; points whose reconstructed density
/// matrix is not positive are marked invalid and skipped.
#[derive(Clone, Copy, Debug)]
pub enum StateMap {
    Qubit,
    MaxGapPlane { dim: usize },
}

impl StateMap {
    pub fn for_dim(dim: usize) -> Self {
        if dim == 2 {
            StateMap::Qubit
        } else {
            StateMap::MaxGapPlane { dim }
        }
    }

    pub fn map(&self, eta: f64, alpha: f64, phi: f64) -> BlochVector {
        match self {
            StateMap::Qubit => BlochVector::qubit(eta, alpha, phi),
            StateMap::MaxGapPlane { dim } => {
                let n = *dim;
                let (a, b) = bloch::pair_index(n, n - 1, 0).expect("max-gap pair");
                let d = bloch::diagonal_index(n - 1);
                let mut coeffs = vec![0.0; n * n - 1];
                coeffs[a] = eta * alpha.sin() * phi.cos();
                coeffs[b] = eta * alpha.sin() * phi.sin();
                coeffs[d] = eta * alpha.cos();
                BlochVector::new(n, coeffs)
            }
        }
    }
}

/// Per-grid-point scan record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    /// False when the grid coordinates do not correspond to a physical state
    /// (possible only for the embedded N > 2 maps).
    pub valid: bool,
    pub in_s: bool,
    pub t_first: Option<f64>,
}

/// Scan output: membership and first-crossing time at every grid point, in
/// row-major order with eta outermost, then alpha, then phi.
#[derive(Clone, Debug)]
pub struct SSetResult {
    pub theta: f64,
    pub grid: ScanGrid,
    pub points: Vec<ScanPoint>,
    /// Crossing times of explicitly injected extra states, matching the
    /// order they were supplied in.
    pub injected: Vec<Option<f64>>,
    /// Backend period, used to derive the guaranteed time.
    pub period: Option<f64>,
    pub horizon: f64,
}

impl SSetResult {
    pub fn point(&self, ie: usize, ia: usize, ip: usize) -> &ScanPoint {
        let na = self.grid.alphas.len();
        let np = self.grid.phis.len();
        &self.points[(ie * na + ia) * np + ip]
    }

    /// Minimum first-crossing time over all members, grid and injected.
    pub fn min_t_first(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|p| p.t_first)
            .chain(self.injected.iter().filter_map(|t| *t))
            .fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.min(t))))
    }

    /// Maximum first-crossing time over all members.
    pub fn max_t_first(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|p| p.t_first)
            .chain(self.injected.iter().filter_map(|t| *t))
            .fold(None, |acc, t| Some(acc.map_or(t, |a: f64| a.max(t))))
    }
}

/// Evaluate membership over a grid. `horizon` falls back to the backend
/// default when `None`.
pub fn scan_s(
    backend: &dyn DynamicsBackend,
    grid: &ScanGrid,
    theta: f64,
    horizon: Option<f64>,
) -> Result<SSetResult> {
    scan_s_with_injection(backend, grid, theta, horizon, &[])
}

/// Same as [`scan_s`], with extra states appended to the search (used to
/// inject analytically optimal states).
pub fn scan_s_with_injection(
    backend: &dyn DynamicsBackend,
    grid: &ScanGrid,
    theta: f64,
    horizon: Option<f64>,
    extra_states: &[BlochVector],
) -> Result<SSetResult> {
    grid.validate()?;
    let horizon = horizon.unwrap_or_else(|| backend.default_horizon());
    let map = StateMap::for_dim(backend.state_dim());
    let basis = if backend.state_dim() > 2 {
        Some(bloch::build_generator_basis(backend.state_dim())?)
    } else {
        None
    };

    let mut points = Vec::with_capacity(grid.len());
    for &eta in &grid.etas {
        for &alpha in &grid.alphas {
            for &phi in &grid.phis {
                let r = map.map(eta, alpha, phi);
                if let Some(b) = &basis {
                    if bloch::rho_from_bloch(&r, b).is_err() {
                        points.push(ScanPoint { valid: false, in_s: false, t_first: None });
                        continue;
                    }
                }
                if r.norm() <= NORM_EPS {
                    points.push(ScanPoint { valid: false, in_s: false, t_first: None });
                    continue;
                }
                let t = time_to_target(backend, &r, theta, horizon)?;
                points.push(ScanPoint { valid: true, in_s: t.is_some(), t_first: t });
            }
        }
    }

    let mut injected = Vec::with_capacity(extra_states.len());
    for r in extra_states {
        injected.push(time_to_target(backend, r, theta, horizon)?);
    }

    Ok(SSetResult {
        theta,
        grid: grid.clone(),
        points,
        injected,
        period: backend.period(),
        horizon,
    })
}

/// Minimum and guaranteed times from a scan.
///
/// tau is the smallest first-crossing time over members. For periodic
/// dynamics zeta is period - tau (the last target visit within one period,
/// maximized over the set); without a period the largest observed
/// first-crossing time is reported instead.
pub fn extract_tau_zeta(result: &SSetResult) -> Result<(f64, f64)> {
    let tau = result.min_t_first().ok_or(QslError::EmptySet)?;
    let zeta = match result.period {
        Some(t_p) => t_p - tau,
        None => result.max_t_first().expect("members exist"),
    };
    Ok((tau, zeta))
}

/// One refined boundary location in a fixed (eta, phi) column.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryPoint {
    pub eta: f64,
    pub phi: f64,
    /// Refined alpha at which membership flips.
    pub alpha_c: f64,
    /// True when the flip is from non-member (below) to member (above).
    pub entering: bool,
}

/// Localize membership boundaries in alpha by bisection at fixed (eta, phi),
/// to within `alpha_tol` (1e-4 rad by default downstream).
pub fn tighten_boundary(
    backend: &dyn DynamicsBackend,
    theta: f64,
    coarse: &SSetResult,
    alpha_tol: f64,
) -> Result<Vec<BoundaryPoint>> {
    let mut out = Vec::new();
    let grid = &coarse.grid;
    let map = StateMap::for_dim(backend.state_dim());
    for (ie, &eta) in grid.etas.iter().enumerate() {
        for (ip, &phi) in grid.phis.iter().enumerate() {
            for ia in 0..grid.alphas.len() - 1 {
                let below = coarse.point(ie, ia, ip);
                let above = coarse.point(ie, ia + 1, ip);
                if !below.valid || !above.valid || below.in_s == above.in_s {
                    continue;
                }
                let member_at = |alpha: f64| -> Result<bool> {
                    let r = map.map(eta, alpha, phi);
                    Ok(time_to_target(backend, &r, theta, coarse.horizon)?.is_some())
                };
                let mut lo = grid.alphas[ia];
                let mut hi = grid.alphas[ia + 1];
                let lo_member = below.in_s;
                while hi - lo > alpha_tol {
                    let mid = 0.5 * (lo + hi);
                    if member_at(mid)? == lo_member {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(BoundaryPoint {
                    eta,
                    phi,
                    alpha_c: 0.5 * (lo + hi),
                    entering: above.in_s,
                });
            }
        }
    }
    Ok(out)
}
