//! Transverse-field Ising chain: minimum time from the free-fermion
//! spectrum, its field susceptibility, and the slope blow-up at the critical
//! point.
//!
//! The spectrum sum over quasimomenta gives the extreme energies
//! E_max - E_0 = 2 J sum_k omega_k with omega_k = sqrt(1 - 2 h cos k + h^2),
//! so the minimum time is Theta / (2 J sum_k omega_k). In the thermodynamic
//! limit the sum becomes a complete elliptic integral of the second kind.
//!
//! Elliptic integrals use the parameter convention, E(m) with m = k^2, and
//! are evaluated by the arithmetic-geometric mean. Negative parameters are
//! supported (they arise for negative field ratios h).

use std::f64::consts::PI;

use crate::error::{QslError, Result};

const AGM_EPS: f64 = 1e-16;
const AGM_MAX_ITER: usize = 60;

/// Chain parameters: coupling J, field ratio h = B/J, spin count M and the
/// target angle.
#[derive(Clone, Copy, Debug)]
pub struct IsingParams {
    pub coupling: f64,
    pub field_ratio: f64,
    pub spins: usize,
    pub theta: f64,
}

impl IsingParams {
    pub fn validate(&self) -> Result<()> {
        if self.coupling <= 0.0 {
            return Err(QslError::DomainError("coupling J must be positive".into()));
        }
        if self.spins < 2 {
            return Err(QslError::DimensionTooSmall(self.spins));
        }
        if !(self.theta > 0.0 && self.theta <= PI) {
            return Err(QslError::ThetaOutOfRange(self.theta));
        }
        Ok(())
    }
}

/// Complete elliptic integral of the first kind, parameter convention:
/// K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi), m < 1.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if m >= 1.0 {
        return Err(QslError::DomainError(format!("K(m) diverges for m >= 1, got {m}")));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_EPS * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
    }
    Ok(PI / (2.0 * a))
}

/// Complete elliptic integral of the second kind, parameter convention:
/// E(m) = int_0^{pi/2} sqrt(1 - m sin^2 phi) dphi, m <= 1.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if m > 1.0 {
        return Err(QslError::DomainError(format!("E(m) undefined for m > 1, got {m}")));
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    // sum of 2^{n-1} c_n^2 with c_0^2 = m and c_n = (a_{n-1} - b_{n-1}) / 2
    let mut sum = 0.5 * m;
    let mut pow2 = 0.5f64;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        if c.abs() <= AGM_EPS * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        pow2 *= 2.0;
        sum += pow2 * c * c;
        a = an;
        b = bn;
    }
    Ok(PI / (2.0 * a) * (1.0 - sum))
}

/// Quasimomenta k = 2 pi n / M with n integer for odd M and half-integer for
/// even M, symmetric around zero.
fn quasimomenta(spins: usize) -> Vec<f64> {
    let m = spins as i64;
    let mut ks = Vec::with_capacity(spins);
    if spins % 2 == 1 {
        for n in -(m - 1) / 2..=(m - 1) / 2 {
            ks.push(2.0 * PI * n as f64 / m as f64);
        }
    } else {
        for j in 0..m {
            let n = j as f64 - (m as f64 - 1.0) / 2.0; // -(M-1)/2 .. (M-1)/2 in unit steps
            ks.push(2.0 * PI * n / m as f64);
        }
    }
    ks
}

/// Finite-size spectrum sum: sum_k sqrt(1 - 2 h cos k + h^2).
pub fn ising_spectrum_sum(field_ratio: f64, spins: usize) -> Result<f64> {
    if spins < 2 {
        return Err(QslError::DimensionTooSmall(spins));
    }
    let h = field_ratio;
    Ok(quasimomenta(spins)
        .iter()
        .map(|k| (1.0 - 2.0 * h * k.cos() + h * h).max(0.0).sqrt())
        .sum())
}

/// Elliptic-integral parameter 4h / (1 + h)^2.
fn elliptic_parameter(h: f64) -> f64 {
    4.0 * h / ((1.0 + h) * (1.0 + h))
}

/// Minimum time in the thermodynamic limit:
/// tau = pi sgn(1+h) Theta / (4 M J (h+1) E(4h/(h+1)^2)).
pub fn ising_tau(p: &IsingParams) -> Result<f64> {
    p.validate()?;
    let h = p.field_ratio;
    if (h + 1.0).abs() < 1e-12 {
        return Err(QslError::DomainError("h = -1 is singular".into()));
    }
    let e = elliptic_e(elliptic_parameter(h))?;
    let sgn = (1.0 + h).signum();
    Ok(PI * sgn * p.theta / (p.coupling * 4.0 * p.spins as f64 * (h + 1.0) * e))
}

/// Minimum time from the finite-size spectrum, Theta / (2 J sum_k omega_k).
pub fn ising_tau_finite(p: &IsingParams) -> Result<f64> {
    p.validate()?;
    let s = ising_spectrum_sum(p.field_ratio, p.spins)?;
    if s <= 0.0 {
        return Err(QslError::DegenerateSpectrum);
    }
    Ok(p.theta / (2.0 * p.coupling * s))
}

/// Field susceptibility d tau / d h of the thermodynamic-limit minimum time.
///
/// This is the literal derivative of [`ising_tau`]:
///   d tau / d h = -sgn(1+h) pi Theta / (8 M J h (h+1)^2 E^2(m))
///                 * [(h+1) E(m) + (h-1) K(m)],  m = 4h/(h+1)^2.
/// It is negative for 0 < h (the minimum time is largest at h = 0) and
/// matches central finite differences of `ising_tau`. Singular at
/// h in {0, +-1}.
pub fn ising_susceptibility(p: &IsingParams) -> Result<f64> {
    p.validate()?;
    let h = p.field_ratio;
    if h.abs() < 1e-12 || (h - 1.0).abs() < 1e-12 || (h + 1.0).abs() < 1e-12 {
        return Err(QslError::DomainError(format!(
            "susceptibility closed form is singular at h = {h}"
        )));
    }
    let m = elliptic_parameter(h);
    let e = elliptic_e(m)?;
    let k = elliptic_k(m)?;
    let sgn = (1.0 + h).signum();
    let pref = sgn * PI * p.theta
        / (p.coupling * 8.0 * p.spins as f64 * h * (h + 1.0) * (h + 1.0) * e * e);
    Ok(-pref * ((h + 1.0) * e + (h - 1.0) * k))
}

/// Near-critical expansion of the susceptibility magnitude for h > 1:
/// (pi Theta / J) / (32 M) [5 - 3h - (h-1) log((h-1)/8)].
pub fn ising_critical_approx(p: &IsingParams) -> Result<f64> {
    p.validate()?;
    let h = p.field_ratio;
    if h <= 1.0 {
        return Err(QslError::DomainError(format!(
            "log branch of the critical expansion needs h > 1, got {h}"
        )));
    }
    Ok(PI * p.theta / (p.coupling * 32.0 * p.spins as f64)
        * (5.0 - 3.0 * h - (h - 1.0) * ((h - 1.0) / 8.0).ln()))
}

/// Slope of the susceptibility's slope at `h` (second difference, step
/// small enough to stay on one side of the critical point).
fn susceptibility_curvature(p: &IsingParams, h: f64, step: f64) -> Result<f64> {
    let at = |hh: f64| ising_susceptibility(&IsingParams { field_ratio: hh, ..*p });
    Ok((at(h + step)? - 2.0 * at(h)? + at(h - step)?) / (step * step))
}

/// Kink indicator at the critical point h = 1.
///
/// The susceptibility stays finite there but its slope diverges
/// logarithmically, so the one-sided slope of the slope blows up as
/// 1/|h - 1|. This returns the magnification of that quantity between
/// distance `far` and distance `near` from the critical point, one-sided on
/// each side, reporting the smaller side. Smooth behaviour would give a
/// value near 1; the critical kink drives it well above 10 already at
/// near = 1e-3, far = 1e-1.
pub fn ising_kink_slope_ratio(p: &IsingParams, near: f64, far: f64) -> Result<f64> {
    let step = 1e-5;
    let left = susceptibility_curvature(p, 1.0 - near, step)?.abs()
        / susceptibility_curvature(p, 1.0 - far, step)?.abs();
    let right = susceptibility_curvature(p, 1.0 + near, step)?.abs()
        / susceptibility_curvature(p, 1.0 + far, step)?.abs();
    Ok(left.min(right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn params(h: f64, m: usize) -> IsingParams {
        IsingParams { coupling: 1.0, field_ratio: h, spins: m, theta: FRAC_PI_2 }
    }

    #[test]
    fn elliptic_special_values() {
        assert_abs_diff_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(elliptic_e(1.0).unwrap(), 1.0, epsilon = 1e-15);
        // reference values
        assert_abs_diff_eq!(elliptic_k(0.5).unwrap(), 1.854_074_677_301_372, epsilon = 1e-13);
        assert_abs_diff_eq!(elliptic_e(0.5).unwrap(), 1.350_643_881_047_676, epsilon = 1e-13);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_e(1.5).is_err());
    }

    #[test]
    fn elliptic_legendre_relation() {
        for &m in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let k = elliptic_k(m).unwrap();
            let e = elliptic_e(m).unwrap();
            let kp = elliptic_k(1.0 - m).unwrap();
            let ep = elliptic_e(1.0 - m).unwrap();
            assert_abs_diff_eq!(e * kp + ep * k - k * kp, FRAC_PI_2, epsilon = 1e-13);
        }
    }

    #[test]
    fn elliptic_negative_parameter() {
        // E(-1) and K(-1), checked against Simpson quadrature of the
        // defining integrals.
        let quad_e = crate::numerics::quad::adaptive_simpson(
            |x| (1.0 + x.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            1e-13,
        )
        .unwrap();
        let quad_k = crate::numerics::quad::adaptive_simpson(
            |x| 1.0 / (1.0 + x.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            1e-13,
        )
        .unwrap();
        assert_abs_diff_eq!(elliptic_e(-1.0).unwrap(), quad_e, epsilon = 1e-12);
        assert_abs_diff_eq!(elliptic_k(-1.0).unwrap(), quad_k, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_sum_examples() {
        // h = 0: every omega_k = 1
        for m in 2..=9 {
            assert_abs_diff_eq!(ising_spectrum_sum(0.0, m).unwrap(), m as f64, epsilon = 1e-12);
        }
        // h = 1, M = 4: 2 (sqrt(2 - sqrt 2) + sqrt(2 + sqrt 2))
        let expect = 2.0 * ((2.0 - 2.0f64.sqrt()).sqrt() + (2.0 + 2.0f64.sqrt()).sqrt());
        assert_abs_diff_eq!(ising_spectrum_sum(1.0, 4).unwrap(), expect, epsilon = 1e-12);
        assert_abs_diff_eq!(ising_spectrum_sum(1.0, 4).unwrap(), 5.226_251_859_505_506, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_sum_converges_to_elliptic_integral() {
        // (1/M) sum -> (2/pi)(1+h) E(4h/(1+h)^2)
        for &h in &[0.0, 0.3, 0.8, 1.5] {
            let m = 4096;
            let mean = ising_spectrum_sum(h, m).unwrap() / m as f64;
            let limit =
                2.0 / PI * (1.0 + h) * elliptic_e(elliptic_parameter(h)).unwrap();
            assert!((mean - limit).abs() < 1e-6, "h={h}: {mean} vs {limit}");
        }
    }

    #[test]
    fn tau_at_zero_field_is_theta_over_2m() {
        let p = params(0.0, 4);
        assert_abs_diff_eq!(ising_tau(&p).unwrap(), FRAC_PI_2 / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ising_tau_finite(&p).unwrap(), FRAC_PI_2 / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn tau_is_largest_at_zero_field() {
        let tau0 = ising_tau(&params(0.0, 8)).unwrap();
        for &h in &[-1.8, -0.7, -0.2, 0.2, 0.7, 1.3, 2.0] {
            assert!(ising_tau(&params(h, 8)).unwrap() < tau0, "tau(h={h}) must be below tau(0)");
        }
    }

    #[test]
    fn finite_and_thermodynamic_tau_agree_at_large_m() {
        let p = params(0.5, 256);
        let a = ising_tau(&p).unwrap();
        let b = ising_tau_finite(&p).unwrap();
        assert!((a - b).abs() / b < 5e-3, "{a} vs {b}");
    }

    #[test]
    fn susceptibility_matches_finite_differences() {
        for &h in &[0.3, 0.5, 1.5, -0.5, 2.0] {
            let p = params(h, 8);
            let closed = ising_susceptibility(&p).unwrap();
            let d = 1e-5;
            let up = ising_tau(&params(h + d, 8)).unwrap();
            let dn = ising_tau(&params(h - d, 8)).unwrap();
            let fd = (up - dn) / (2.0 * d);
            assert!(
                (closed - fd).abs() <= 1e-4 * fd.abs(),
                "h={h}: closed {closed} vs fd {fd}"
            );
        }
    }

    #[test]
    fn susceptibility_negative_for_small_positive_field() {
        for &h in &[0.05, 0.1, 0.2] {
            assert!(ising_susceptibility(&params(h, 8)).unwrap() < 0.0);
        }
    }

    #[test]
    fn susceptibility_singular_points_flagged() {
        for &h in &[0.0, 1.0, -1.0] {
            assert!(ising_susceptibility(&params(h, 8)).is_err());
        }
    }

    #[test]
    fn critical_approx_examples() {
        // h -> 1+ limit: 2 pi Theta / (32 M J)
        let p = params(1.0 + 1e-9, 8);
        let v = ising_critical_approx(&p).unwrap();
        assert_abs_diff_eq!(v, 2.0 * PI * FRAC_PI_2 / (32.0 * 8.0), epsilon = 1e-8);

        // matches the magnitude of the closed-form susceptibility near h = 1
        let p = params(1.01, 8);
        let approx = ising_critical_approx(&p).unwrap();
        let closed = ising_susceptibility(&p).unwrap();
        assert!(
            (approx - closed.abs()).abs() / closed.abs() < 0.02,
            "approx {approx} vs |closed| {}",
            closed.abs()
        );

        // 1/M scaling
        let v8 = ising_critical_approx(&params(1.05, 8)).unwrap();
        let v16 = ising_critical_approx(&params(1.05, 16)).unwrap();
        assert_abs_diff_eq!(v8 / v16, 2.0, epsilon = 1e-12);

        assert!(ising_critical_approx(&params(0.9, 8)).is_err());
    }

    #[test]
    fn kink_slope_magnification_exceeds_ten() {
        let p = params(1.0, 8); // field_ratio unused by the ratio helper
        let ratio = ising_kink_slope_ratio(&p, 1e-3, 1e-1).unwrap();
        assert!(ratio > 10.0, "kink magnification {ratio} too small");
    }

    #[test]
    fn tau_rejects_bad_params() {
        assert!(ising_tau(&IsingParams { coupling: 0.0, ..params(0.5, 8) }).is_err());
        assert!(ising_tau(&params(-1.0, 8)).is_err());
        assert!(ising_tau(&IsingParams { theta: 4.0, ..params(0.5, 8) }).is_err());
    }
}
