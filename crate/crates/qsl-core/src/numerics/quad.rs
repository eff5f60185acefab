//! Adaptive Simpson quadrature for real- and complex-valued integrands.

use num_complex::Complex64;

use crate::error::{QslError, Result};

const MAX_DEPTH: u32 = 48;

fn simpson_real<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(QslError::QuadratureNonConvergence);
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(QslError::QuadratureNonConvergence);
    }
    let l = simpson_real(f, a, fa, m, fm, left, flm, 0.5 * tol, depth + 1)?;
    let r = simpson_real(f, m, fm, b, fb, right, frm, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Integrate `f` over `[a, b]` to relative tolerance `rel_tol` (with a small
/// absolute floor so integrals near zero still terminate).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = rel_tol * whole.abs().max(1e-12 * (b - a).abs());
    simpson_real(&f, a, fa, b, fb, whole, fm, tol, 0)
}

fn simpson_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    whole: Complex64,
    fm: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if !delta.norm().is_finite() {
        return Err(QslError::QuadratureNonConvergence);
    }
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(QslError::QuadratureNonConvergence);
    }
    let l = simpson_complex(f, a, fa, m, fm, left, flm, 0.5 * tol, depth + 1)?;
    let r = simpson_complex(f, m, fm, b, fb, right, frm, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Complex-valued adaptive Simpson over a real interval.
pub fn adaptive_simpson_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    let tol = rel_tol * whole.norm().max(1e-12 * (b - a).abs());
    simpson_complex(&f, a, fa, b, fb, whole, fm, tol, 0)
}
