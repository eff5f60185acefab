//! Bracketing, bisection and tangential-touch refinement for first-crossing
//! searches on sampled oscillatory signals.

/// Bisect a sign change of `g` inside `[lo, hi]` down to absolute width
/// `t_tol`. `g(lo)` and `g(hi)` must have opposite (or zero) signs.
pub fn bisect<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64, t_tol: f64) -> f64 {
    let mut glo = g(lo);
    if glo == 0.0 {
        return lo;
    }
    if g(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        if hi - lo <= t_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of `|g|` on `[lo, hi]`; returns (t, |g(t)|).
/// Used to resolve tangential touches where the signal reaches a level
/// without crossing it.
pub fn minimize_abs<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64, t_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1).abs();
    let mut f2 = g(x2).abs();
    for _ in 0..200 {
        if hi - lo <= t_tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1).abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2).abs();
        }
    }
    let t = 0.5 * (lo + hi);
    (t, g(t).abs())
}

/// Expand `hi` by doubling until `g` changes sign relative to `g(lo)`, then
/// bisect. Returns `None` if no sign change appears before `max_hi`.
pub fn bracket_and_bisect<F: Fn(f64) -> f64>(
    g: &F,
    lo: f64,
    mut hi: f64,
    max_hi: f64,
    t_tol: f64,
) -> Option<f64> {
    let glo = g(lo);
    if glo == 0.0 {
        return Some(lo);
    }
    loop {
        let ghi = g(hi);
        if ghi == 0.0 {
            return Some(hi);
        }
        if ghi.signum() != glo.signum() {
            return Some(bisect(g, lo, hi, t_tol));
        }
        if hi >= max_hi {
            return None;
        }
        hi = (2.0 * hi).min(max_hi);
    }
}

/// First time in `(0, horizon]` where the sampled signal `g` crosses zero.
///
/// Sign changes between consecutive samples are bisected to `t_tol`.
/// Tangential touches (the signal reaches the level without crossing, as at
/// reachable-set boundaries) are caught by refining local minima of `|g|`
/// and accepted when the refined value drops below `touch_tol`.
pub fn first_level_crossing<F: Fn(f64) -> f64>(
    g: &F,
    step: f64,
    horizon: f64,
    t_tol: f64,
    touch_tol: f64,
) -> Option<f64> {
    assert!(step > 0.0 && horizon > 0.0);
    let steps = (horizon / step).ceil() as usize;
    let mut t_prev2 = 0.0f64;
    let mut g_prev2 = 0.0f64;
    let mut t_prev = 0.0f64;
    let mut g_prev = g(0.0);
    for k in 1..=steps {
        let t_k = (k as f64 * step).min(horizon);
        let g_k = g(t_k);
        // Tangential touch: a same-sign local minimum of |g| centred on the
        // previous sample is refined and accepted only if it actually
        // reaches the level.
        if k >= 2
            && g_prev.abs() <= g_prev2.abs()
            && g_prev.abs() <= g_k.abs()
            && (g_prev.abs() < g_prev2.abs() || g_prev.abs() < g_k.abs())
            && g_prev.signum() == g_prev2.signum()
            && g_prev.signum() == g_k.signum()
        {
            let (t_min, g_min) = minimize_abs(g, t_prev2, t_k, t_tol);
            if g_min <= touch_tol && t_min > t_tol {
                return Some(t_min);
            }
        }
        if g_prev == 0.0 && t_prev > 0.0 {
            return Some(t_prev);
        }
        if g_k == 0.0 {
            return Some(t_k);
        }
        if g_prev.signum() != g_k.signum() && g_prev != 0.0 {
            return Some(bisect(g, t_prev, t_k, t_tol));
        }
        t_prev2 = t_prev;
        g_prev2 = g_prev;
        t_prev = t_k;
        g_prev = g_k;
    }
    None
}
