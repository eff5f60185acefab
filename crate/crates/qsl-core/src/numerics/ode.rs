//! Adaptive Dormand-Prince 5(4) integrator for small smooth systems.

/// Embedded Runge-Kutta 5(4) with step-size control.
///
/// The state dimension is small (Bloch vectors), so steps allocate freely.
#[derive(Clone, Copy, Debug)]
pub struct Rk45 {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Rk45 {
    fn default() -> Self {
        Rk45 { rel_tol: 1e-10, abs_tol: 1e-12 }
    }
}

// Dormand-Prince coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

impl Rk45 {
    /// Integrate dy/dt = f(t, y) from `t0` to `t1` (t1 >= t0).
    pub fn integrate<F>(&self, f: &F, t0: f64, y0: &[f64], t1: f64) -> Vec<f64>
    where
        F: Fn(f64, &[f64]) -> Vec<f64>,
    {
        let dim = y0.len();
        let mut t = t0;
        let mut y = y0.to_vec();
        if t1 <= t0 {
            return y;
        }
        let span = t1 - t0;
        let mut h = (span / 100.0).min(0.1).max(1e-12);
        let mut k = vec![vec![0.0; dim]; 7];

        while t < t1 {
            if t + h > t1 {
                h = t1 - t;
            }
            k[0] = f(t, &y);
            for stage in 1..7 {
                let mut ys = y.clone();
                for prev in 0..stage {
                    let a = A[stage][prev];
                    if a == 0.0 {
                        continue;
                    }
                    for d in 0..dim {
                        ys[d] += h * a * k[prev][d];
                    }
                }
                k[stage] = f(t + C[stage] * h, &ys);
            }
            let mut y5 = y.clone();
            let mut err = 0.0f64;
            for d in 0..dim {
                let mut acc5 = 0.0;
                let mut acc4 = 0.0;
                for s in 0..7 {
                    acc5 += B5[s] * k[s][d];
                    acc4 += B4[s] * k[s][d];
                }
                y5[d] += h * acc5;
                let sc = self.abs_tol + self.rel_tol * y[d].abs().max(y5[d].abs());
                let e = h * (acc5 - acc4) / sc;
                err += e * e;
            }
            err = (err / dim as f64).sqrt();

            if err <= 1.0 {
                t += h;
                y = y5;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * factor).min(span).max(1e-14);
        }
        y
    }

    /// Integrate sequentially through an increasing list of output times,
    /// returning the state at each one. `times` must start at or after `t0`.
    pub fn sample<F>(&self, f: &F, t0: f64, y0: &[f64], times: &[f64]) -> Vec<Vec<f64>>
    where
        F: Fn(f64, &[f64]) -> Vec<f64>,
    {
        let mut out = Vec::with_capacity(times.len());
        let mut t = t0;
        let mut y = y0.to_vec();
        for &target in times {
            y = self.integrate(f, t, &y, target);
            t = target;
            out.push(y.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let rk = Rk45::default();
        let y = rk.integrate(&|_, y: &[f64]| vec![-y[0]], 0.0, &[1.0], 2.0);
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let rk = Rk45::default();
        let f = |_t: f64, y: &[f64]| vec![y[1], -y[0]];
        let y = rk.integrate(&f, 0.0, &[1.0, 0.0], 10.0 * std::f64::consts::PI);
        // back to the start after 5 full periods
        assert!((y[0] - 1.0).abs() < 1e-8);
        assert!(y[1].abs() < 1e-8);
    }

    #[test]
    fn sampling_matches_direct_integration() {
        let rk = Rk45::default();
        let f = |t: f64, y: &[f64]| vec![(2.0 * t).cos() * y[0]];
        let times = [0.5, 1.0, 1.5];
        let samples = rk.sample(&f, 0.0, &[1.0], &times);
        for (i, &tt) in times.iter().enumerate() {
            let direct = rk.integrate(&f, 0.0, &[1.0], tt);
            assert!((samples[i][0] - direct[0]).abs() < 1e-9);
        }
    }
}
