//! Adaptive Dormand–Prince 5(4) integration for autonomous complex linear
//! (or mildly nonlinear) first-order systems dy/dt = f(y).
//!
//! Defaults are tight (rtol 1e−10, atol 1e−12) because the integrator backs
//! oracle cross-checks, not production sampling. The stepper is explicit and
//! therefore stability-limited for stiff generators; callers switch to the
//! matrix-exponential backend once the problem dimension makes that cheaper.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

// Dormand–Prince coefficients.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Embedded 4th-order weights.
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;

fn axpyv(dst: &mut Array1<C64>, terms: &[(f64, &Array1<C64>)]) {
    for (coef, v) in terms {
        let c = C64::new(*coef, 0.0);
        dst.zip_mut_with(v, |d, s| *d += c * s);
    }
}

/// Integrate dy/dt = f(y) from y0 across the nonnegative, strictly increasing
/// `t_grid`, returning the solution at every grid time. The first grid time
/// may be 0, in which case y0 itself is returned for it.
pub fn integrate_adaptive<F>(
    f: F,
    y0: &Array1<C64>,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<Array1<C64>>>
where
    F: Fn(&Array1<C64>) -> Array1<C64>,
{
    if t_grid.is_empty() {
        return Ok(Vec::new());
    }
    if t_grid[0] < 0.0 {
        return Err(Error::Validation("time grid must be nonnegative".into()));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Validation(
                "time grid must be strictly increasing".into(),
            ));
        }
    }

    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0f64;
    let mut y = y0.clone();
    let mut k1 = f(&y);
    let mut steps: usize = 0;

    // Initial step size from the usual norm heuristic.
    let sc = |v: &Array1<C64>, y_ref: &Array1<C64>| -> f64 {
        let mut acc = 0.0f64;
        for (vi, yi) in v.iter().zip(y_ref.iter()) {
            let s = opts.atol + opts.rtol * yi.norm();
            let r = vi.norm() / s;
            acc += r * r;
        }
        (acc / v.len() as f64).sqrt()
    };
    let d0 = sc(&y, &y).max(1e-10);
    let d1 = sc(&k1, &y).max(1e-10);
    let t_end = *t_grid.last().unwrap();
    let mut h = (0.01 * d0 / d1).min(t_end.max(1e-12)).max(1e-10);

    for &t_target in t_grid {
        if t_target == 0.0 && t == 0.0 {
            out.push(y.clone());
            continue;
        }
        while t < t_target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::NonConvergence(format!(
                    "adaptive integrator exceeded {} steps at t = {t:.3e}",
                    opts.max_steps
                )));
            }
            let mut h_try = h.min(t_target - t);

            // One attempted step of size h_try (retried on error rejection).
            loop {
                let mut y2 = y.clone();
                axpyv(&mut y2, &[(h_try * A21, &k1)]);
                let k2 = f(&y2);

                let mut y3 = y.clone();
                axpyv(&mut y3, &[(h_try * A31, &k1), (h_try * A32, &k2)]);
                let k3 = f(&y3);

                let mut y4 = y.clone();
                axpyv(
                    &mut y4,
                    &[(h_try * A41, &k1), (h_try * A42, &k2), (h_try * A43, &k3)],
                );
                let k4 = f(&y4);

                let mut y5 = y.clone();
                axpyv(
                    &mut y5,
                    &[
                        (h_try * A51, &k1),
                        (h_try * A52, &k2),
                        (h_try * A53, &k3),
                        (h_try * A54, &k4),
                    ],
                );
                let k5 = f(&y5);

                let mut y6 = y.clone();
                axpyv(
                    &mut y6,
                    &[
                        (h_try * A61, &k1),
                        (h_try * A62, &k2),
                        (h_try * A63, &k3),
                        (h_try * A64, &k4),
                        (h_try * A65, &k5),
                    ],
                );
                let k6 = f(&y6);

                let mut y_new = y.clone();
                axpyv(
                    &mut y_new,
                    &[
                        (h_try * B1, &k1),
                        (h_try * B3, &k3),
                        (h_try * B4, &k4),
                        (h_try * B5, &k5),
                        (h_try * B6, &k6),
                    ],
                );
                let k7 = f(&y_new);

                // Embedded-solution error estimate.
                let mut err_acc = 0.0f64;
                for i in 0..y.len() {
                    let e = h_try
                        * ((B1 - E1) * k1[i]
                            + (B3 - E3) * k3[i]
                            + (B4 - E4) * k4[i]
                            + (B5 - E5) * k5[i]
                            + (B6 - E6) * k6[i]
                            - E7 * k7[i]);
                    let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                    let r = e.norm() / scale;
                    err_acc += r * r;
                }
                let err = (err_acc / y.len() as f64).sqrt();

                if err <= 1.0 {
                    t += h_try;
                    y = y_new;
                    k1 = k7; // first-same-as-last
                    let grow = if err > 0.0 {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    } else {
                        5.0
                    };
                    h = h_try * grow;
                    break;
                }
                let shrink = (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
                h_try *= shrink;
                if h_try < 1e-14 * t_target.max(1.0) {
                    return Err(Error::NonConvergence(format!(
                        "step size underflow at t = {t:.3e}"
                    )));
                }
                steps += 1;
                if steps > opts.max_steps {
                    return Err(Error::NonConvergence(format!(
                        "adaptive integrator exceeded {} steps at t = {t:.3e}",
                        opts.max_steps
                    )));
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
