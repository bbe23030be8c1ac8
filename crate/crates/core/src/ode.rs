//! Explicit integrators for complex amplitude systems `y' = f(t, y)`.
//!
//! [`Dopri5`] is the Dormand-Prince 5(4) pair with first-same-as-last stages
//! and an RMS error norm; [`rk4_fixed`] is a classical fixed-step scheme kept
//! for regression cross-checks.

use num_complex::Complex64;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; `None` picks a fraction of the interval.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: None,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn axpy(out: &mut [Complex64], y: &[Complex64], h: f64, terms: &[(f64, &[Complex64])]) {
    for i in 0..out.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in terms {
            if *c != 0.0 {
                acc += k[i] * *c;
            }
        }
        out[i] = y[i] + acc * h;
    }
}

impl Dopri5 {
    /// Integrates from `t0` to the last entry of `outputs`, returning the state
    /// at each output time. Steps are clipped so output times are hit exactly.
    pub fn integrate<F>(
        &self,
        mut f: F,
        t0: f64,
        y0: &[Complex64],
        outputs: &[f64],
    ) -> Result<(Vec<Vec<Complex64>>, Stats)>
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        if outputs.windows(2).any(|w| w[1] < w[0]) || outputs.first().is_some_and(|&t| t < t0) {
            return Err(Error::Config(
                "output times must be sorted and not precede the start".into(),
            ));
        }
        let n = y0.len();
        let mut stats = Stats::default();
        let mut results = Vec::with_capacity(outputs.len());
        let t_end = match outputs.last() {
            Some(&t) => t,
            None => return Ok((results, stats)),
        };
        let mut t = t0;
        let mut y = y0.to_vec();
        let mut h = self
            .initial_step
            .unwrap_or(((t_end - t0) / 100.0).max(1e-6));
        let mut k1 = vec![Complex64::new(0.0, 0.0); n];
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut k5 = k1.clone();
        let mut k6 = k1.clone();
        let mut k7 = k1.clone();
        let mut tmp = k1.clone();
        let mut y_new = k1.clone();
        f(t, &y, &mut k1);
        stats.evaluations += 1;
        let mut next_out = 0;
        while next_out < outputs.len() && outputs[next_out] <= t {
            results.push(y.clone());
            next_out += 1;
        }
        while next_out < outputs.len() {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::Integrator(format!(
                    "step budget of {} exhausted at t = {t}",
                    self.max_steps
                )));
            }
            let target = outputs[next_out];
            let mut step = h;
            let clipped = t + step >= target;
            if clipped {
                step = target - t;
            }
            let floor = 16.0 * f64::EPSILON * t.abs().max(1.0);
            if step < floor && !clipped {
                return Err(Error::Integrator(format!(
                    "step size underflow at t = {t} (h = {step:e}); the system may be stiff or singular"
                )));
            }

            axpy(&mut tmp, &y, step, &[(A21, &k1)]);
            f(t + C2 * step, &tmp, &mut k2);
            axpy(&mut tmp, &y, step, &[(A31, &k1), (A32, &k2)]);
            f(t + C3 * step, &tmp, &mut k3);
            axpy(&mut tmp, &y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            f(t + C4 * step, &tmp, &mut k4);
            axpy(
                &mut tmp,
                &y,
                step,
                &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
            );
            f(t + C5 * step, &tmp, &mut k5);
            axpy(
                &mut tmp,
                &y,
                step,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            );
            f(t + step, &tmp, &mut k6);
            axpy(
                &mut y_new,
                &y,
                step,
                &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            f(t + step, &y_new, &mut k7);
            stats.evaluations += 6;

            let mut sum = 0.0;
            for i in 0..n {
                let err =
                    (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                        * step;
                let scale = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
                sum += (err.norm() / scale).powi(2);
            }
            let err = if n == 0 { 0.0 } else { (sum / n as f64).sqrt() };
            if !err.is_finite() {
                return Err(Error::Integrator(format!(
                    "non-finite error estimate at t = {t}"
                )));
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                stats.accepted += 1;
                t = if clipped { target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                // a clipped step says nothing about the natural step length
                if !clipped || factor < 1.0 {
                    h = step * factor;
                }
                while next_out < outputs.len() && outputs[next_out] <= t {
                    results.push(y.clone());
                    next_out += 1;
                }
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
                if h < floor {
                    return Err(Error::Integrator(format!(
                        "step size underflow at t = {t} (h = {h:e}); the system may be stiff or singular"
                    )));
                }
            }
        }
        Ok((results, stats))
    }
}

/// Classical fourth-order Runge-Kutta with `steps` equal steps.
pub fn rk4_fixed<F>(mut f: F, t0: f64, y0: &[Complex64], t_end: f64, steps: usize) -> Vec<Complex64>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let n = y0.len();
    let h = (t_end - t0) / steps as f64;
    let mut y = y0.to_vec();
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![zero; n],
        vec![zero; n],
        vec![zero; n],
        vec![zero; n],
        vec![zero; n],
    );
    for s in 0..steps {
        let t = t0 + h * s as f64;
        f(t, &y, &mut k1);
        axpy(&mut tmp, &y, h, &[(0.5, &k1)]);
        f(t + 0.5 * h, &tmp, &mut k2);
        axpy(&mut tmp, &y, h, &[(0.5, &k2)]);
        f(t + 0.5 * h, &tmp, &mut k3);
        axpy(&mut tmp, &y, h, &[(1.0, &k3)]);
        f(t + h, &tmp, &mut k4);
        let y_prev = y.clone();
        axpy(
            &mut y,
            &y_prev,
            h,
            &[
                (1.0 / 6.0, &k1),
                (1.0 / 3.0, &k2),
                (1.0 / 3.0, &k3),
                (1.0 / 6.0, &k4),
            ],
        );
    }
    y
}
