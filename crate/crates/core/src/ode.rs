//! Adaptive Dormand–Prince 5(4) integration of `dy/dt = f(t, y)` for a
//! complex two-component state.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type State2 = [Complex64; 2];

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

// Fifth-order weights (also the last row of the tableau, FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth minus fourth order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    /// Hard cap on attempted steps per `advance` call.
    pub max_steps: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

fn axpy(y: &State2, terms: &[(f64, &State2)], h: f64) -> State2 {
    let mut out = *y;
    for (w, k) in terms {
        out[0] += k[0] * (h * w);
        out[1] += k[1] * (h * w);
    }
    out
}

/// Integrator state that can be advanced repeatedly; the step size adapted
/// in one call carries over to the next.
#[derive(Debug, Clone)]
pub struct DormandPrince {
    t: f64,
    y: State2,
    h: f64,
    tol: Tolerances,
    accepted: u64,
    rejected: u64,
}

impl DormandPrince {
    pub fn new(t0: f64, y0: State2, h0: f64, tol: Tolerances) -> Self {
        Self {
            t: t0,
            y: y0,
            h: h0.abs().max(1e-8),
            tol,
            accepted: 0,
            rejected: 0,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> State2 {
        self.y
    }

    pub fn set_state(&mut self, y: State2) {
        self.y = y;
    }

    pub fn accepted_steps(&self) -> u64 {
        self.accepted
    }

    pub fn rejected_steps(&self) -> u64 {
        self.rejected
    }

    /// Integrates forward to `t_end`, calling `after_step` on every accepted
    /// state (it may modify the state, e.g. to renormalise it).
    pub fn advance<F, G>(&mut self, f: F, t_end: f64, mut after_step: G) -> Result<()>
    where
        F: Fn(f64, &State2) -> State2,
        G: FnMut(&mut State2),
    {
        if t_end < self.t {
            return Err(Error::Domain(format!(
                "cannot integrate backwards from {} to {t_end}",
                self.t
            )));
        }
        let mut k1 = f(self.t, &self.y);
        let mut attempts = 0u64;
        while self.t < t_end {
            attempts += 1;
            if attempts > self.tol.max_steps {
                return Err(Error::StepBudget {
                    t: self.t,
                    max_steps: self.tol.max_steps,
                });
            }
            let remaining = t_end - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h < 1e-14 * self.t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    step: h,
                    steps: self.accepted,
                });
            }
            let t = self.t;
            let y = &self.y;
            let k2 = f(t + C2 * h, &axpy(y, &[(A21, &k1)], h));
            let k3 = f(t + C3 * h, &axpy(y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = f(t + C4 * h, &axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
            let k5 = f(
                t + C5 * h,
                &axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
            );
            let k6 = f(
                t + h,
                &axpy(y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
            );
            let y_new = axpy(y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
            let k7 = f(t + h, &y_new);

            let mut err = 0.0f64;
            for i in 0..2 {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
                let scale = self.tol.abs + self.tol.rel * y[i].norm().max(y_new[i].norm());
                err = err.max(e.norm() / scale);
            }

            if err <= 1.0 {
                self.t = if last { t_end } else { t + h };
                self.y = y_new;
                after_step(&mut self.y);
                k1 = if self.y == y_new { k7 } else { f(self.t, &self.y) };
                self.accepted += 1;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // A truncated final step says nothing about the natural step size.
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                if self.h < 1e-14 * self.t.abs().max(1.0) {
                    return Err(Error::StepUnderflow {
                        t: self.t,
                        step: self.h,
                        steps: self.accepted,
                    });
                }
            }
        }
        Ok(())
    }
}
