//! Dormand–Prince 5(4) for planar autonomous systems (stage nodes are not
//! needed since the field has no explicit time dependence).
//!
//! The right-hand side may be undefined (outside the state space); a step
//! that samples such a point reports [`StepOutcome::Undefined`] and the
//! caller shrinks the step.

use crate::mat2::Vec2;

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

// difference between the 5th- and 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Accepted {
        x: Vec2,
        /// Field at the new point (first stage of the next step).
        f: Vec2,
        h_next: f64,
    },
    Rejected {
        h_next: f64,
    },
    /// A stage left the domain of the field.
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

fn axpy(x: Vec2, terms: &[(f64, Vec2)], h: f64) -> Vec2 {
    let mut out = x;
    for &(c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

impl Dopri5 {
    /// One unconditioned step: returns the 5th-order solution, the field
    /// there, and the embedded error estimate.
    pub fn raw_step<F>(&self, f: &F, x: Vec2, k1: Vec2, h: f64) -> Option<(Vec2, Vec2, Vec2)>
    where
        F: Fn(Vec2) -> Option<Vec2>,
    {
        let k2 = f(axpy(x, &[(A21, k1)], h))?;
        let k3 = f(axpy(x, &[(A31, k1), (A32, k2)], h))?;
        let k4 = f(axpy(x, &[(A41, k1), (A42, k2), (A43, k3)], h))?;
        let k5 = f(axpy(x, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], h))?;
        let k6 = f(axpy(
            x,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
            h,
        ))?;
        let x_new = axpy(
            x,
            &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
            h,
        );
        let k7 = f(x_new)?;
        let err = axpy(
            [0.0, 0.0],
            &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
            h,
        );
        Some((x_new, k7, err))
    }

    fn error_norm(&self, x: Vec2, x_new: Vec2, err: Vec2) -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            let sk = self.abs_tol + self.rel_tol * x[i].abs().max(x_new[i].abs());
            acc += (err[i] / sk).powi(2);
        }
        (acc / 2.0).sqrt()
    }

    /// Error-controlled step attempt from `x` (with `k1 = f(x)`) of size `h`.
    pub fn try_step<F>(&self, f: &F, x: Vec2, k1: Vec2, h: f64) -> StepOutcome
    where
        F: Fn(Vec2) -> Option<Vec2>,
    {
        let Some((x_new, k7, err)) = self.raw_step(f, x, k1, h) else {
            return StepOutcome::Undefined;
        };
        let e = self.error_norm(x, x_new, err);
        if !e.is_finite() {
            return StepOutcome::Undefined;
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        if e <= 1.0 {
            StepOutcome::Accepted {
                x: x_new,
                f: k7,
                h_next: h * factor,
            }
        } else {
            StepOutcome::Rejected {
                h_next: h * factor.min(1.0),
            }
        }
    }

    /// Starting step size from the local scale of the field (Hairer's heuristic,
    /// first stage only).
    pub fn initial_step(&self, x: Vec2, k1: Vec2) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..2 {
            let sk = self.abs_tol + self.rel_tol * x[i].abs();
            d0 += (x[i] / sk).powi(2);
            d1 += (k1[i] / sk).powi(2);
        }
        let (d0, d1) = ((d0 / 2.0).sqrt(), (d1 / 2.0).sqrt());
        if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        }
    }
}
