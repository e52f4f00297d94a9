//! Rankine–Hugoniot states of the pure radiation fluid.
//!
//! With the shock normal fixed to `ξ = (0,1,0,0)` and the shock at rest,
//! the jump conditions read `T^{α1}(ψ_−) = T^{α1}(ψ_+) = q^α`. On the
//! normalized family `q¹ = 1`, `q⁰ = q̃^{-1/2}` the two states are explicit
//! in the amplitude parameter `q̃ = (q¹/q⁰)² ∈ (3/4, 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::poly::RootPair;
use crate::state::FluidState;

/// Lower end of the admissible amplitude interval (zero amplitude).
pub const Q_TILDE_MIN: f64 = 0.75;
/// Upper end of the admissible amplitude interval (infinite amplitude).
pub const Q_TILDE_MAX: f64 = 1.0;
/// Required distance from either endpoint of `(3/4, 1)`.
pub const ENDPOINT_TOL: f64 = 1e-12;

/// Integration constants `q^α = T^{α1}(ψ_±)` of the profile equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxTarget {
    pub q0: f64,
    pub q1: f64,
}

impl FluxTarget {
    /// The normalized target `(q̃^{-1/2}, 1)` of right-moving flow.
    pub fn normalized(q_tilde: f64) -> Self {
        FluxTarget {
            q0: q_tilde.sqrt().recip(),
            q1: 1.0,
        }
    }

    /// `(q¹/q⁰)²`, undefined when `q⁰ = 0`.
    pub fn q_tilde(&self) -> Option<f64> {
        (self.q0 != 0.0).then(|| (self.q1 / self.q0).powi(2))
    }
}

/// Upstream and downstream states of a standing shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockPair {
    /// Upstream (left) state, `v = v_−`.
    pub minus: FluidState,
    /// Downstream (right) state, `v = v_+`.
    pub plus: FluidState,
    pub q: FluxTarget,
}

impl ShockPair {
    pub fn amplitude(&self) -> f64 {
        self.minus.v() - self.plus.v()
    }
}

fn check_q_tilde(q_tilde: f64) -> Result<()> {
    if !q_tilde.is_finite() {
        return Err(Error::NoShock {
            q_tilde,
            reason: "not a finite number",
        });
    }
    if q_tilde <= Q_TILDE_MIN + ENDPOINT_TOL {
        return Err(Error::NoShock {
            q_tilde,
            reason: if q_tilde > Q_TILDE_MIN - ENDPOINT_TOL {
                "zero-amplitude limit"
            } else {
                "no Rankine-Hugoniot partner state"
            },
        });
    }
    if q_tilde >= Q_TILDE_MAX - ENDPOINT_TOL {
        return Err(Error::NoShock {
            q_tilde,
            reason: if q_tilde < Q_TILDE_MAX + ENDPOINT_TOL {
                "infinite-amplitude limit"
            } else {
                "at most one state solves the jump conditions"
            },
        });
    }
    Ok(())
}

/// Squared velocities `(v_−², v_+²)` from the closed-form root formula.
pub fn velocity_squares(q_tilde: f64) -> Result<(f64, f64)> {
    check_q_tilde(q_tilde)?;
    let b = 2.0 * q_tilde - 1.0;
    let s = (q_tilde * (4.0 * q_tilde - 3.0)).sqrt();
    let minus = (b + s) / (4.0 * (1.0 - q_tilde));
    // rationalized form of (b − s)/(4(1 − q̃)), free of cancellation near q̃ = 1
    let plus = 1.0 / (4.0 * (b + s));
    Ok((minus, plus))
}

/// Temperature on the curve `T¹¹ = q¹` at velocity `v`.
pub fn theta_on_t11(v: f64, q1: f64) -> f64 {
    ((4.0 / 3.0 * v * v + 1.0 / 3.0) / q1).powf(-0.25)
}

/// Temperature on the curve `T⁰¹ = q⁰` at velocity `v` (requires `q⁰ v > 0`).
pub fn theta_on_t01(v: f64, q0: f64) -> f64 {
    ((4.0 / 3.0f64).powi(2) * (1.0 + v * v) * v * v / (q0 * q0)).powf(-0.125)
}

/// The normalized shock pair for `q̃ ∈ (3/4, 1)`.
pub fn shock_states(q_tilde: f64) -> Result<ShockPair> {
    let (xm, xp) = velocity_squares(q_tilde)?;
    let vm = xm.sqrt();
    let vp = xp.sqrt();
    Ok(ShockPair {
        minus: FluidState::from_theta_v(theta_on_t11(vm, 1.0), vm)?,
        plus: FluidState::from_theta_v(theta_on_t11(vp, 1.0), vp)?,
        q: FluxTarget::normalized(q_tilde),
    })
}

/// Relative width of the band around `q̃ = 3/4` treated as a tangency.
const TANGENCY_TOL: f64 = 1e-12;

/// All states in `Ψ` with `T^{α1}(ψ) = q^α`, ordered by decreasing `|v|`.
///
/// Negative `q⁰` is reduced by the reflection `v ↦ −v` and general `q¹ > 0`
/// by the homothety `(ψ, q) ↦ (aψ, a⁻⁴q)`; the normalized problem is then
/// decided by counting the positive roots of
/// `16(1−q̃)x² + 8(1−2q̃)x + 1 = 0` in `x = v²`.
pub fn solve_t_eq_q(q0: f64, q1: f64) -> Result<Vec<FluidState>> {
    if !(q0.is_finite() && q1.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "flux target ({q0}, {q1}) must be finite"
        )));
    }
    if q1 <= 0.0 {
        return Ok(Vec::new());
    }
    let sign = if q0 < 0.0 { -1.0 } else { 1.0 };
    // θ = θ' · q1^{1/4}
    let theta_scale = q1.powf(0.25);
    let build = |v: f64| -> Result<FluidState> {
        FluidState::from_theta_v(theta_on_t11(v, 1.0) * theta_scale, sign * v)
    };

    if q0 == 0.0 {
        return Ok(vec![build(0.0)?]);
    }
    let q_tilde = (q1 / q0).powi(2);
    let a = 16.0 * (1.0 - q_tilde);
    let b = 8.0 * (1.0 - 2.0 * q_tilde);
    let xs: Vec<f64> = if a == 0.0 {
        vec![-1.0 / b]
    } else if (4.0 * q_tilde - 3.0).abs() <= TANGENCY_TOL {
        vec![-b / (2.0 * a)]
    } else {
        match crate::poly::quadratic_roots(a, b, 1.0) {
            RootPair::Real { lo, hi } => vec![hi, lo],
            RootPair::Complex { .. } => Vec::new(),
        }
    };
    xs.into_iter()
        .filter(|x| *x > 0.0)
        .map(|x| build(x.sqrt()))
        .collect()
}

/// Characteristic sign pattern of a shock pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaxReport {
    /// Eigenvalues of the flux Jacobian at `ψ_−`, ascending.
    pub upstream_speeds: [f64; 2],
    /// Eigenvalues of the flux Jacobian at `ψ_+`, ascending.
    pub downstream_speeds: [f64; 2],
    pub upstream_char_signs: [i8; 2],
    pub downstream_char_signs: [i8; 2],
    pub is_1_shock: bool,
}

fn char_signs(a: &Mat2) -> Result<([f64; 2], [i8; 2])> {
    let speeds = a.eigenvalues().real_parts();
    let tol = 1e-10 * a.norm().max(1.0);
    let mut signs = [0i8; 2];
    for (s, l) in signs.iter_mut().zip(speeds) {
        if l.abs() <= tol {
            return Err(Error::DegenerateClassification(l));
        }
        *s = if l > 0.0 { 1 } else { -1 };
    }
    Ok((speeds, signs))
}

/// Lax classification from the signs of the (symmetric) flux Jacobian's
/// eigenvalues: a 1-shock has `(+,+)` upstream and `(−,+)` downstream.
pub fn lax_classify(pair: &ShockPair) -> Result<LaxReport> {
    let (up, up_signs) = char_signs(&pair.minus.flux_jacobian())?;
    let (down, down_signs) = char_signs(&pair.plus.flux_jacobian())?;
    Ok(LaxReport {
        upstream_speeds: up,
        downstream_speeds: down,
        upstream_char_signs: up_signs,
        downstream_char_signs: down_signs,
        is_1_shock: up_signs == [1, 1] && down_signs == [-1, 1],
    })
}
