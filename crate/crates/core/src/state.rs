//! Fluid states of the pure radiation fluid, the ideal flux `T^{α1}` and its
//! scaled Jacobian.
//!
//! States are stored in the canonical chart `(θ, v)`; the Godunov pair
//! `ψ = (u, v)/θ` is a derived view. The equation of state is fixed to
//! `p(θ) = θ⁴/3`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hugoniot::FluxTarget;
use crate::mat2::{Mat2, Vec2};

/// A point of the state space `Ψ = {ψ⁰ > |ψ¹|}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluidState {
    theta: f64,
    v: f64,
}

/// The two ξ-components of the ideal stress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Flux {
    pub t01: f64,
    pub t11: f64,
}

impl FluidState {
    /// Builds a state from temperature and spatial velocity.
    pub fn from_theta_v(theta: f64, v: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "temperature must be positive and finite, got {theta}"
            )));
        }
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "velocity must be finite, got {v}"
            )));
        }
        Ok(FluidState { theta, v })
    }

    /// Builds a state from the contravariant pair `(ψ⁰, ψ¹)`.
    pub fn from_psi(psi: Vec2) -> Result<Self> {
        let [p0, p1] = psi;
        if !(p0.is_finite() && p1.is_finite()) || p0 <= p1.abs() {
            return Err(Error::InvalidInput(format!(
                "({p0}, {p1}) lies outside the state space psi0 > |psi1|"
            )));
        }
        let theta = ((p0 - p1) * (p0 + p1)).sqrt().recip();
        FluidState::from_theta_v(theta, theta * p1)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Time component of the four-velocity, `√(1 + v²)`.
    pub fn u(&self) -> f64 {
        self.v.hypot(1.0)
    }

    /// Contravariant Godunov pair `(ψ⁰, ψ¹) = (u, v)/θ`.
    pub fn psi(&self) -> Vec2 {
        [self.u() / self.theta, self.v / self.theta]
    }

    /// Covariant pair `(ψ₀, ψ₁) = (−ψ⁰, ψ¹)`.
    pub fn psi_cov(&self) -> Vec2 {
        let [p0, p1] = self.psi();
        [-p0, p1]
    }

    /// `T⁰¹ = (4/3) θ⁴ u v` and `T¹¹ = θ⁴ ((4/3) v² + 1/3)`.
    pub fn flux(&self) -> Flux {
        let t4 = self.theta.powi(4);
        Flux {
            t01: 4.0 / 3.0 * t4 * self.u() * self.v,
            t11: t4 * (4.0 / 3.0 * self.v * self.v + 1.0 / 3.0),
        }
    }

    /// Flux Jacobian up to the positive factor `(4/3) θ⁵`, acting on the
    /// contravariant pair.
    pub fn flux_jacobian(&self) -> Mat2 {
        let v = self.v;
        let u = self.u();
        let v2 = v * v;
        Mat2::symmetric(
            v * (6.0 * v2 + 5.0),
            -u * (6.0 * v2 + 1.0),
            v * (6.0 * v2 + 3.0),
        )
    }

    /// The positive factor relating [`flux_jacobian`](Self::flux_jacobian) to
    /// the true derivative of [`profile_rhs`](Self::profile_rhs).
    pub fn jacobian_scale(&self) -> f64 {
        4.0 / 3.0 * self.theta.powi(5)
    }

    /// Right-hand side `F = (q⁰ − T⁰¹, T¹¹ − q¹)` of the profile equation
    /// `B(ψ) ψ' = F`. Vanishes exactly at Rankine–Hugoniot states of `q`.
    pub fn profile_rhs(&self, q: &FluxTarget) -> Vec2 {
        let f = self.flux();
        [q.q0 - f.t01, f.t11 - q.q1]
    }
}
