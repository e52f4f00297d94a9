//! The dissipation matrices contracted with the shock normal.
//!
//! `B = η̃ B̃_visc − μ B_ther − ν B_velo` with `η̃ = (4/3) η`. All three blocks
//! depend on the velocity only, and so does `det B`, which is a quadratic in
//! `v²` with coefficients `c₄, c₂, c₀`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::poly;
use crate::state::FluidState;

/// Dissipation coefficients `(η, μ, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DissipationParams {
    eta: f64,
    mu: f64,
    nu: f64,
}

impl Default for DissipationParams {
    /// `(η, μ, ν) = (1, 7, 20)`, a strictly causal showcase configuration.
    fn default() -> Self {
        DissipationParams {
            eta: 1.0,
            mu: 7.0,
            nu: 20.0,
        }
    }
}

impl DissipationParams {
    pub fn new(eta: f64, mu: f64, nu: f64) -> Result<Self> {
        for (name, x) in [("eta", eta), ("mu", mu), ("nu", nu)] {
            if !x.is_finite() || x <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive and finite, got {x}"
                )));
            }
        }
        Ok(DissipationParams { eta, mu, nu })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn eta_tilde(&self) -> f64 {
        4.0 / 3.0 * self.eta
    }

    /// Same `(η, μ)` with a different `ν`.
    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        DissipationParams::new(self.eta, self.mu, nu)
    }

    /// Threshold `ν_* = (1/(3η) − 1/(9μ))⁻¹`, defined for `3μ > η`.
    pub fn nu_star(&self) -> Option<f64> {
        (3.0 * self.mu > self.eta).then(|| (1.0 / (3.0 * self.eta) - 1.0 / (9.0 * self.mu)).recip())
    }

    /// `ν_*` in the rational form `9ημ/(3μ − η)`.
    pub fn nu_star_rational(&self) -> Option<f64> {
        (3.0 * self.mu > self.eta).then(|| 9.0 * self.eta * self.mu / (3.0 * self.mu - self.eta))
    }

    /// The root `9η̃μ/(4μ − η̃)` of `c₄` viewed as a function of `ν`.
    pub fn nu_star_from_c4(&self) -> Option<f64> {
        let et = self.eta_tilde();
        (4.0 * self.mu > et).then(|| 9.0 * et * self.mu / (4.0 * self.mu - et))
    }
}

/// The three dissipation blocks at a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Components {
    pub visc: Mat2,
    pub ther: Mat2,
    pub velo: Mat2,
}

pub fn b_components(s: &FluidState) -> Components {
    let v = s.v();
    let u = s.u();
    let (u2, v2) = (u * u, v * v);
    let w = 4.0 * v2 + 1.0;
    let sum = u2 + v2;
    Components {
        visc: Mat2::symmetric(u2 * v2, -u2 * u * v, u2 * u2),
        ther: Mat2::symmetric(16.0 * u2 * v2, -4.0 * u * v * w, w * w),
        velo: Mat2::symmetric(sum * sum, -2.0 * sum * u * v, 4.0 * u2 * v2),
    }
}

pub fn b_total(s: &FluidState, p: &DissipationParams) -> Mat2 {
    let c = b_components(s);
    c.visc * p.eta_tilde() - c.ther * p.mu - c.velo * p.nu
}

/// Coefficients of `det B = c₄ v⁴ + c₂ v² + c₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetPoly {
    pub c4: f64,
    pub c2: f64,
    pub c0: f64,
}

impl DetPoly {
    pub fn new(p: &DissipationParams) -> Self {
        let et = p.eta_tilde();
        let (mu, nu) = (p.mu, p.nu);
        DetPoly {
            c4: -9.0 * et * mu - et * nu + 4.0 * mu * nu,
            c2: -9.0 * et * mu - 2.0 * et * nu - 4.0 * mu * nu,
            c0: -et * nu + mu * nu,
        }
    }

    pub fn eval(&self, v_squared: f64) -> f64 {
        (self.c4 * v_squared + self.c2) * v_squared + self.c0
    }

    /// Magnitude of the individual terms entering the coefficients; the
    /// reference scale for deciding that a coefficient vanishes.
    fn term_scale(p: &DissipationParams) -> f64 {
        let et = p.eta_tilde();
        9.0 * et * p.mu + 2.0 * et * p.nu + 4.0 * p.mu * p.nu
    }
}

pub fn det_b_closed_form(v_squared: f64, p: &DissipationParams) -> f64 {
    DetPoly::new(p).eval(v_squared)
}

/// Nonnegative speeds `v` at which `det B` vanishes, ascending.
pub fn singular_speeds(p: &DissipationParams) -> Vec<f64> {
    let d = DetPoly::new(p);
    poly::nonnegative_roots(d.c4, d.c2, d.c0, DetPoly::term_scale(p), 1e-12)
        .into_iter()
        .map(f64::sqrt)
        .collect()
}
