//! Characteristic speeds of the dissipation operator and causality classes.
//!
//! In the fluid rest frame the squared speeds `σ²` are the roots of
//! `π(σ²) = 9μν σ⁴ − 3μ(3η̃ + 2ν) σ² − ν(η̃ − μ)`. The classification is
//! read off the roots. The closed-form inequality `μ ≥ (4/3)η, ν ≤ ν_*` is
//! evaluated alongside for comparison only: the roots put the luminal
//! boundary at `ν = ν_*` but the subluminal side at `ν ≥ ν_*`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dissipation::DissipationParams;
use crate::poly::{quadratic_roots, RootPair};

/// Default luminal-detection tolerance on `max σ²`.
pub const LUMINAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Causality {
    /// Some `σ²` is negative: the corresponding speeds are not real.
    AcausalNonreal,
    /// Some `σ² > 1`.
    AcausalSuperluminal,
    StrictlyCausal,
    /// `max σ² = 1` within tolerance.
    SharplyCausal,
}

impl Causality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Causality::AcausalNonreal => "acausal-nonreal",
            Causality::AcausalSuperluminal => "acausal-superluminal",
            Causality::StrictlyCausal => "strictly-causal",
            Causality::SharplyCausal => "sharply-causal",
        }
    }

    pub fn is_causal(&self) -> bool {
        matches!(self, Causality::StrictlyCausal | Causality::SharplyCausal)
    }
}

impl fmt::Display for Causality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Causality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Causality::AcausalNonreal,
            Causality::AcausalSuperluminal,
            Causality::StrictlyCausal,
            Causality::SharplyCausal,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| format!("unknown causality class '{s}'"))
    }
}

/// Coefficients of the dispersion polynomial `π(x) = a x² + b x + c`, `x = σ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoly {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl DispersionPoly {
    pub fn new(p: &DissipationParams) -> Self {
        let (et, mu, nu) = (p.eta_tilde(), p.mu(), p.nu());
        DispersionPoly {
            a: 9.0 * mu * nu,
            b: -3.0 * mu * (3.0 * et + 2.0 * nu),
            c: -nu * (et - mu),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }
}

/// `Δ = η̃ (81 μ² η̃ + 36 μ ν (3μ + ν))`, a sum of positive terms.
pub fn discriminant_closed_form(p: &DissipationParams) -> f64 {
    let (et, mu, nu) = (p.eta_tilde(), p.mu(), p.nu());
    et * (81.0 * mu * mu * et + 36.0 * mu * nu * (3.0 * mu + nu))
}

/// `π(1) = 4μν − (9μ + ν) η̃`; equals `c₄` of the determinant polynomial.
pub fn pi_at_one_closed_form(p: &DissipationParams) -> f64 {
    4.0 * p.mu() * p.nu() - (9.0 * p.mu() + p.nu()) * p.eta_tilde()
}

pub fn dispersion_roots(p: &DissipationParams) -> RootPair {
    let d = DispersionPoly::new(p);
    quadratic_roots(d.a, d.b, d.c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CausalityReport {
    pub sigma_squared: RootPair,
    pub classification: Causality,
    pub pi_at_one: f64,
    pub discriminant: f64,
    /// Whether `μ ≥ (4/3)η` and `ν ≤ ν_*` hold (the closed-form inequality).
    pub inequality_holds: bool,
}

impl CausalityReport {
    /// The root-based verdict and the closed-form inequality disagree.
    pub fn inequality_disagrees(&self) -> bool {
        self.classification.is_causal() != self.inequality_holds
    }
}

/// Evaluates `μ ≥ (4/3)η` and `ν ≤ (1/(3η) − 1/(9μ))⁻¹`.
pub fn closed_form_inequality(p: &DissipationParams) -> bool {
    p.mu() >= p.eta_tilde() && p.nu_star().is_some_and(|ns| p.nu() <= ns)
}

pub fn classify_causality(p: &DissipationParams, tol: f64) -> CausalityReport {
    let poly = DispersionPoly::new(p);
    let roots = dispersion_roots(p);
    let classification = match roots {
        RootPair::Complex { .. } => Causality::AcausalNonreal,
        RootPair::Real { lo, hi } => {
            if lo < 0.0 {
                Causality::AcausalNonreal
            } else if hi > 1.0 + tol {
                Causality::AcausalSuperluminal
            } else if hi >= 1.0 - tol {
                Causality::SharplyCausal
            } else {
                Causality::StrictlyCausal
            }
        }
    };
    CausalityReport {
        sigma_squared: roots,
        classification,
        pi_at_one: poly.eval(1.0),
        discriminant: poly.discriminant(),
        inequality_holds: closed_form_inequality(p),
    }
}
