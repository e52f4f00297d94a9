//! The profile ODE `B(ψ) ψ' = F(ψ, q̃)`.
//!
//! Rest points are classified through the linearization `B⁻¹A`; orbits are
//! integrated along the desingularized field `adj(B) F`, which stays finite on
//! the singular lines `det B = 0`.

mod integrator;
mod shooting;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dissipation::{b_total, DissipationParams};
use crate::error::{Error, Result};
use crate::hugoniot::FluxTarget;
use crate::mat2::{Mat2, Vec2};
use crate::poly::RootPair;
use crate::state::FluidState;

pub use integrator::{Dopri5, StepOutcome};
pub use shooting::{
    find_profile, find_profile_in, integrate_orbit, Direction, IntegrationError,
    IntegratorControls, Orbit, OrbitSample, Outcome, ProfileDiagnostics, ProfileVerdict,
    RestPointId, Termination, VerdictKind,
};

/// Which index position the state coordinates carry.
///
/// The two conventions are related by `D = diag(−1, 1)`: `(A, B, F)` become
/// `(DAD, DBD, DF)` and the state becomes `Dψ`. Rest-point types and orbit
/// geometry do not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Coordinates `(ψ⁰, ψ¹)`.
    #[default]
    Contravariant,
    /// Coordinates `(ψ₀, ψ₁) = (−ψ⁰, ψ¹)`.
    Covariant,
}

impl Convention {
    pub fn coords(&self, s: &FluidState) -> Vec2 {
        match self {
            Convention::Contravariant => s.psi(),
            Convention::Covariant => s.psi_cov(),
        }
    }

    pub fn state(&self, x: Vec2) -> Result<FluidState> {
        match self {
            Convention::Contravariant => FluidState::from_psi(x),
            Convention::Covariant => FluidState::from_psi([-x[0], x[1]]),
        }
    }

    pub fn matrix(&self, m: Mat2) -> Mat2 {
        match self {
            Convention::Contravariant => m,
            Convention::Covariant => m.index_flipped(),
        }
    }

    pub fn vector(&self, x: Vec2) -> Vec2 {
        match self {
            Convention::Contravariant => x,
            Convention::Covariant => [-x[0], x[1]],
        }
    }
}

/// Relative tolerance of the rest-point type decision.
pub const CLASS_TOL: f64 = 1e-10;

/// Relative size of `det B` (against `‖B‖²`) below which `B` counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestPointKind {
    Saddle,
    AttractorNode,
    AttractorFocus,
    RepellerNode,
    RepellerFocus,
    Degenerate,
}

impl RestPointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RestPointKind::Saddle => "saddle",
            RestPointKind::AttractorNode => "attractor-node",
            RestPointKind::AttractorFocus => "attractor-focus",
            RestPointKind::RepellerNode => "repeller-node",
            RestPointKind::RepellerFocus => "repeller-focus",
            RestPointKind::Degenerate => "degenerate",
        }
    }

    pub fn is_attractor(&self) -> bool {
        matches!(
            self,
            RestPointKind::AttractorNode | RestPointKind::AttractorFocus
        )
    }

    pub fn is_repeller(&self) -> bool {
        matches!(
            self,
            RestPointKind::RepellerNode | RestPointKind::RepellerFocus
        )
    }
}

impl fmt::Display for RestPointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RestPointKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [
            RestPointKind::Saddle,
            RestPointKind::AttractorNode,
            RestPointKind::AttractorFocus,
            RestPointKind::RepellerNode,
            RestPointKind::RepellerFocus,
            RestPointKind::Degenerate,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| format!("unknown rest point kind '{s}'"))
    }
}

/// Linear type of a rest point of the profile ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestPointClass {
    /// Eigenvalues of `B⁻¹A`.
    pub eigenvalues: RootPair,
    pub kind: RestPointKind,
    pub det_b: f64,
    pub det_binv_a: f64,
    pub trace: f64,
    /// `B⁻¹A` in the convention used for the classification.
    #[serde(skip)]
    pub linearization: Mat2,
}

impl RestPointClass {
    /// Unit eigenvector of the positive eigenvalue of a saddle.
    pub fn unstable_direction(&self) -> Option<Vec2> {
        match (self.kind, self.eigenvalues) {
            (RestPointKind::Saddle, RootPair::Real { hi, .. }) => {
                Some(self.linearization.eigenvector(hi))
            }
            _ => None,
        }
    }
}

pub(crate) fn is_singular(b: &Mat2) -> bool {
    b.det().abs() <= SINGULAR_TOL * b.norm().powi(2)
}

fn kind_of(m: &Mat2) -> RestPointKind {
    let scale = m.norm();
    let det = m.det();
    let tr = m.trace();
    if det < -CLASS_TOL * scale * scale {
        RestPointKind::Saddle
    } else if det > CLASS_TOL * scale * scale {
        let real = m.eigenvalues().is_real();
        if tr < -CLASS_TOL * scale {
            if real {
                RestPointKind::AttractorNode
            } else {
                RestPointKind::AttractorFocus
            }
        } else if tr > CLASS_TOL * scale {
            if real {
                RestPointKind::RepellerNode
            } else {
                RestPointKind::RepellerFocus
            }
        } else {
            RestPointKind::Degenerate
        }
    } else {
        RestPointKind::Degenerate
    }
}

/// Classifies a state through the eigenvalues of `B⁻¹A`.
pub fn classify_rest_point(s: &FluidState, p: &DissipationParams) -> Result<RestPointClass> {
    classify_rest_point_in(s, p, Convention::Contravariant)
}

pub fn classify_rest_point_in(
    s: &FluidState,
    p: &DissipationParams,
    convention: Convention,
) -> Result<RestPointClass> {
    let b = convention.matrix(b_total(s, p));
    let a = convention.matrix(s.flux_jacobian());
    if is_singular(&b) {
        return Err(Error::SingularLinearization(b.det()));
    }
    let binv = b.inverse().ok_or(Error::SingularLinearization(b.det()))?;
    let m = binv * a;
    Ok(RestPointClass {
        eigenvalues: m.eigenvalues(),
        kind: kind_of(&m),
        det_b: b.det(),
        det_binv_a: m.det(),
        trace: m.trace(),
        linearization: m,
    })
}

/// The profile vector field at one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    /// `B⁻¹F`, `None` on the singular locus.
    pub raw: Option<Vec2>,
    /// `adj(B) F = det(B) · B⁻¹F`.
    pub desingularized: Vec2,
    pub det_b: f64,
}

impl FieldSample {
    /// `sign(det B) · adj(B) F`: parallel to the true flow direction.
    pub fn oriented(&self) -> Vec2 {
        let s = if self.det_b < 0.0 { -1.0 } else { 1.0 };
        [s * self.desingularized[0], s * self.desingularized[1]]
    }
}

pub fn vector_field(s: &FluidState, q: &FluxTarget, p: &DissipationParams) -> FieldSample {
    ProfileSystem::new(*q, *p, Convention::Contravariant).field_at(s)
}

/// The profile ODE for fixed flux target and coefficients, in a chosen
/// index convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSystem {
    pub q: FluxTarget,
    pub params: DissipationParams,
    pub convention: Convention,
}

impl ProfileSystem {
    pub fn new(q: FluxTarget, params: DissipationParams, convention: Convention) -> Self {
        ProfileSystem {
            q,
            params,
            convention,
        }
    }

    pub fn b(&self, s: &FluidState) -> Mat2 {
        self.convention.matrix(b_total(s, &self.params))
    }

    pub fn rhs(&self, s: &FluidState) -> Vec2 {
        self.convention.vector(s.profile_rhs(&self.q))
    }

    pub fn field_at(&self, s: &FluidState) -> FieldSample {
        let b = self.b(s);
        let f = self.rhs(s);
        let raw = if is_singular(&b) {
            None
        } else {
            b.inverse().map(|inv| inv * f)
        };
        FieldSample {
            raw,
            desingularized: b.adjugate() * f,
            det_b: b.det(),
        }
    }

    /// Desingularized field at coordinates `x`, `None` outside the state space.
    pub fn desingularized(&self, x: Vec2) -> Option<(Vec2, f64)> {
        let s = self.convention.state(x).ok()?;
        let sample = self.field_at(&s);
        Some((sample.desingularized, sample.det_b))
    }

    pub fn classify(&self, s: &FluidState) -> Result<RestPointClass> {
        classify_rest_point_in(s, &self.params, self.convention)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissipation::singular_speeds;
    use crate::hugoniot::shock_states;

    fn params(eta: f64, mu: f64, nu: f64) -> DissipationParams {
        DissipationParams::new(eta, mu, nu).unwrap()
    }

    #[test]
    fn left_panel_upstream_is_saddle() {
        let pair = shock_states(31.0 / 40.0).unwrap();
        let c = classify_rest_point(&pair.minus, &params(1.0, 7.0, 20.0)).unwrap();
        assert_eq!(c.kind, RestPointKind::Saddle);
        assert!((c.det_b + 147.85).abs() < 0.01);
        assert!(c.det_binv_a < 0.0);
        // oracle: explicit eigen-solve of B⁻¹A through its characteristic polynomial
        let [lo, hi] = c.eigenvalues.real_parts();
        let disc = (c.trace * c.trace - 4.0 * c.det_binv_a).sqrt();
        assert!((hi - 0.5 * (c.trace + disc)).abs() < 1e-12);
        assert!((lo - 0.5 * (c.trace - disc)).abs() < 1e-12);
        let r = c.unstable_direction().unwrap();
        let mr = c.linearization * r;
        assert!((mr[0] - hi * r[0]).abs() < 1e-12 && (mr[1] - hi * r[1]).abs() < 1e-12);
    }

    #[test]
    fn right_panel_upstream_is_attractor() {
        let pair = shock_states(34.0 / 40.0).unwrap();
        let p = params(1.0, 7.0, 20.0);
        let c = classify_rest_point(&pair.minus, &p).unwrap();
        assert!(c.kind.is_attractor(), "{:?}", c.kind);
        assert!((c.det_b - 676.96).abs() < 0.01);
        let b = b_total(&pair.minus, &p);
        assert!(b.trace() < 0.0 && b.det() > 0.0);
    }

    #[test]
    fn threshold_upstream_is_saddle() {
        let p = params(1.0, 7.0, 3.15);
        for q in [0.76, 0.8, 0.9, 0.95, 0.999] {
            let c = classify_rest_point(&shock_states(q).unwrap().minus, &p).unwrap();
            assert_eq!(c.kind, RestPointKind::Saddle, "q̃ = {q}");
        }
    }

    #[test]
    fn singular_state_is_rejected() {
        let p = params(1.0, 7.0, 20.0);
        let v = singular_speeds(&p)[0];
        let s = FluidState::from_theta_v(1.0, v).unwrap();
        assert!(matches!(
            classify_rest_point(&s, &p),
            Err(Error::SingularLinearization(_))
        ));
    }

    #[test]
    fn field_vanishes_at_rest_points() {
        let p = params(1.0, 7.0, 20.0);
        let pair = shock_states(31.0 / 40.0).unwrap();
        for s in [pair.minus, pair.plus] {
            let f = vector_field(&s, &pair.q, &p);
            let raw = f.raw.unwrap();
            assert!(raw[0].hypot(raw[1]) < 1e-10);
            assert!(f.desingularized[0].hypot(f.desingularized[1]) < 1e-10);
        }
    }

    #[test]
    fn field_on_singular_line() {
        let p = params(1.0, 7.0, 20.0);
        let q = FluxTarget::normalized(31.0 / 40.0);
        for v in singular_speeds(&p) {
            let f = vector_field(&FluidState::from_theta_v(1.0, v).unwrap(), &q, &p);
            assert!(f.raw.is_none());
            assert!(f.desingularized.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn adjugate_field_identity() {
        let p = params(1.0, 7.0, 20.0);
        let q = FluxTarget::normalized(31.0 / 40.0);
        let s = FluidState::from_theta_v(1.0, 0.8).unwrap();
        let f = vector_field(&s, &q, &p);
        let b = b_total(&s, &p);
        let prod = b * b.adjugate();
        let scale = b.norm().powi(2);
        assert!((prod - Mat2::IDENTITY * f.det_b).norm() < 1e-12 * scale);
        let raw = f.raw.unwrap();
        assert!((f.desingularized[0] - f.det_b * raw[0]).abs() < 1e-10);
        assert!((f.desingularized[1] - f.det_b * raw[1]).abs() < 1e-10);
        let rhs = s.profile_rhs(&q);
        let back = b * raw;
        assert!((back[0] - rhs[0]).abs() < 1e-12 && (back[1] - rhs[1]).abs() < 1e-12);
    }

    #[test]
    fn conventions_are_similar() {
        let p = params(1.0, 7.0, 20.0);
        for q in [0.76, 31.0 / 40.0, 0.85, 0.95] {
            let pair = shock_states(q).unwrap();
            for s in [pair.minus, pair.plus] {
                let a = classify_rest_point_in(&s, &p, Convention::Contravariant).unwrap();
                let b = classify_rest_point_in(&s, &p, Convention::Covariant).unwrap();
                assert_eq!(a.kind, b.kind);
                assert!((a.det_binv_a - b.det_binv_a).abs() < 1e-12 * a.det_binv_a.abs());
                assert!((a.trace - b.trace).abs() < 1e-12 * a.trace.abs());
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in [
            RestPointKind::Saddle,
            RestPointKind::AttractorNode,
            RestPointKind::AttractorFocus,
            RestPointKind::RepellerNode,
            RestPointKind::RepellerFocus,
            RestPointKind::Degenerate,
        ] {
            assert_eq!(k.as_str().parse::<RestPointKind>().unwrap(), k);
        }
    }

    #[test]
    fn kind_rule() {
        assert_eq!(
            kind_of(&Mat2::new(1.0, 0.0, 0.0, -1.0)),
            RestPointKind::Saddle
        );
        assert_eq!(
            kind_of(&Mat2::new(-1.0, 0.0, 0.0, -2.0)),
            RestPointKind::AttractorNode
        );
        assert_eq!(
            kind_of(&Mat2::new(-1.0, 2.0, -2.0, -1.0)),
            RestPointKind::AttractorFocus
        );
        assert_eq!(
            kind_of(&Mat2::new(1.0, 0.0, 0.0, 2.0)),
            RestPointKind::RepellerNode
        );
        assert_eq!(
            kind_of(&Mat2::new(1.0, 2.0, -2.0, 1.0)),
            RestPointKind::RepellerFocus
        );
        assert_eq!(
            kind_of(&Mat2::new(0.0, 1.0, -1.0, 0.0)),
            RestPointKind::Degenerate
        );
        assert_eq!(
            kind_of(&Mat2::new(1.0, 0.0, 0.0, 0.0)),
            RestPointKind::Degenerate
        );
    }
}
