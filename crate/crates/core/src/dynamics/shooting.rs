//! Orbit integration along the desingularized field and the heteroclinic
//! shooting decision.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::integrator::{Dopri5, StepOutcome};
use super::{Convention, ProfileSystem, RestPointClass, RestPointKind};
use crate::dissipation::{singular_speeds, DissipationParams};
use crate::error::{Error, Result};
use crate::hugoniot::{shock_states, solve_t_eq_q, FluxTarget};
use crate::mat2::{dot, norm, Vec2};
use crate::state::FluidState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorControls {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Launch distance from the saddle, relative to its norm.
    pub launch_offset: f64,
    /// Capture radius around a rest point, relative to its norm.
    pub convergence_ball: f64,
    /// Budget of step attempts (accepted and rejected).
    pub max_steps: usize,
    pub max_arc_length: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Orbits stop once `|v|` exceeds this.
    pub v_max: f64,
    /// Largest coordinate distance between consecutive samples.
    pub max_sample_spacing: f64,
    /// Shocks with `v_− − v_+` below this get an inconclusive verdict.
    pub min_amplitude: f64,
}

impl Default for IntegratorControls {
    fn default() -> Self {
        IntegratorControls {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            launch_offset: 1e-6,
            convergence_ball: 1e-6,
            max_steps: 200_000,
            max_arc_length: 1e4,
            theta_min: 1e-3,
            theta_max: 1e3,
            v_max: 50.0,
            max_sample_spacing: 0.02,
            min_amplitude: 1e-5,
        }
    }
}

impl IntegratorControls {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel-tol", self.rel_tol),
            ("abs-tol", self.abs_tol),
            ("launch-offset", self.launch_offset),
            ("convergence-ball", self.convergence_ball),
            ("max-arc-length", self.max_arc_length),
            ("theta-min", self.theta_min),
            ("theta-max", self.theta_max),
            ("v-max", self.v_max),
            ("max-sample-spacing", self.max_sample_spacing),
            ("min-amplitude", self.min_amplitude),
        ];
        for (name, x) in positive {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "control {name} must be positive and finite, got {x}"
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput(
                "control max-steps must be positive".into(),
            ));
        }
        if self.rel_tol >= self.convergence_ball {
            return Err(Error::InvalidInput(format!(
                "rel-tol ({}) must be smaller than convergence-ball ({})",
                self.rel_tol, self.convergence_ball
            )));
        }
        if self.theta_min >= self.theta_max {
            return Err(Error::InvalidInput(
                "theta-min must be below theta-max".into(),
            ));
        }
        Ok(())
    }

    fn in_box(&self, s: &FluidState) -> bool {
        (self.theta_min..=self.theta_max).contains(&s.theta()) && s.v().abs() <= self.v_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RestPointId {
    /// `ψ_−`
    Upstream,
    /// `ψ_+`
    Downstream,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "rest_point")]
pub enum Termination {
    Converged(RestPointId),
    LeftDomain,
    HitSingularLocus,
    StepLimit,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Converged(RestPointId::Upstream) => f.write_str("converged(minus)"),
            Termination::Converged(RestPointId::Downstream) => f.write_str("converged(plus)"),
            Termination::LeftDomain => f.write_str("left-domain"),
            Termination::HitSingularLocus => f.write_str("hit-singular-locus"),
            Termination::StepLimit => f.write_str("step-limit"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(&self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitSample {
    /// Pseudo-time of the desingularized field.
    pub t: f64,
    pub state: FluidState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    pub samples: Vec<OrbitSample>,
    pub termination: Termination,
    pub direction: Direction,
    pub arc_length: f64,
    /// Sign of `det B` at launch; constant along the orbit.
    pub det_b_sign: f64,
}

impl Orbit {
    pub fn start(&self) -> &FluidState {
        &self.samples[0].state
    }

    pub fn end(&self) -> &FluidState {
        &self.samples[self.samples.len() - 1].state
    }
}

/// Integration aborted; the orbit up to the failure is kept.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("orbit integration failed: {reason}")]
pub struct IntegrationError {
    pub reason: String,
    pub partial: Option<Orbit>,
}

impl From<IntegrationError> for Error {
    fn from(e: IntegrationError) -> Self {
        Error::NumericalFailure(e.reason)
    }
}

type RestPoints = [(RestPointId, Vec2)];

struct Driver<'a> {
    system: &'a ProfileSystem,
    controls: &'a IntegratorControls,
    rk: Dopri5,
    /// `±1 · sign(det B at launch)`
    orientation: f64,
}

impl Driver<'_> {
    fn field(&self, x: Vec2) -> Option<Vec2> {
        let (f, _) = self.system.desingularized(x)?;
        Some([self.orientation * f[0], self.orientation * f[1]])
    }

    fn det_b(&self, x: Vec2) -> Option<f64> {
        self.system.desingularized(x).map(|(_, d)| d)
    }

    fn converged(&self, x: Vec2, fx: Vec2, rest: &RestPoints) -> Option<RestPointId> {
        rest.iter().find_map(|&(id, r)| {
            let d = [x[0] - r[0], x[1] - r[1]];
            (norm(d) <= self.controls.convergence_ball * norm(r) && dot(fx, d) <= 0.0).then_some(id)
        })
    }

    /// Last point on the launch side of a det B sign change inside the step
    /// `(x, h)`, located by bisection on the step length.
    fn approach_singular_locus(&self, x: Vec2, k1: Vec2, h: f64, det_sign: f64) -> (Vec2, f64) {
        let (mut lo, mut hi) = (0.0, h);
        let mut best = x;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            match self.rk.raw_step(&|y| self.field(y), x, k1, mid) {
                Some((y, _, _)) if self.det_b(y).is_some_and(|d| d * det_sign > 0.0) => {
                    lo = mid;
                    best = y;
                }
                _ => hi = mid,
            }
        }
        (best, lo)
    }

    fn run(
        &self,
        start: Vec2,
        det_sign: f64,
        direction: Direction,
        rest: &RestPoints,
    ) -> std::result::Result<Orbit, IntegrationError> {
        let c = self.controls;
        let conv = self.system.convention;
        let state_of = |x: Vec2| {
            conv.state(x)
                .expect("integrator stays inside the state space")
        };
        let mut orbit = Orbit {
            samples: vec![OrbitSample {
                t: 0.0,
                state: state_of(start),
            }],
            termination: Termination::StepLimit,
            direction,
            arc_length: 0.0,
            det_b_sign: det_sign,
        };

        let mut x = start;
        let mut k = self.field(x).expect("launch point lies in the state space");
        if let Some(id) = self.converged(x, k, rest) {
            orbit.termination = Termination::Converged(id);
            return Ok(orbit);
        }
        let mut t = 0.0f64;
        let mut h = self
            .rk
            .initial_step(x, k)
            .min(c.max_sample_spacing / norm(k).max(1e-300));
        let mut attempts = 0usize;

        while attempts < c.max_steps {
            attempts += 1;
            if h <= 1e-14 * t.abs().max(1e-3) {
                return Err(IntegrationError {
                    reason: format!("step size underflow (h = {h:e}) at t = {t}"),
                    partial: Some(orbit),
                });
            }
            match self.rk.try_step(&|y| self.field(y), x, k, h) {
                StepOutcome::Undefined => h *= 0.25,
                StepOutcome::Rejected { h_next } => h = h_next,
                StepOutcome::Accepted {
                    x: xn,
                    f: kn,
                    h_next,
                } => {
                    let step = norm([xn[0] - x[0], xn[1] - x[1]]);
                    if step > 1.5 * c.max_sample_spacing {
                        h *= c.max_sample_spacing / step;
                        continue;
                    }
                    let det = self
                        .det_b(xn)
                        .expect("accepted point is in the state space");
                    if det * det_sign <= 0.0 {
                        let (y, dt) = self.approach_singular_locus(x, k, h, det_sign);
                        orbit.arc_length += norm([y[0] - x[0], y[1] - x[1]]);
                        orbit.samples.push(OrbitSample {
                            t: t + dt,
                            state: state_of(y),
                        });
                        orbit.termination = Termination::HitSingularLocus;
                        return Ok(orbit);
                    }
                    t += h;
                    orbit.arc_length += step;
                    x = xn;
                    k = kn;
                    let state = state_of(x);
                    orbit.samples.push(OrbitSample { t, state });
                    if !c.in_box(&state) {
                        orbit.termination = Termination::LeftDomain;
                        return Ok(orbit);
                    }
                    if let Some(id) = self.converged(x, k, rest) {
                        orbit.termination = Termination::Converged(id);
                        return Ok(orbit);
                    }
                    if orbit.arc_length > c.max_arc_length {
                        break;
                    }
                    h = h_next;
                }
            }
        }
        orbit.termination = Termination::StepLimit;
        Ok(orbit)
    }
}

fn integrate_in(
    system: &ProfileSystem,
    rest: &RestPoints,
    start: &FluidState,
    direction: Direction,
    c: &IntegratorControls,
) -> std::result::Result<Orbit, IntegrationError> {
    let fail = |reason: String| IntegrationError {
        reason,
        partial: None,
    };
    if !c.in_box(start) {
        return Err(fail(format!(
            "launch state (theta = {}, v = {}) lies outside the domain box",
            start.theta(),
            start.v()
        )));
    }
    let x0 = system.convention.coords(start);
    let det0 = system.field_at(start).det_b;
    if det0 == 0.0 {
        return Ok(Orbit {
            samples: vec![OrbitSample {
                t: 0.0,
                state: *start,
            }],
            termination: Termination::HitSingularLocus,
            direction,
            arc_length: 0.0,
            det_b_sign: 0.0,
        });
    }
    let det_sign = det0.signum();
    let driver = Driver {
        system,
        controls: c,
        rk: Dopri5 {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
        },
        orientation: direction.sign() * det_sign,
    };
    driver.run(x0, det_sign, direction, rest)
}

/// Integrates `x' = s₀ · adj(B(x)) F(x)` from `start`, with
/// `s₀ = ±sign(det B(start))` so that forward pseudo-time follows profile time
/// on the launch side of the singular locus.
///
/// The rest points used for the convergence test are the solutions of
/// `T^{α1}(ψ) = q^α`, labelled upstream/downstream in order of decreasing `|v|`.
pub fn integrate_orbit(
    start: &FluidState,
    direction: Direction,
    q: &FluxTarget,
    p: &DissipationParams,
    c: &IntegratorControls,
) -> std::result::Result<Orbit, IntegrationError> {
    c.validate().map_err(|e| IntegrationError {
        reason: e.to_string(),
        partial: None,
    })?;
    let system = ProfileSystem::new(*q, *p, Convention::Contravariant);
    let rest: Vec<(RestPointId, Vec2)> = solve_t_eq_q(q.q0, q.q1)
        .map_err(|e| IntegrationError {
            reason: e.to_string(),
            partial: None,
        })?
        .iter()
        .zip([RestPointId::Upstream, RestPointId::Downstream])
        .map(|(s, id)| (id, s.psi()))
        .collect();
    integrate_in(&system, &rest, start, direction, c)
}

/// Flat verdict label, as written to reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    Exists,
    NotExistsAttractor,
    NotExistsMissed,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Exists => "exists",
            VerdictKind::NotExistsAttractor => "not-exists-attractor",
            VerdictKind::NotExistsMissed => "not-exists-missed",
            VerdictKind::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VerdictKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [
            VerdictKind::Exists,
            VerdictKind::NotExistsAttractor,
            VerdictKind::NotExistsMissed,
            VerdictKind::Inconclusive,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| format!("unknown verdict '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Outcome {
    Exists { orbit: Orbit },
    NotExistsAttractor,
    NotExistsMissed,
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileDiagnostics {
    pub q_tilde: f64,
    pub minus: FluidState,
    pub plus: FluidState,
    pub class_minus: Option<RestPointClass>,
    pub class_plus: Option<RestPointClass>,
    /// `v ≥ 0` where `det B = 0`.
    pub singular_speeds: Vec<f64>,
    /// Number of singular speeds below `v_−` (which band the state lies in).
    pub band_minus: usize,
    pub band_plus: usize,
    /// Every shot orbit, in launch order (`+r` then `−r`).
    pub branches: Vec<Orbit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileVerdict {
    pub outcome: Outcome,
    pub diagnostics: ProfileDiagnostics,
}

impl ProfileVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self.outcome {
            Outcome::Exists { .. } => VerdictKind::Exists,
            Outcome::NotExistsAttractor => VerdictKind::NotExistsAttractor,
            Outcome::NotExistsMissed => VerdictKind::NotExistsMissed,
            Outcome::Inconclusive { .. } => VerdictKind::Inconclusive,
        }
    }

    pub fn orbit(&self) -> Option<&Orbit> {
        match &self.outcome {
            Outcome::Exists { orbit } => Some(orbit),
            _ => None,
        }
    }
}

/// Decides whether the shock with amplitude `q_tilde` has a dissipation
/// profile.
///
/// An upstream attractor cannot be the α-limit of an orbit, which rules a
/// profile out. An upstream saddle is left along both halves of its unstable
/// manifold and the profile exists iff one of them is captured by `ψ_+`.
pub fn find_profile(
    q_tilde: f64,
    p: &DissipationParams,
    c: &IntegratorControls,
) -> Result<ProfileVerdict> {
    find_profile_in(q_tilde, p, c, Convention::Contravariant)
}

pub fn find_profile_in(
    q_tilde: f64,
    p: &DissipationParams,
    c: &IntegratorControls,
    convention: Convention,
) -> Result<ProfileVerdict> {
    c.validate()?;
    let pair = shock_states(q_tilde)?;
    let system = ProfileSystem::new(pair.q, *p, convention);
    let class_minus = system.classify(&pair.minus);
    let class_plus = system.classify(&pair.plus);
    let speeds = singular_speeds(p);
    let band = |s: &FluidState| speeds.iter().filter(|&&w| w < s.v().abs()).count();
    let mut diagnostics = ProfileDiagnostics {
        q_tilde,
        minus: pair.minus,
        plus: pair.plus,
        class_minus: class_minus.as_ref().ok().copied(),
        class_plus: class_plus.as_ref().ok().copied(),
        band_minus: band(&pair.minus),
        band_plus: band(&pair.plus),
        singular_speeds: speeds.clone(),
        branches: Vec::new(),
    };
    let inconclusive = |reason: String, diagnostics| ProfileVerdict {
        outcome: Outcome::Inconclusive { reason },
        diagnostics,
    };

    if pair.amplitude() < c.min_amplitude {
        return Ok(inconclusive(
            format!(
                "amplitude {:e} below {:e}: center-manifold regime",
                pair.amplitude(),
                c.min_amplitude
            ),
            diagnostics,
        ));
    }
    let class = match class_minus {
        Err(e) => return Ok(inconclusive(format!("upstream state: {e}"), diagnostics)),
        Ok(class) => class,
    };
    match class.kind {
        k if k.is_attractor() => {
            return Ok(ProfileVerdict {
                outcome: Outcome::NotExistsAttractor,
                diagnostics,
            })
        }
        k if k.is_repeller() => {
            return Ok(inconclusive(
                format!("upstream state is a {k}; unstable-manifold shooting does not apply"),
                diagnostics,
            ))
        }
        RestPointKind::Degenerate => {
            return Ok(inconclusive(
                "upstream linearization is degenerate".into(),
                diagnostics,
            ))
        }
        _ => {}
    }

    let r = class
        .unstable_direction()
        .expect("saddles have a real unstable eigenvector");
    let x_minus = convention.coords(&pair.minus);
    let offset = c.launch_offset * norm(x_minus);
    let rest = [
        (RestPointId::Upstream, x_minus),
        (RestPointId::Downstream, convention.coords(&pair.plus)),
    ];
    let mut failures = Vec::new();
    let mut connection = None;
    for sgn in [1.0, -1.0] {
        let x0 = [
            x_minus[0] + sgn * offset * r[0],
            x_minus[1] + sgn * offset * r[1],
        ];
        let start = convention.state(x0)?;
        match integrate_in(&system, &rest, &start, Direction::Forward, c) {
            Ok(orbit) => {
                if connection.is_none()
                    && orbit.termination == Termination::Converged(RestPointId::Downstream)
                {
                    connection = Some(diagnostics.branches.len());
                }
                diagnostics.branches.push(orbit);
            }
            Err(e) => {
                failures.push(e.reason.clone());
                if let Some(partial) = e.partial {
                    diagnostics.branches.push(partial);
                }
            }
        }
    }

    if let Some(i) = connection {
        let orbit = diagnostics.branches[i].clone();
        return Ok(ProfileVerdict {
            outcome: Outcome::Exists { orbit },
            diagnostics,
        });
    }
    if !failures.is_empty() {
        return Ok(inconclusive(failures.join("; "), diagnostics));
    }
    if diagnostics
        .branches
        .iter()
        .any(|o| o.termination == Termination::StepLimit)
    {
        return Ok(inconclusive(
            "integration budget exhausted before a decision".into(),
            diagnostics,
        ));
    }
    Ok(ProfileVerdict {
        outcome: Outcome::NotExistsMissed,
        diagnostics,
    })
}
