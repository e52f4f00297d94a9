//! Phase-portrait data: the normalized desingularized field on a grid,
//! shooting and seeded orbits, rest points, and the singular lines
//! `det B = 0`, in either `(ψ⁰, ψ¹)` or `(v, θ)` coordinates.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dissipation::{singular_speeds, DissipationParams};
use crate::dynamics::{
    find_profile, integrate_orbit, vector_field, Direction, IntegratorControls, Orbit, RestPointId,
    RestPointKind, Termination,
};
use crate::error::{Error, Result};
use crate::hugoniot::shock_states;
use crate::mat2::{Mat2, Vec2};
use crate::state::FluidState;
use crate::sweep::to_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotCoords {
    /// `(ψ⁰, ψ¹)`; the singular lines are rays through the origin.
    #[default]
    Psi,
    /// `(v, θ)`; the singular lines are vertical.
    VTheta,
}

impl PlotCoords {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlotCoords::Psi => "psi",
            PlotCoords::VTheta => "v-theta",
        }
    }

    pub fn point(&self, s: &FluidState) -> Vec2 {
        match self {
            PlotCoords::Psi => s.psi(),
            PlotCoords::VTheta => [s.v(), s.theta()],
        }
    }

    pub fn state(&self, x: Vec2) -> Result<FluidState> {
        match self {
            PlotCoords::Psi => FluidState::from_psi(x),
            PlotCoords::VTheta => FluidState::from_theta_v(x[1], x[0]),
        }
    }

    /// Pushes a tangent vector given in `ψ` coordinates forward to these
    /// coordinates at `s`.
    pub fn tangent(&self, s: &FluidState, dpsi: Vec2) -> Vec2 {
        match self {
            PlotCoords::Psi => dpsi,
            PlotCoords::VTheta => {
                // θ = (ψ⁰² − ψ¹²)^(−1/2), v = ψ¹θ
                let [p0, p1] = s.psi();
                let t3 = s.theta().powi(3);
                let jac = Mat2::new(-p1 * p0 * t3, s.theta() + p1 * p1 * t3, -p0 * t3, p1 * t3);
                jac * dpsi
            }
        }
    }
}

impl FromStr for PlotCoords {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "psi" => Ok(PlotCoords::Psi),
            "v-theta" => Ok(PlotCoords::VTheta),
            _ => Err(format!(
                "unknown coordinates '{s}' (expected psi or v-theta)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "empty or non-finite window {self:?}"
            )))
        }
    }

    pub fn contains(&self, x: Vec2) -> bool {
        (self.x_min..=self.x_max).contains(&x[0]) && (self.y_min..=self.y_max).contains(&x[1])
    }

    /// Part of the ray `r·d`, `r ≥ 0`, inside the window.
    fn clip_ray(&self, d: Vec2) -> Option<(Vec2, Vec2)> {
        let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
        for (di, min, max) in [
            (d[0], self.x_min, self.x_max),
            (d[1], self.y_min, self.y_max),
        ] {
            if di == 0.0 {
                if !(min..=max).contains(&0.0) {
                    return None;
                }
            } else {
                let (a, b) = (min / di, max / di);
                lo = lo.max(a.min(b));
                hi = hi.min(a.max(b));
            }
        }
        (lo < hi).then(|| ([lo * d[0], lo * d[1]], [hi * d[0], hi * d[1]]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum OrbitSeed {
    /// Both branches shot from the upstream saddle (when it is one).
    Shooting,
    /// A point in plot coordinates, integrated forward and backward.
    Point { x: f64, y: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitSpec {
    pub coords: PlotCoords,
    pub nx: usize,
    pub ny: usize,
    pub window: Window,
    pub seeds: Vec<OrbitSeed>,
    pub include_singular: bool,
}

impl PortraitSpec {
    /// A 25×25 grid over a window framing both shock states, with the
    /// shooting orbits and singular lines.
    pub fn auto(q_tilde: f64, coords: PlotCoords) -> Result<Self> {
        let pair = shock_states(q_tilde)?;
        let a = coords.point(&pair.minus);
        let b = coords.point(&pair.plus);
        let pad = 0.35 * (a[0] - b[0]).abs().max((a[1] - b[1]).abs());
        Ok(PortraitSpec {
            coords,
            nx: 25,
            ny: 25,
            window: Window {
                x_min: a[0].min(b[0]) - pad,
                x_max: a[0].max(b[0]) + pad,
                y_min: a[1].min(b[1]) - pad,
                y_max: a[1].max(b[1]) + pad,
            },
            seeds: vec![OrbitSeed::Shooting],
            include_singular: true,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidInput(format!(
                "portrait grid must be at least 2x2, got {}x{}",
                self.nx, self.ny
            )));
        }
        self.window.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldPoint {
    pub at: Vec2,
    /// Unit vector along the flow, zero at rest points.
    pub direction: Vec2,
    /// `log10` of the oriented desingularized field's length in plot coordinates.
    pub log10_magnitude: f64,
    pub det_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum OrbitSource {
    /// Launched from the upstream saddle; `branch` is 0 for `+r`, 1 for `−r`.
    Shooting {
        branch: usize,
    },
    Seed {
        seed: usize,
        direction: Direction,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortraitOrbit {
    pub source: OrbitSource,
    pub termination: Termination,
    /// Shot from the upstream state and captured by the downstream one.
    pub connecting: bool,
    pub points: Vec<Vec2>,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestPoint {
    pub id: RestPointId,
    pub at: Vec2,
    pub kind: Option<RestPointKind>,
    pub det_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularLine {
    /// Signed speed of the line `det B = 0`.
    pub v: f64,
    pub from: Vec2,
    pub to: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PortraitBundle {
    pub q_tilde: f64,
    pub params: DissipationParams,
    pub spec: PortraitSpec,
    pub field: Vec<FieldPoint>,
    pub orbits: Vec<PortraitOrbit>,
    pub rest_points: Vec<RestPoint>,
    pub singular_lines: Vec<SingularLine>,
}

impl PortraitBundle {
    pub fn has_connecting_orbit(&self) -> bool {
        self.orbits.iter().any(|o| o.connecting)
    }
}

fn to_portrait_orbit(orbit: &Orbit, coords: PlotCoords, source: OrbitSource) -> PortraitOrbit {
    PortraitOrbit {
        source,
        termination: orbit.termination,
        connecting: matches!(source, OrbitSource::Shooting { .. })
            && orbit.termination == Termination::Converged(RestPointId::Downstream),
        points: orbit
            .samples
            .iter()
            .map(|s| coords.point(&s.state))
            .collect(),
        times: orbit.samples.iter().map(|s| s.t).collect(),
    }
}

pub fn portrait_data(
    p: &DissipationParams,
    q_tilde: f64,
    spec: &PortraitSpec,
    c: &IntegratorControls,
) -> Result<PortraitBundle> {
    spec.validate()?;
    let pair = shock_states(q_tilde)?;
    let coords = spec.coords;
    let w = spec.window;

    let mut field = Vec::with_capacity(spec.nx * spec.ny);
    for j in 0..spec.ny {
        let y = w.y_min + (w.y_max - w.y_min) * j as f64 / (spec.ny - 1) as f64;
        for i in 0..spec.nx {
            let x = w.x_min + (w.x_max - w.x_min) * i as f64 / (spec.nx - 1) as f64;
            // grid points outside the state space carry no field
            let Ok(s) = coords.state([x, y]) else {
                continue;
            };
            let sample = vector_field(&s, &pair.q, p);
            let d = coords.tangent(&s, sample.oriented());
            let m = d[0].hypot(d[1]);
            let direction = if m > 0.0 {
                [d[0] / m, d[1] / m]
            } else {
                [0.0, 0.0]
            };
            field.push(FieldPoint {
                at: [x, y],
                direction,
                log10_magnitude: m.log10(),
                det_b: sample.det_b,
            });
        }
    }

    let mut orbits = Vec::new();
    for (k, seed) in spec.seeds.iter().enumerate() {
        match *seed {
            OrbitSeed::Shooting => {
                let verdict = find_profile(q_tilde, p, c)?;
                for (branch, o) in verdict.diagnostics.branches.iter().enumerate() {
                    orbits.push(to_portrait_orbit(
                        o,
                        coords,
                        OrbitSource::Shooting { branch },
                    ));
                }
            }
            OrbitSeed::Point { x, y } => {
                let start = coords.state([x, y])?;
                for direction in [Direction::Forward, Direction::Backward] {
                    let orbit = match integrate_orbit(&start, direction, &pair.q, p, c) {
                        Ok(o) => o,
                        Err(e) => match e.partial {
                            Some(o) => o,
                            None => continue,
                        },
                    };
                    let source = OrbitSource::Seed { seed: k, direction };
                    orbits.push(to_portrait_orbit(&orbit, coords, source));
                }
            }
        }
    }

    let rest_points = [
        (RestPointId::Upstream, pair.minus),
        (RestPointId::Downstream, pair.plus),
    ]
    .into_iter()
    .map(|(id, s)| RestPoint {
        id,
        at: coords.point(&s),
        kind: crate::dynamics::classify_rest_point(&s, p)
            .ok()
            .map(|c| c.kind),
        det_b: vector_field(&s, &pair.q, p).det_b,
    })
    .collect();

    let mut singular_lines = Vec::new();
    if spec.include_singular {
        for speed in singular_speeds(p) {
            let signed = if speed == 0.0 {
                vec![0.0]
            } else {
                vec![-speed, speed]
            };
            for v in signed {
                let segment = match coords {
                    PlotCoords::Psi => w.clip_ray([v.hypot(1.0), v]),
                    PlotCoords::VTheta => (w.x_min..=w.x_max)
                        .contains(&v)
                        .then_some(([v, w.y_min.max(0.0)], [v, w.y_max]))
                        .filter(|(a, b)| a[1] < b[1]),
                };
                if let Some((from, to)) = segment {
                    singular_lines.push(SingularLine { v, from, to });
                }
            }
        }
    }

    Ok(PortraitBundle {
        q_tilde,
        params: *p,
        spec: spec.clone(),
        field,
        orbits,
        rest_points,
        singular_lines,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortraitRow {
    pub kind: PortraitRowKind,
    pub seq: usize,
    pub idx: usize,
    pub x: f64,
    pub y: f64,
    pub aux: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortraitRowKind {
    Field,
    Orbit,
    Restpoint,
    Singular,
}

pub const PORTRAIT_HEADER: &str = "kind,seq,idx,x,y,aux";

impl PortraitBundle {
    /// Flat rows: field (`aux` = log10 magnitude), orbit (`seq` = orbit id,
    /// `aux` = pseudo-time), restpoint (`seq` 0 upstream / 1 downstream,
    /// `aux` = det B), singular (`seq` = line id, `idx` 0/1 endpoints,
    /// `aux` = signed speed).
    pub fn rows(&self) -> Vec<PortraitRow> {
        let mut rows = Vec::new();
        let row = |kind, seq, idx, at: Vec2, aux| PortraitRow {
            kind,
            seq,
            idx,
            x: at[0],
            y: at[1],
            aux,
        };
        for (i, f) in self.field.iter().enumerate() {
            rows.push(row(PortraitRowKind::Field, 0, i, f.at, f.log10_magnitude));
        }
        for (k, o) in self.orbits.iter().enumerate() {
            for (i, (&at, &t)) in o.points.iter().zip(&o.times).enumerate() {
                rows.push(row(PortraitRowKind::Orbit, k, i, at, t));
            }
        }
        for (k, r) in self.rest_points.iter().enumerate() {
            rows.push(row(PortraitRowKind::Restpoint, k, 0, r.at, r.det_b));
        }
        for (k, l) in self.singular_lines.iter().enumerate() {
            rows.push(row(PortraitRowKind::Singular, k, 0, l.from, l.v));
            rows.push(row(PortraitRowKind::Singular, k, 1, l.to, l.v));
        }
        rows
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.rows(), PORTRAIT_HEADER).expect("portrait rows always serialize")
    }

    /// A static SVG rendering.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 640.0;
        const M: f64 = 40.0;
        let win = self.spec.window;
        let sx = (W - 2.0 * M) / (win.x_max - win.x_min);
        let sy = (H - 2.0 * M) / (win.y_max - win.y_min);
        let px = |p: Vec2| (M + (p[0] - win.x_min) * sx, H - M - (p[1] - win.y_min) * sy);
        let cell = ((win.x_max - win.x_min) / self.spec.nx as f64)
            .min((win.y_max - win.y_min) / self.spec.ny as f64);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * M,
            H - 2.0 * M
        );
        for l in &self.singular_lines {
            let (a, b) = (px(l.from), px(l.to));
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-width="2"/>"##,
                a.0, a.1, b.0, b.1
            );
        }
        for f in &self.field {
            if f.direction == [0.0, 0.0] {
                continue;
            }
            let half = 0.4 * cell;
            let a = px([
                f.at[0] - half * f.direction[0],
                f.at[1] - half * f.direction[1],
            ]);
            let b = px([
                f.at[0] + half * f.direction[0],
                f.at[1] + half * f.direction[1],
            ]);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#36c" stroke-width="1"/><circle cx="{:.2}" cy="{:.2}" r="1.5" fill="#36c"/>"##,
                a.0, a.1, b.0, b.1, b.0, b.1
            );
        }
        for o in &self.orbits {
            let colour = if o.connecting { "#c00" } else { "#333" };
            let pts: Vec<String> = o
                .points
                .iter()
                .filter(|p| win.contains(**p))
                .map(|&p| {
                    let (x, y) = px(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            if pts.len() > 1 {
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
        }
        for r in &self.rest_points {
            let (x, y) = px(r.at);
            let fill = match r.id {
                RestPointId::Upstream => "black",
                RestPointId::Downstream => "white",
            };
            let _ = writeln!(
                s,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}" stroke="black"/>"#
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
