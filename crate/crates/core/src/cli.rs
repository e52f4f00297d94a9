//! The `shockprof` command line.
//!
//! Every flag is optional at the parser level so that a `--config` JSON file
//! can supply it; the effective value is flag, then config, then default.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::causality::{classify_causality, LUMINAL_TOL};
use crate::dissipation::{b_total, singular_speeds, DissipationParams};
use crate::dynamics::{find_profile, IntegratorControls, Outcome, RestPointClass};
use crate::error::Error;
use crate::hugoniot::{lax_classify, shock_states, solve_t_eq_q, Q_TILDE_MAX, Q_TILDE_MIN};
use crate::portrait::{portrait_data, OrbitSeed, PlotCoords, PortraitSpec, Window};
use crate::state::FluidState;
use crate::sweep::{critical_q, linspace, region_map, region_to_csv, sweep_q, sweep_to_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Environment variable capping the worker threads of sweeps and region maps.
pub const THREADS_VAR: &str = "SHOCKPROF_THREADS";

const DEFAULT_Q_TILDE: f64 = 31.0 / 40.0;
const DEFAULT_Q_GRID: &str = "0.76:0.98:12";
const DEFAULT_MU_GRID: &str = "1:10:10";
const DEFAULT_NU_GRID: &str = "1:30:30";

#[derive(Parser, Debug)]
#[command(
    name = "shockprof",
    version,
    about = "Shock states, causality and dissipation-profile existence for a viscous radiation fluid"
)]
struct Cli {
    /// JSON file whose keys mirror the long flag names; flags override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upstream and downstream shock states for an amplitude
    Hugoniot {
        #[command(flatten)]
        q: AmplitudeArgs,
        #[command(flatten)]
        out: FormatOnly,
    },
    /// All states with given flux components (q0, q1)
    SolveQ {
        /// Flux component T01 (required unless set in the config)
        #[arg(long, allow_negative_numbers = true)]
        q0: Option<f64>,
        /// Flux component T11 [default: 1]
        #[arg(long, allow_negative_numbers = true)]
        q1: Option<f64>,
        #[command(flatten)]
        out: FormatOnly,
    },
    /// Characteristic speeds of the dissipation operator
    Causality {
        #[command(flatten)]
        params: ParamArgs,
        /// Also evaluate the closed-form coefficient inequality and flag disagreement
        #[arg(long)]
        adjudicate: bool,
        /// Tolerance on max sigma^2 for the luminal class [default: 1e-9]
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: FormatOnly,
    },
    /// Rest-point types of both shock states
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        q: AmplitudeArgs,
        #[command(flatten)]
        out: FormatOnly,
    },
    /// Decide whether a dissipation profile exists
    Profile {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        q: AmplitudeArgs,
        #[command(flatten)]
        controls: ControlArgs,
        /// Write the connecting orbit as CSV (t,psi0,psi1,v,theta)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        format: FormatOnly,
    },
    /// Verdicts over a grid of amplitudes
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Amplitude grid min:max:count [default: 0.76:0.98:12]
        #[arg(long, value_name = "GRID")]
        q_grid: Option<String>,
        #[command(flatten)]
        controls: ControlArgs,
        #[command(flatten)]
        out: FormatArgs,
    },
    /// Amplitude where the upstream state turns from saddle into attractor
    CriticalQ {
        #[command(flatten)]
        params: ParamArgs,
        /// Bisection tolerance [default: 1e-6]
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: FormatOnly,
    },
    /// Causality class and transition flag over a (mu, nu) grid
    Region {
        /// Viscosity [default: 1]
        #[arg(long)]
        eta: Option<f64>,
        /// Thermal coefficient grid min:max:count [default: 1:10:10]
        #[arg(long, value_name = "GRID")]
        mu_grid: Option<String>,
        /// Velocity coefficient grid min:max:count [default: 1:30:30]
        #[arg(long, value_name = "GRID")]
        nu_grid: Option<String>,
        #[command(flatten)]
        out: FormatArgs,
    },
    /// Phase-portrait data (field, orbits, rest points, singular lines)
    Portrait {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        q: AmplitudeArgs,
        #[command(flatten)]
        controls: ControlArgs,
        /// Plot coordinates [default: psi]
        #[arg(long, value_enum)]
        coords: Option<CoordsArg>,
        /// Grid columns [default: 25]
        #[arg(long)]
        nx: Option<usize>,
        /// Grid rows [default: 25]
        #[arg(long)]
        ny: Option<usize>,
        /// Window xmin:xmax:ymin:ymax [default: framing both shock states]
        #[arg(long, allow_hyphen_values = true, value_name = "WINDOW")]
        window: Option<String>,
        /// Extra orbit seed x,y in plot coordinates (repeatable)
        #[arg(long = "seed", allow_hyphen_values = true, value_name = "X,Y")]
        seeds: Vec<String>,
        /// Omit the orbits shot from the upstream state
        #[arg(long)]
        no_shooting: bool,
        /// Omit the singular lines
        #[arg(long)]
        no_singular: bool,
        /// Write an SVG rendering
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: FormatArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct ParamArgs {
    /// Viscosity [default: 1]
    #[arg(long)]
    eta: Option<f64>,
    /// Thermal regulator coefficient [default: 7]
    #[arg(long)]
    mu: Option<f64>,
    /// Velocity regulator coefficient [default: 20]
    #[arg(long)]
    nu: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct AmplitudeArgs {
    /// Amplitude parameter in (3/4, 1) [default: 0.775]
    #[arg(long, allow_negative_numbers = true)]
    q_tilde: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct ControlArgs {
    /// Integrator relative tolerance [default: 1e-9]
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Integrator absolute tolerance [default: 1e-12]
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Relative launch distance from the upstream saddle [default: 1e-6]
    #[arg(long)]
    launch_offset: Option<f64>,
    /// Relative capture radius around a rest point [default: 1e-6]
    #[arg(long)]
    convergence_ball: Option<f64>,
    /// Step-attempt budget per orbit [default: 200000]
    #[arg(long)]
    max_steps: Option<usize>,
    /// Arc-length budget per orbit [default: 10000]
    #[arg(long)]
    max_arc_length: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct FormatArgs {
    /// Output format [default: table]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also write CSV to this file (with csv format, instead of stdout)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct FormatOnly {
    /// Output format [default: table]
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum CoordsArg {
    Psi,
    VTheta,
}

impl From<CoordsArg> for PlotCoords {
    fn from(c: CoordsArg) -> Self {
        match c {
            CoordsArg::Psi => PlotCoords::Psi,
            CoordsArg::VTheta => PlotCoords::VTheta,
        }
    }
}

/// Values from `--config`.
#[derive(Deserialize, Debug, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Config {
    eta: Option<f64>,
    mu: Option<f64>,
    nu: Option<f64>,
    q_tilde: Option<f64>,
    q0: Option<f64>,
    q1: Option<f64>,
    tol: Option<f64>,
    adjudicate: Option<bool>,
    q_grid: Option<String>,
    mu_grid: Option<String>,
    nu_grid: Option<String>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    launch_offset: Option<f64>,
    convergence_ball: Option<f64>,
    max_steps: Option<usize>,
    max_arc_length: Option<f64>,
    coords: Option<CoordsArg>,
    nx: Option<usize>,
    ny: Option<usize>,
    window: Option<String>,
    seed: Option<Vec<String>>,
    format: Option<Format>,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
}

/// A failed command: exit code and message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::NoShock { .. } => EXIT_INVALID,
            Error::DegenerateClassification(_)
            | Error::SingularLinearization(_)
            | Error::NumericalFailure(_) => EXIT_NUMERICAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, Failure> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::invalid(format!("bad config {}: {e}", path.display())))
    }

    fn params(&self, a: &ParamArgs) -> Result<DissipationParams, Failure> {
        Ok(DissipationParams::new(
            pick(a.eta, self.eta, 1.0),
            pick(a.mu, self.mu, 7.0),
            pick(a.nu, self.nu, 20.0),
        )?)
    }

    fn q_tilde(&self, a: &AmplitudeArgs) -> f64 {
        pick(a.q_tilde, self.q_tilde, DEFAULT_Q_TILDE)
    }

    fn controls(&self, a: &ControlArgs) -> Result<IntegratorControls, Failure> {
        let d = IntegratorControls::default();
        let c = IntegratorControls {
            rel_tol: pick(a.rel_tol, self.rel_tol, d.rel_tol),
            abs_tol: pick(a.abs_tol, self.abs_tol, d.abs_tol),
            launch_offset: pick(a.launch_offset, self.launch_offset, d.launch_offset),
            convergence_ball: pick(
                a.convergence_ball,
                self.convergence_ball,
                d.convergence_ball,
            ),
            max_steps: pick(a.max_steps, self.max_steps, d.max_steps),
            max_arc_length: pick(a.max_arc_length, self.max_arc_length, d.max_arc_length),
            ..d
        };
        c.validate()?;
        Ok(c)
    }

    fn format(&self, flag: Option<Format>) -> Format {
        pick(flag, self.format, Format::Table)
    }

    fn out(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.out.clone())
    }
}

/// Parses `min:max:count`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, count] = parts[..] else {
        return Err(format!("grid '{s}' is not of the form min:max:count"));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("grid '{s}': '{t}' is not a finite number"))
    };
    let (min, max) = (num(min)?, num(max)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("grid '{s}': count '{count}' is not a nonnegative integer"))?;
    if min > max {
        return Err(format!("grid '{s}': min exceeds max"));
    }
    if count > 1 && min == max {
        return Err(format!("grid '{s}': {count} points on an empty interval"));
    }
    Ok(linspace(min, max, count))
}

fn parse_window(s: &str) -> Result<Window, Failure> {
    let v: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::invalid(format!("window '{s}' is not xmin:xmax:ymin:ymax")))?;
    let [x_min, x_max, y_min, y_max] = v[..] else {
        return Err(Failure::invalid(format!(
            "window '{s}' is not xmin:xmax:ymin:ymax"
        )));
    };
    let w = Window {
        x_min,
        x_max,
        y_min,
        y_max,
    };
    w.validate()?;
    Ok(w)
}

fn parse_seed(s: &str) -> Result<OrbitSeed, Failure> {
    let bad = || Failure::invalid(format!("seed '{s}' is not x,y"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    Ok(OrbitSeed::Point { x, y })
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    std::fs::write(path, contents)
        .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut Vec<u8>, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::invalid(format!("cannot write output: {e}")))
}

fn emit_json(out: &mut Vec<u8>, value: &impl Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::numerical(format!("json: {e}")))?;
    emit(out, &(text + "\n"))
}

fn no_csv(cmd: &str) -> Failure {
    Failure::invalid(format!(
        "{cmd}: csv output is available for sweep, region and portrait"
    ))
}

fn check_amplitude(q: f64) -> Result<(), Failure> {
    // the library check also rejects this; stated here so the message names the grid value
    if !(q > Q_TILDE_MIN && q < Q_TILDE_MAX) {
        return Err(Failure::invalid(format!(
            "q_tilde = {q} lies outside the admissible interval (3/4, 1)"
        )));
    }
    Ok(())
}

fn state_json(s: &FluidState) -> serde_json::Value {
    json!({ "theta": s.theta(), "v": s.v(), "psi": s.psi() })
}

fn state_line(s: &FluidState) -> String {
    let psi = s.psi();
    format!(
        "v = {}, theta = {}, psi = ({}, {})",
        s.v(),
        s.theta(),
        psi[0],
        psi[1]
    )
}

fn class_lines(t: &mut String, label: &str, class: &Result<RestPointClass, Error>) {
    match class {
        Ok(c) => {
            let ev = match c.eigenvalues {
                crate::poly::RootPair::Real { lo, hi } => format!("{lo}, {hi}"),
                crate::poly::RootPair::Complex { re, im } => format!("{re} ± {im}i"),
            };
            let _ = writeln!(t, "{label:<12}{}", c.kind);
            let _ = writeln!(t, "{:<12}eigenvalues {ev}", "");
            let _ = writeln!(
                t,
                "{:<12}det B = {}, det(B^-1 A) = {}, trace = {}",
                "", c.det_b, c.det_binv_a, c.trace
            );
        }
        Err(e) => {
            let _ = writeln!(t, "{label:<12}unclassified: {e}");
        }
    }
}

struct Io<'a> {
    out: &'a mut Vec<u8>,
    #[allow(dead_code)]
    err: &'a mut Vec<u8>,
}

fn cmd_hugoniot(cfg: &Config, q: &AmplitudeArgs, f: &FormatOnly, io: &mut Io) -> CmdResult {
    let q_tilde = cfg.q_tilde(q);
    let pair = shock_states(q_tilde)?;
    let lax = lax_classify(&pair);
    match cfg.format(f.format) {
        Format::Csv => return Err(no_csv("hugoniot")),
        Format::Json => emit_json(
            io.out,
            &json!({
                "q_tilde": q_tilde,
                "q0": pair.q.q0,
                "q1": pair.q.q1,
                "upstream": state_json(&pair.minus),
                "downstream": state_json(&pair.plus),
                "lax": lax.as_ref().ok(),
            }),
        )?,
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "q_tilde     {q_tilde}");
            let _ = writeln!(t, "flux        q0 = {}, q1 = {}", pair.q.q0, pair.q.q1);
            let _ = writeln!(t, "upstream    {}", state_line(&pair.minus));
            let _ = writeln!(t, "downstream  {}", state_line(&pair.plus));
            if let Ok(l) = &lax {
                let _ = writeln!(
                    t,
                    "lax         upstream speeds ({}, {}), downstream speeds ({}, {}), 1-shock: {}",
                    l.upstream_speeds[0],
                    l.upstream_speeds[1],
                    l.downstream_speeds[0],
                    l.downstream_speeds[1],
                    if l.is_1_shock { "yes" } else { "no" }
                );
            }
            emit(io.out, &t)?;
        }
    }
    lax.map(|_| ()).map_err(Failure::from)
}

fn cmd_solve_q(
    cfg: &Config,
    q0: Option<f64>,
    q1: Option<f64>,
    f: &FormatOnly,
    io: &mut Io,
) -> CmdResult {
    let q0 = q0
        .or(cfg.q0)
        .ok_or_else(|| Failure::invalid("solve-q needs --q0 (or q0 in the config)"))?;
    let q1 = pick(q1, cfg.q1, 1.0);
    let states = solve_t_eq_q(q0, q1)?;
    match cfg.format(f.format) {
        Format::Csv => Err(no_csv("solve-q")),
        Format::Json => emit_json(
            io.out,
            &json!({
                "q0": q0,
                "q1": q1,
                "solutions": states.iter().map(state_json).collect::<Vec<_>>(),
            }),
        ),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "q0 = {q0}, q1 = {q1}: {} solution(s)", states.len());
            for (i, s) in states.iter().enumerate() {
                let _ = writeln!(t, "[{i}] {}", state_line(s));
            }
            emit(io.out, &t)
        }
    }
}

fn cmd_causality(
    cfg: &Config,
    params: &ParamArgs,
    adjudicate: bool,
    tol: Option<f64>,
    f: &FormatOnly,
    io: &mut Io,
) -> CmdResult {
    let p = cfg.params(params)?;
    let tol = pick(tol, cfg.tol, LUMINAL_TOL);
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Failure::invalid(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let adjudicate = adjudicate || cfg.adjudicate.unwrap_or(false);
    let r = classify_causality(&p, tol);
    let sigma = r.sigma_squared.real_parts();
    match cfg.format(f.format) {
        Format::Csv => Err(no_csv("causality")),
        Format::Json => {
            let mut v = json!({
                "eta": p.eta(), "mu": p.mu(), "nu": p.nu(),
                "sigma_squared": r.sigma_squared,
                "classification": r.classification,
                "pi_at_one": r.pi_at_one,
                "discriminant": r.discriminant,
                "nu_star": p.nu_star(),
            });
            if adjudicate {
                v["inequality_holds"] = json!(r.inequality_holds);
                v["disagreement"] = json!(r.inequality_disagrees());
            }
            emit_json(io.out, &v)
        }
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "eta = {}, mu = {}, nu = {}", p.eta(), p.mu(), p.nu());
            let _ = writeln!(t, "sigma^2         {}, {}", sigma[0], sigma[1]);
            let _ = writeln!(t, "classification  {}", r.classification);
            let _ = writeln!(t, "pi(1)           {}", r.pi_at_one);
            let _ = writeln!(t, "discriminant    {}", r.discriminant);
            match p.nu_star() {
                Some(ns) => {
                    let _ = writeln!(t, "nu_star         {ns}");
                }
                None => {
                    let _ = writeln!(t, "nu_star         undefined (3 mu <= eta)");
                }
            }
            if adjudicate {
                let _ = writeln!(
                    t,
                    "roots           {}",
                    if r.classification.is_causal() {
                        "causal"
                    } else {
                        "acausal"
                    }
                );
                let _ = writeln!(
                    t,
                    "inequality      mu >= (4/3) eta and nu <= nu_star: {}",
                    if r.inequality_holds { "holds" } else { "fails" }
                );
                let _ = writeln!(
                    t,
                    "adjudication    {}",
                    if r.inequality_disagrees() {
                        "DISAGREE"
                    } else {
                        "agree"
                    }
                );
            }
            emit(io.out, &t)
        }
    }
}

fn cmd_classify(
    cfg: &Config,
    params: &ParamArgs,
    q: &AmplitudeArgs,
    f: &FormatOnly,
    io: &mut Io,
) -> CmdResult {
    let p = cfg.params(params)?;
    let pair = shock_states(cfg.q_tilde(q))?;
    let up = crate::dynamics::classify_rest_point(&pair.minus, &p);
    let down = crate::dynamics::classify_rest_point(&pair.plus, &p);
    let speeds = singular_speeds(&p);
    match cfg.format(f.format) {
        Format::Csv => return Err(no_csv("classify")),
        Format::Json => emit_json(
            io.out,
            &json!({
                "q_tilde": cfg.q_tilde(q),
                "upstream": { "state": state_json(&pair.minus), "class": up.as_ref().ok(),
                              "det_b": b_total(&pair.minus, &p).det() },
                "downstream": { "state": state_json(&pair.plus), "class": down.as_ref().ok(),
                                "det_b": b_total(&pair.plus, &p).det() },
                "singular_speeds": speeds,
            }),
        )?,
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "q_tilde     {}", cfg.q_tilde(q));
            class_lines(&mut t, "upstream", &up);
            class_lines(&mut t, "downstream", &down);
            let list: Vec<String> = speeds.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                t,
                "singular    v = {}",
                if list.is_empty() {
                    "none".into()
                } else {
                    list.join(", ")
                }
            );
            emit(io.out, &t)?;
        }
    }
    up.and(down).map(|_| ()).map_err(Failure::from)
}

fn cmd_profile(
    cfg: &Config,
    params: &ParamArgs,
    q: &AmplitudeArgs,
    controls: &ControlArgs,
    out: &Option<PathBuf>,
    format: Option<Format>,
    io: &mut Io,
) -> CmdResult {
    let p = cfg.params(params)?;
    let c = cfg.controls(controls)?;
    let q_tilde = cfg.q_tilde(q);
    check_amplitude(q_tilde)?;
    let verdict = find_profile(q_tilde, &p, &c)?;
    match cfg.format(format) {
        Format::Csv => return Err(no_csv("profile")),
        Format::Json => emit_json(io.out, &verdict)?,
        Format::Table => {
            let d = &verdict.diagnostics;
            let mut t = String::new();
            let _ = writeln!(t, "verdict     {}", verdict.kind());
            let _ = writeln!(t, "q_tilde     {q_tilde}");
            let _ = writeln!(t, "upstream    {}", state_line(&d.minus));
            let _ = writeln!(t, "downstream  {}", state_line(&d.plus));
            if let Some(cl) = &d.class_minus {
                let _ = writeln!(t, "class       upstream {}", cl.kind);
            }
            if let Some(cl) = &d.class_plus {
                let _ = writeln!(t, "            downstream {}", cl.kind);
            }
            for (i, b) in d.branches.iter().enumerate() {
                let _ = writeln!(
                    t,
                    "branch {i}    {} after {} samples, arc length {}",
                    b.termination,
                    b.samples.len(),
                    b.arc_length
                );
            }
            if let Some(o) = verdict.orbit() {
                let _ = writeln!(t, "endpoint    {}", state_line(o.end()));
            }
            emit(io.out, &t)?;
        }
    }
    if let (Some(path), Some(orbit)) = (cfg.out(out), verdict.orbit()) {
        let mut csv = String::from("t,psi0,psi1,v,theta\n");
        for s in &orbit.samples {
            let psi = s.state.psi();
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                s.t,
                psi[0],
                psi[1],
                s.state.v(),
                s.state.theta()
            );
        }
        write_file(&path, &csv)?;
    }
    match &verdict.outcome {
        Outcome::Inconclusive { reason } => {
            Err(Failure::numerical(format!("inconclusive: {reason}")))
        }
        _ => Ok(()),
    }
}

fn cmd_sweep(
    cfg: &Config,
    params: &ParamArgs,
    q_grid: &Option<String>,
    controls: &ControlArgs,
    f: &FormatArgs,
    io: &mut Io,
) -> CmdResult {
    let p = cfg.params(params)?;
    let c = cfg.controls(controls)?;
    let spec = q_grid
        .clone()
        .or_else(|| cfg.q_grid.clone())
        .unwrap_or(DEFAULT_Q_GRID.into());
    let grid = parse_grid(&spec).map_err(Failure::invalid)?;
    for &q in &grid {
        check_amplitude(q)?;
    }
    let rows = sweep_q(&p, &grid, &c);
    let csv = sweep_to_csv(&rows);
    let out = cfg.out(&f.out);
    if let Some(path) = &out {
        write_file(path, &csv)?;
    }
    match cfg.format(f.format) {
        Format::Csv if out.is_some() => {}
        Format::Csv => emit(io.out, &csv)?,
        Format::Json => emit_json(io.out, &rows)?,
        Format::Table => {
            let mut t = format!(
                "{:<10} {:>10} {:>10} {:>14} {:>16} {:>16} {}\n",
                "q_tilde",
                "v_minus",
                "v_plus",
                "detB_minus",
                "class_minus",
                "class_plus",
                "verdict"
            );
            let name =
                |k: Option<crate::dynamics::RestPointKind>| k.map_or("singular", |k| k.as_str());
            for r in &rows {
                let _ = writeln!(
                    t,
                    "{:<10.6} {:>10.6} {:>10.6} {:>14.6} {:>16} {:>16} {}",
                    r.q_tilde,
                    r.v_minus,
                    r.v_plus,
                    r.det_b_minus,
                    name(r.class_minus),
                    name(r.class_plus),
                    r.verdict
                );
            }
            emit(io.out, &t)?;
        }
    }
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| r.verdict == crate::dynamics::VerdictKind::Inconclusive)
        .map(|r| r.q_tilde.to_string())
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::numerical(format!(
            "inconclusive verdict at q_tilde = {}",
            bad.join(", ")
        )))
    }
}

fn cmd_critical_q(
    cfg: &Config,
    params: &ParamArgs,
    tol: Option<f64>,
    f: &FormatOnly,
    io: &mut Io,
) -> CmdResult {
    let p = cfg.params(params)?;
    let tol = pick(tol, cfg.tol, 1e-6);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let q = critical_q(&p, tol);
    match cfg.format(f.format) {
        Format::Csv => Err(no_csv("critical-q")),
        Format::Json => emit_json(io.out, &json!({ "critical_q": q, "tol": tol })),
        Format::Table => emit(
            io.out,
            &match q {
                Some(q) => format!("critical q_tilde  {q}\n"),
                None => {
                    "critical q_tilde  none (det B keeps its sign at the upstream state)\n".into()
                }
            },
        ),
    }
}

fn cmd_region(
    cfg: &Config,
    eta: Option<f64>,
    mu_grid: &Option<String>,
    nu_grid: &Option<String>,
    f: &FormatArgs,
    io: &mut Io,
) -> CmdResult {
    let eta = pick(eta, cfg.eta, 1.0);
    let grid = |flag: &Option<String>, conf: &Option<String>, default: &str| {
        parse_grid(
            &flag
                .clone()
                .or_else(|| conf.clone())
                .unwrap_or(default.into()),
        )
        .map_err(Failure::invalid)
    };
    let mus = grid(mu_grid, &cfg.mu_grid, DEFAULT_MU_GRID)?;
    let nus = grid(nu_grid, &cfg.nu_grid, DEFAULT_NU_GRID)?;
    let cells = region_map(eta, &mus, &nus)?;
    let csv = region_to_csv(&cells);
    let out = cfg.out(&f.out);
    if let Some(path) = &out {
        write_file(path, &csv)?;
    }
    match cfg.format(f.format) {
        Format::Csv if out.is_some() => Ok(()),
        Format::Csv => emit(io.out, &csv),
        Format::Json => emit_json(io.out, &cells),
        Format::Table => {
            let mut t = format!(
                "{:>10} {:>10} {:<22} {:<9} {:>10} {:>12}\n",
                "mu", "nu", "causality", "critical", "nu_star", "sigma2_max"
            );
            for c in &cells {
                let ns = c.nu_star.map_or("-".to_string(), |v| format!("{v:.6}"));
                let _ = writeln!(
                    t,
                    "{:>10} {:>10} {:<22} {:<9} {:>10} {:>12.6}",
                    c.mu,
                    c.nu,
                    c.causality.as_str(),
                    if c.has_critical_q { "yes" } else { "no" },
                    ns,
                    c.sigma2_max
                );
            }
            emit(io.out, &t)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_portrait(
    cfg: &Config,
    params: &ParamArgs,
    q: &AmplitudeArgs,
    controls: &ControlArgs,
    coords: Option<CoordsArg>,
    nx: Option<usize>,
    ny: Option<usize>,
    window: &Option<String>,
    seeds: &[String],
    no_shooting: bool,
    no_singular: bool,
    svg: &Option<PathBuf>,
    f: &FormatArgs,
    io: &mut Io,
) -> CmdResult {
    let p = cfg.params(params)?;
    let c = cfg.controls(controls)?;
    let q_tilde = cfg.q_tilde(q);
    check_amplitude(q_tilde)?;
    let coords: PlotCoords = pick(coords, cfg.coords, CoordsArg::Psi).into();
    let mut spec = PortraitSpec::auto(q_tilde, coords)?;
    spec.nx = pick(nx, cfg.nx, spec.nx);
    spec.ny = pick(ny, cfg.ny, spec.ny);
    if let Some(w) = window.clone().or_else(|| cfg.window.clone()) {
        spec.window = parse_window(&w)?;
    }
    if no_shooting {
        spec.seeds.clear();
    }
    let seed_specs = if seeds.is_empty() {
        cfg.seed.clone().unwrap_or_default()
    } else {
        seeds.to_vec()
    };
    for s in &seed_specs {
        spec.seeds.push(parse_seed(s)?);
    }
    spec.include_singular = !no_singular;
    let bundle = portrait_data(&p, q_tilde, &spec, &c)?;

    let csv = bundle.to_csv();
    let out = cfg.out(&f.out);
    if let Some(path) = &out {
        write_file(path, &csv)?;
    }
    if let Some(path) = svg.clone().or_else(|| cfg.svg.clone()) {
        write_file(&path, &bundle.to_svg())?;
    }
    match cfg.format(f.format) {
        Format::Csv if out.is_some() => Ok(()),
        Format::Csv => emit(io.out, &csv),
        Format::Json => emit_json(io.out, &bundle),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "q_tilde          {q_tilde}");
            let _ = writeln!(t, "coordinates      {}", coords.as_str());
            let w = spec.window;
            let _ = writeln!(
                t,
                "window           [{}, {}] x [{}, {}]",
                w.x_min, w.x_max, w.y_min, w.y_max
            );
            let _ = writeln!(t, "field samples    {}", bundle.field.len());
            for r in &bundle.rest_points {
                let kind = r.kind.map_or("unclassified", |k| k.as_str());
                let _ = writeln!(t, "rest point       ({}, {}) {kind}", r.at[0], r.at[1]);
            }
            for l in &bundle.singular_lines {
                let _ = writeln!(t, "singular line    v = {}", l.v);
            }
            for (i, o) in bundle.orbits.iter().enumerate() {
                let _ = writeln!(
                    t,
                    "orbit {i:<10} {} samples, {}{}",
                    o.points.len(),
                    o.termination,
                    if o.connecting { ", connecting" } else { "" }
                );
            }
            let _ = writeln!(
                t,
                "connecting orbit {}",
                if bundle.has_connecting_orbit() {
                    "yes"
                } else {
                    "no"
                }
            );
            emit(io.out, &t)
        }
    }
}

fn dispatch(cli: Cli, io: &mut Io) -> CmdResult {
    let cfg = Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Hugoniot { q, out } => cmd_hugoniot(&cfg, q, out, io),
        Command::SolveQ { q0, q1, out } => cmd_solve_q(&cfg, *q0, *q1, out, io),
        Command::Causality {
            params,
            adjudicate,
            tol,
            out,
        } => cmd_causality(&cfg, params, *adjudicate, *tol, out, io),
        Command::Classify { params, q, out } => cmd_classify(&cfg, params, q, out, io),
        Command::Profile {
            params,
            q,
            controls,
            out,
            format,
        } => cmd_profile(&cfg, params, q, controls, out, format.format, io),
        Command::Sweep {
            params,
            q_grid,
            controls,
            out,
        } => cmd_sweep(&cfg, params, q_grid, controls, out, io),
        Command::CriticalQ { params, tol, out } => cmd_critical_q(&cfg, params, *tol, out, io),
        Command::Region {
            eta,
            mu_grid,
            nu_grid,
            out,
        } => cmd_region(&cfg, *eta, mu_grid, nu_grid, out, io),
        Command::Portrait {
            params,
            q,
            controls,
            coords,
            nx,
            ny,
            window,
            seeds,
            no_shooting,
            no_singular,
            svg,
            out,
        } => cmd_portrait(
            &cfg,
            params,
            q,
            controls,
            *coords,
            *nx,
            *ny,
            window,
            seeds,
            *no_shooting,
            *no_singular,
            svg,
            out,
            io,
        ),
    }
}

fn parse_threads(value: Option<&str>) -> Result<Option<usize>, Failure> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::invalid(format!(
                "{THREADS_VAR} must be a positive integer, got '{s}'"
            ))),
        },
    }
}

/// Runs the command line with an explicit thread cap (the value of
/// `SHOCKPROF_THREADS`, if any) and returns the exit code.
pub fn run_with<I, T>(
    args: I,
    threads: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INVALID
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INVALID
                }
            };
        }
    };
    // commands write to buffers so they can run inside a capped pool
    let run_buffered = move || {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = dispatch(
            cli,
            &mut Io {
                out: &mut o,
                err: &mut e,
            },
        );
        (r, o, e)
    };
    let (result, o, e) = match parse_threads(threads) {
        Err(f) => (Err(f), Vec::new(), Vec::new()),
        Ok(None) => run_buffered(),
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run_buffered),
            Err(e) => (
                Err(Failure::numerical(format!("thread pool: {e}"))),
                Vec::new(),
                Vec::new(),
            ),
        },
    };
    let _ = out.write_all(&o);
    let _ = out.flush();
    let _ = err.write_all(&e);
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "shockprof: {}", f.message);
            f.code
        }
    }
}

/// Runs the command line, reading `SHOCKPROF_THREADS` from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let threads = std::env::var(THREADS_VAR).ok();
    run_with(args, threads.as_deref(), out, err)
}
