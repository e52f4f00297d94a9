//! Parameter sweeps over the amplitude, location of the saddle/attractor
//! transition, and causality region maps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causality::{classify_causality, Causality, LUMINAL_TOL};
use crate::dissipation::{b_total, det_b_closed_form, DissipationParams};
use crate::dynamics::{
    classify_rest_point, find_profile, IntegratorControls, RestPointKind, VerdictKind,
};
use crate::error::{Error, Result};
use crate::hugoniot::{shock_states, velocity_squares, Q_TILDE_MAX, Q_TILDE_MIN};

/// One amplitude of a sweep. Fields are `NaN` and classes empty when the
/// shock states themselves could not be formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q_tilde: f64,
    pub v_minus: f64,
    pub v_plus: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
    #[serde(rename = "detB_minus")]
    pub det_b_minus: f64,
    #[serde(rename = "detB_plus")]
    pub det_b_plus: f64,
    /// Empty when the linearization is singular or degenerate.
    pub class_minus: Option<RestPointKind>,
    pub class_plus: Option<RestPointKind>,
    pub verdict: VerdictKind,
}

pub const SWEEP_HEADER: &str =
    "q_tilde,v_minus,v_plus,theta_minus,theta_plus,detB_minus,detB_plus,class_minus,class_plus,verdict";

pub fn sweep_row(q_tilde: f64, p: &DissipationParams, c: &IntegratorControls) -> SweepRow {
    let Ok(pair) = shock_states(q_tilde) else {
        return SweepRow {
            q_tilde,
            v_minus: f64::NAN,
            v_plus: f64::NAN,
            theta_minus: f64::NAN,
            theta_plus: f64::NAN,
            det_b_minus: f64::NAN,
            det_b_plus: f64::NAN,
            class_minus: None,
            class_plus: None,
            verdict: VerdictKind::Inconclusive,
        };
    };
    let verdict = find_profile(q_tilde, p, c)
        .map(|v| v.kind())
        .unwrap_or(VerdictKind::Inconclusive);
    SweepRow {
        q_tilde,
        v_minus: pair.minus.v(),
        v_plus: pair.plus.v(),
        theta_minus: pair.minus.theta(),
        theta_plus: pair.plus.theta(),
        det_b_minus: b_total(&pair.minus, p).det(),
        det_b_plus: b_total(&pair.plus, p).det(),
        class_minus: classify_rest_point(&pair.minus, p).ok().map(|c| c.kind),
        class_plus: classify_rest_point(&pair.plus, p).ok().map(|c| c.kind),
        verdict,
    }
}

/// Rows in input order, computed in parallel on the current rayon pool.
pub fn sweep_q(p: &DissipationParams, q_grid: &[f64], c: &IntegratorControls) -> Vec<SweepRow> {
    q_grid.par_iter().map(|&q| sweep_row(q, p, c)).collect()
}

pub fn sweep_q_serial(
    p: &DissipationParams,
    q_grid: &[f64],
    c: &IntegratorControls,
) -> Vec<SweepRow> {
    q_grid.iter().map(|&q| sweep_row(q, p, c)).collect()
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

/// Serializes records with a header line (LF endings, shortest round-trip floats).
pub(crate) fn to_csv<T: Serialize>(rows: &[T], header: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    let body = w.into_inner().map_err(csv_error)?;
    let body = String::from_utf8(body).map_err(csv_error)?;
    Ok(format!("{header}\n{body}"))
}

pub(crate) fn from_csv<T: for<'de> Deserialize<'de>>(text: &str, header: &str) -> Result<Vec<T>> {
    let first = text.lines().next().unwrap_or_default();
    if first != header {
        return Err(Error::InvalidInput(format!(
            "unexpected csv header '{first}', expected '{header}'"
        )));
    }
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_error))
        .collect()
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    to_csv(rows, SWEEP_HEADER).expect("sweep rows always serialize")
}

pub fn sweep_from_csv(text: &str) -> Result<Vec<SweepRow>> {
    from_csv(text, SWEEP_HEADER)
}

/// `n` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Distance kept from the ends of `(3/4, 1)` by the transition search.
pub const CRITICAL_MARGIN: f64 = 1e-9;
const CRITICAL_SCAN: usize = 4001;

/// `det B(ψ_−(q̃))`, via the closed-form determinant.
pub fn det_b_upstream(q_tilde: f64, p: &DissipationParams) -> Result<f64> {
    let (x_minus, _) = velocity_squares(q_tilde)?;
    Ok(det_b_closed_form(x_minus, p))
}

/// Amplitude at which `det B(ψ_−)` changes sign, i.e. where the upstream
/// state turns from saddle into attractor; `None` when it keeps one sign.
///
/// A scan clustered towards `q̃ = 1` (where `v_−` blows up) brackets the
/// first sign change, then bisection narrows it to `tol`.
pub fn critical_q(p: &DissipationParams, tol: f64) -> Option<f64> {
    let lo = Q_TILDE_MIN + CRITICAL_MARGIN;
    let hi = Q_TILDE_MAX - CRITICAL_MARGIN;
    let f = |q: f64| det_b_upstream(q, p).ok();
    let at = |i: usize| {
        // cosine spacing: dense at both ends
        let s = 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / (CRITICAL_SCAN - 1) as f64).cos());
        lo + (hi - lo) * s
    };
    let mut a = lo;
    let mut fa = f(a)?;
    for i in 1..CRITICAL_SCAN {
        let b = at(i);
        let fb = f(b)?;
        if fa == 0.0 {
            return Some(a);
        }
        if fa.signum() != fb.signum() {
            let (mut a, mut b) = (a, b);
            while b - a > tol.max(f64::EPSILON) {
                let m = 0.5 * (a + b);
                let fm = f(m)?;
                if fm.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
        a = b;
        fa = fb;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub mu: f64,
    pub nu: f64,
    pub causality: Causality,
    pub has_critical_q: bool,
    /// Absent when `3μ ≤ η`.
    pub nu_star: Option<f64>,
    pub sigma2_max: f64,
}

pub const REGION_HEADER: &str = "mu,nu,causality,has_critical_q,nu_star,sigma2_max";

pub fn region_cell(eta: f64, mu: f64, nu: f64) -> Result<RegionCell> {
    let p = DissipationParams::new(eta, mu, nu)?;
    let report = classify_causality(&p, LUMINAL_TOL);
    Ok(RegionCell {
        mu,
        nu,
        causality: report.classification,
        has_critical_q: critical_q(&p, 1e-6).is_some(),
        nu_star: p.nu_star(),
        sigma2_max: report.sigma_squared.max_real(),
    })
}

/// Cells for every `(μ, ν)` pair, `μ` major, in input order.
pub fn region_map(eta: f64, mu_grid: &[f64], nu_grid: &[f64]) -> Result<Vec<RegionCell>> {
    let pairs: Vec<(f64, f64)> = mu_grid
        .iter()
        .flat_map(|&mu| nu_grid.iter().map(move |&nu| (mu, nu)))
        .collect();
    pairs
        .par_iter()
        .map(|&(mu, nu)| region_cell(eta, mu, nu))
        .collect()
}

pub fn region_to_csv(cells: &[RegionCell]) -> String {
    to_csv(cells, REGION_HEADER).expect("region cells always serialize")
}

pub fn region_from_csv(text: &str) -> Result<Vec<RegionCell>> {
    from_csv(text, REGION_HEADER)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eta: f64, mu: f64, nu: f64) -> DissipationParams {
        DissipationParams::new(eta, mu, nu).unwrap()
    }

    // larger root x of c₄x² + c₂x + c₀ mapped through v_−²(q̃) = x
    fn critical_oracle(p: &DissipationParams) -> f64 {
        let et = p.eta_tilde();
        let (mu, nu) = (p.mu(), p.nu());
        let c4 = -9.0 * et * mu - et * nu + 4.0 * mu * nu;
        let c2 = -9.0 * et * mu - 2.0 * et * nu - 4.0 * mu * nu;
        let c0 = nu * (mu - et);
        let x = (-c2 + (c2 * c2 - 4.0 * c4 * c0).sqrt()) / (2.0 * c4);
        (4.0 * x + 1.0).powi(2) / (16.0 * x * (1.0 + x))
    }

    #[test]
    fn sweep_examples() {
        let c = IntegratorControls::default();
        let rows = sweep_q(&DissipationParams::default(), &[0.76, 0.775, 0.85], &c);
        let v: Vec<_> = rows.iter().map(|r| r.verdict).collect();
        assert_eq!(
            v,
            [
                VerdictKind::Exists,
                VerdictKind::Exists,
                VerdictKind::NotExistsAttractor
            ]
        );
        let rows = sweep_q(&params(1.0, 7.0, 3.15), &[0.76, 0.9, 0.99], &c);
        assert!(rows
            .iter()
            .all(|r| r.class_minus == Some(RestPointKind::Saddle)));
        assert!(sweep_q(&DissipationParams::default(), &[], &c).is_empty());
    }

    #[test]
    fn rows_are_consistent() {
        let p = DissipationParams::default();
        let r = sweep_row(0.8, &p, &IntegratorControls::default());
        let pair = shock_states(0.8).unwrap();
        assert_eq!(r.v_minus, pair.minus.v());
        assert!(
            (r.det_b_minus - det_b_closed_form(r.v_minus.powi(2), &p)).abs()
                < 1e-9 * r.det_b_minus.abs()
        );
        assert!(
            (r.det_b_plus - det_b_closed_form(r.v_plus.powi(2), &p)).abs()
                < 1e-9 * r.det_b_plus.abs()
        );
    }

    #[test]
    fn invalid_amplitude_row() {
        let r = sweep_row(
            0.5,
            &DissipationParams::default(),
            &IntegratorControls::default(),
        );
        assert_eq!(r.verdict, VerdictKind::Inconclusive);
        assert!(r.v_minus.is_nan() && r.class_minus.is_none());
    }

    #[test]
    fn csv_round_trip() {
        let p = DissipationParams::default();
        let c = IntegratorControls::default();
        let rows = sweep_q(&p, &[0.5, 0.76, 0.85, 0.95], &c);
        let text = sweep_to_csv(&rows);
        assert!(text.starts_with(SWEEP_HEADER));
        assert!(!text.contains('\r'));
        let back = sweep_from_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(format!("{a:?}"), format!("{b:?}"));
        }
        assert!(sweep_from_csv("q,v\n").is_err());
    }

    #[test]
    fn parallel_matches_serial() {
        let p = DissipationParams::default();
        let c = IntegratorControls::default();
        let grid = linspace(0.76, 0.98, 12);
        assert_eq!(
            sweep_to_csv(&sweep_q(&p, &grid, &c)),
            sweep_to_csv(&sweep_q_serial(&p, &grid, &c))
        );
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 5), [0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(0.3, 0.7, 1), [0.3]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        assert_eq!(*linspace(0.751, 0.999, 50).last().unwrap(), 0.999);
    }

    #[test]
    fn critical_amplitude_examples() {
        let p = DissipationParams::default();
        let q = critical_q(&p, 1e-6).unwrap();
        assert!((q - 0.8081).abs() < 1e-3);
        assert!((q - critical_oracle(&p)).abs() < 2e-6);
        assert!(critical_q(&params(1.0, 7.0, 3.15), 1e-6).is_none());
        assert!(critical_q(&params(1.0, 1.34, 2.0), 1e-6).is_none());
    }

    #[test]
    fn critical_amplitude_separates_classes() {
        for p in [
            DissipationParams::default(),
            params(1.0, 2.0, 10.0),
            params(0.5, 3.0, 8.0),
        ] {
            let qc = critical_q(&p, 1e-8).unwrap();
            assert!((qc - critical_oracle(&p)).abs() < 1e-7, "{p:?}");
            for q in linspace(0.755, 0.995, 20) {
                if (q - qc).abs() < 1e-6 {
                    continue;
                }
                let kind = classify_rest_point(&shock_states(q).unwrap().minus, &p)
                    .unwrap()
                    .kind;
                if q < qc {
                    assert_eq!(kind, RestPointKind::Saddle, "{q}");
                } else {
                    assert!(kind.is_attractor(), "{q}: {kind}");
                }
            }
        }
    }

    #[test]
    fn region_examples() {
        let cells = region_map(1.0, &[7.0], &[2.0, 3.15, 20.0]).unwrap();
        let classes: Vec<_> = cells.iter().map(|c| c.causality).collect();
        assert_eq!(
            classes,
            [
                Causality::AcausalSuperluminal,
                Causality::SharplyCausal,
                Causality::StrictlyCausal
            ]
        );
        assert_eq!(
            cells.iter().map(|c| c.has_critical_q).collect::<Vec<_>>(),
            [false, false, true]
        );
        let row = region_map(1.0, &[1.0], &[0.5, 3.0, 30.0]).unwrap();
        assert!(row.iter().all(|c| c.causality == Causality::AcausalNonreal));
        assert_eq!(region_map(1.0, &[2.0], &[2.0]).unwrap().len(), 1);
        assert!(region_map(1.0, &[-1.0], &[2.0]).is_err());
    }

    #[test]
    fn region_csv_round_trip() {
        let cells = region_map(1.0, &[0.3, 7.0], &[1.0, 20.0]).unwrap();
        assert!(cells[0].nu_star.is_none());
        let text = region_to_csv(&cells);
        assert_eq!(region_from_csv(&text).unwrap(), cells);
    }
}
