//! Quadratic roots shared by the Hugoniot, determinant and dispersion polynomials.

use serde::Serialize;

/// The two roots of a real quadratic (or the eigenvalues of a real 2×2 matrix).
///
/// Real roots are stored in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RootPair {
    Real { lo: f64, hi: f64 },
    Complex { re: f64, im: f64 },
}

impl RootPair {
    pub fn real(a: f64, b: f64) -> Self {
        if a <= b {
            RootPair::Real { lo: a, hi: b }
        } else {
            RootPair::Real { lo: b, hi: a }
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, RootPair::Real { .. })
    }

    /// Real parts, ascending for real roots.
    pub fn real_parts(&self) -> [f64; 2] {
        match *self {
            RootPair::Real { lo, hi } => [lo, hi],
            RootPair::Complex { re, .. } => [re, re],
        }
    }

    pub fn max_real(&self) -> f64 {
        self.real_parts()[1]
    }

    pub fn min_real(&self) -> f64 {
        self.real_parts()[0]
    }
}

/// Roots of `a x² + b x + c` with `a != 0`, using the cancellation-free form.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> RootPair {
    debug_assert!(a != 0.0);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return RootPair::Complex {
            re: -b / (2.0 * a),
            im: (-disc).sqrt() / (2.0 * a.abs()),
        };
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        // b = 0 and c = 0
        return RootPair::real(0.0, 0.0);
    }
    RootPair::real(q / a, c / q)
}

/// Nonnegative real roots of `a x² + b x + c`, ascending, deduplicated.
///
/// `tol` is the relative size below which a coefficient counts as zero,
/// measured against `scale` (typically the sum of the absolute values of the
/// terms that make up the coefficients).
pub fn nonnegative_roots(a: f64, b: f64, c: f64, scale: f64, tol: f64) -> Vec<f64> {
    let zero = |x: f64| x.abs() <= tol * scale;
    let a = if zero(a) { 0.0 } else { a };
    let c = if zero(c) { 0.0 } else { c };
    let mut roots = Vec::with_capacity(2);
    if a == 0.0 {
        if b != 0.0 {
            roots.push(-c / b);
        } else if c == 0.0 {
            roots.push(0.0);
        }
    } else if let RootPair::Real { lo, hi } = quadratic_roots(a, b, c) {
        roots.push(lo);
        roots.push(hi);
    }
    let mut out: Vec<f64> = roots.into_iter().filter(|x| *x >= 0.0).collect();
    out.dedup();
    out
}
