//! Dense real 2×2 matrices.
//!
//! Every matrix in the reduced profile problem (the flux Jacobian `A` and the
//! dissipation blocks `B`) is 2×2, so everything here is closed form.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::poly::RootPair;

pub type Vec2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Mat2 {
    pub a00: f64,
    pub a01: f64,
    pub a10: f64,
    pub a11: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    /// `diag(-1, 1)`: converts between the contravariant and covariant pair.
    pub const INDEX_FLIP: Mat2 = Mat2::new(-1.0, 0.0, 0.0, 1.0);

    pub const fn new(a00: f64, a01: f64, a10: f64, a11: f64) -> Self {
        Mat2 { a00, a01, a10, a11 }
    }

    pub const fn symmetric(a00: f64, a01: f64, a11: f64) -> Self {
        Mat2::new(a00, a01, a01, a11)
    }

    pub fn det(&self) -> f64 {
        self.a00 * self.a11 - self.a01 * self.a10
    }

    pub fn trace(&self) -> f64 {
        self.a00 + self.a11
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a00, self.a10, self.a01, self.a11)
    }

    /// Classical adjoint: `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.a11, -self.a01, -self.a10, self.a00)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adjugate() * (1.0 / d))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a00 * self.a00 + self.a01 * self.a01 + self.a10 * self.a10 + self.a11 * self.a11)
            .sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        self.a01 == self.a10
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        [
            self.a00 * x[0] + self.a01 * x[1],
            self.a10 * x[0] + self.a11 * x[1],
        ]
    }

    /// `D M D` with `D = diag(-1, 1)`.
    pub fn index_flipped(&self) -> Mat2 {
        Mat2::new(self.a00, -self.a01, -self.a10, self.a11)
    }

    pub fn eigenvalues(&self) -> RootPair {
        let half_tr = 0.5 * self.trace();
        let d = self.det();
        // (a00 - a11)²/4 + a01 a10 avoids cancellation for nearly equal roots
        let disc = 0.25 * (self.a00 - self.a11).powi(2) + self.a01 * self.a10;
        if disc < 0.0 {
            return RootPair::Complex {
                re: half_tr,
                im: (-disc).sqrt(),
            };
        }
        let sq = disc.sqrt();
        let big = if half_tr >= 0.0 {
            half_tr + sq
        } else {
            half_tr - sq
        };
        if big == 0.0 {
            return RootPair::real(0.0, 0.0);
        }
        RootPair::real(big, d / big)
    }

    /// Unit eigenvector for a real eigenvalue `lambda`.
    pub fn eigenvector(&self, lambda: f64) -> Vec2 {
        let r0 = [self.a00 - lambda, self.a01];
        let r1 = [self.a10, self.a11 - lambda];
        let n0 = r0[0].hypot(r0[1]);
        let n1 = r1[0].hypot(r1[1]);
        let v = if n0 == 0.0 && n1 == 0.0 {
            [1.0, 0.0]
        } else if n0 >= n1 {
            [-r0[1], r0[0]]
        } else {
            [r1[1], -r1[0]]
        };
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a00 + o.a00,
            self.a01 + o.a01,
            self.a10 + o.a10,
            self.a11 + o.a11,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a00 - o.a00,
            self.a01 - o.a01,
            self.a10 - o.a10,
            self.a11 - o.a11,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self * -1.0
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(self.a00 * s, self.a01 * s, self.a10 * s, self.a11 * s)
    }
}

impl Mul<Mat2> for f64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m * self
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a00 * o.a00 + self.a01 * o.a10,
            self.a00 * o.a01 + self.a01 * o.a11,
            self.a10 * o.a00 + self.a11 * o.a10,
            self.a10 * o.a01 + self.a11 * o.a11,
        )
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    fn mul(self, x: Vec2) -> Vec2 {
        self.apply(x)
    }
}

pub(crate) fn norm(x: Vec2) -> f64 {
    x[0].hypot(x[1])
}

pub(crate) fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry() -> impl Strategy<Value = f64> {
        -10.0..10.0f64
    }

    fn rel(a: f64, b: f64, scale: f64) -> f64 {
        (a - b).abs() / scale.max(1e-300)
    }

    proptest! {
        #[test]
        fn adjugate_identity(a in entry(), b in entry(), c in entry(), d in entry()) {
            let m = Mat2::new(a, b, c, d);
            let lhs = m * m.adjugate();
            let scale = m.norm().powi(2).max(1.0);
            prop_assert!(rel(lhs.a00, m.det(), scale) < 1e-12);
            prop_assert!(rel(lhs.a11, m.det(), scale) < 1e-12);
            prop_assert!(lhs.a01.abs() / scale < 1e-12);
            prop_assert!(lhs.a10.abs() / scale < 1e-12);
        }

        #[test]
        fn eigenvalues_solve_characteristic_polynomial(
            a in entry(), b in entry(), c in entry(), d in entry()
        ) {
            let m = Mat2::new(a, b, c, d);
            let scale = m.norm().powi(2).max(1.0);
            match m.eigenvalues() {
                RootPair::Real { lo, hi } => {
                    for l in [lo, hi] {
                        let p = l * l - m.trace() * l + m.det();
                        prop_assert!(p.abs() / scale < 1e-10, "residual {p}");
                    }
                }
                RootPair::Complex { re, im } => {
                    // (re + i im)² − tr (re + i im) + det = 0
                    let p_re = re * re - im * im - m.trace() * re + m.det();
                    let p_im = 2.0 * re * im - m.trace() * im;
                    prop_assert!(p_re.abs() / scale < 1e-10);
                    prop_assert!(p_im.abs() / scale < 1e-10);
                }
            }
        }
    }

    #[test]
    fn eigenvector_of_symmetric() {
        let m = Mat2::symmetric(2.0, 1.0, 2.0);
        let RootPair::Real { lo, hi } = m.eigenvalues() else {
            panic!("symmetric matrix must have real spectrum")
        };
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-15);
        let e = m.eigenvector(hi);
        let me = m * e;
        assert!((me[0] - 3.0 * e[0]).abs() < 1e-14 && (me[1] - 3.0 * e[1]).abs() < 1e-14);
    }

    #[test]
    fn inverse_of_singular_is_none() {
        assert!(Mat2::new(1.0, 2.0, 2.0, 4.0).inverse().is_none());
        let inv = Mat2::new(4.0, 7.0, 2.0, 6.0).inverse().unwrap();
        let id = inv * Mat2::new(4.0, 7.0, 2.0, 6.0);
        assert!((id - Mat2::IDENTITY).norm() < 1e-15);
    }
}
