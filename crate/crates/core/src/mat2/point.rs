use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A constant complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PointMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl PointMatrix {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        PointMatrix { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(p: Complex64, q: Complex64) -> Self {
        Self::new(p, ZERO, ZERO, q)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    /// `None` when the determinant is exactly zero.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO {
            return None;
        }
        Some(self.adjugate().scale(det.inv()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        (self.a.norm() + self.c.norm()).max(self.b.norm() + self.d.norm())
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|z| z.is_finite())
    }

    /// Matrix exponential by scaling and squaring with the [13/13] Padé
    /// approximant.
    pub fn exp(&self) -> Self {
        // Padé [13/13] numerator coefficients and the matching θ₁₃.
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        const THETA_13: f64 = 5.371920351148152;

        let norm = self.norm_one();
        let squarings = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil().max(0.0) as i32
        } else {
            0
        };
        let a = self.scale(Complex64::new(0.5f64.powi(squarings), 0.0));
        let id = Self::identity();
        let a2 = a * a;
        let a4 = a2 * a2;
        let a6 = a4 * a2;
        let r = |x: f64| Complex64::new(x, 0.0);

        let inner_u = a6.scale(r(B[13])) + a4.scale(r(B[11])) + a2.scale(r(B[9]));
        let u = a
            * (a6 * inner_u
                + a6.scale(r(B[7]))
                + a4.scale(r(B[5]))
                + a2.scale(r(B[3]))
                + id.scale(r(B[1])));
        let inner_v = a6.scale(r(B[12])) + a4.scale(r(B[10])) + a2.scale(r(B[8]));
        let v = a6 * inner_v
            + a6.scale(r(B[6]))
            + a4.scale(r(B[4]))
            + a2.scale(r(B[2]))
            + id.scale(r(B[0]));

        let denom = (v - u)
            .inverse()
            .expect("Padé denominator is nonsingular after scaling");
        let mut result = denom * (v + u);
        for _ in 0..squarings {
            result = result * result;
        }
        result
    }
}

impl Add for PointMatrix {
    type Output = PointMatrix;
    fn add(self, o: PointMatrix) -> PointMatrix {
        PointMatrix::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for PointMatrix {
    type Output = PointMatrix;
    fn sub(self, o: PointMatrix) -> PointMatrix {
        PointMatrix::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for PointMatrix {
    type Output = PointMatrix;
    fn neg(self) -> PointMatrix {
        PointMatrix::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for PointMatrix {
    type Output = PointMatrix;
    fn mul(self, o: PointMatrix) -> PointMatrix {
        PointMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// Pointwise matrix exponential oracle.
pub fn exp_pointwise(p: &PointMatrix) -> PointMatrix {
    p.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(x: &PointMatrix, y: &PointMatrix, tol: f64) -> bool {
        (*x - *y).frobenius_norm() <= tol
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        assert!(close(
            &PointMatrix::zero().exp(),
            &PointMatrix::identity(),
            1e-15
        ));
        let e = PointMatrix::real(1.0, 0.0, 0.0, -1.0).exp();
        let expected = PointMatrix::real(std::f64::consts::E, 0.0, 0.0, (-1.0f64).exp());
        assert!(close(&e, &expected, 1e-15));
    }

    #[test]
    fn exp_matches_cosh_sinh_closed_form() {
        // For traceless X with s = -det X: exp X = cosh(√s) I + sinh(√s)/√s X.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let mut z = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let (u, v, w) = (z(), z(), z());
            let x = PointMatrix::new(u, v, w, -u);
            let root = (-x.det()).sqrt();
            let (ch, sh) = if root.norm() < 1e-8 {
                (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            } else {
                (root.cosh(), root.sinh() / root)
            };
            let closed = PointMatrix::identity().scale(ch) + x.scale(sh);
            let scale = closed.frobenius_norm().max(1.0);
            assert!(close(&x.exp(), &closed, 1e-12 * scale));
        }
    }

    #[test]
    fn exp_handles_large_norm_by_squaring() {
        let x = PointMatrix::real(0.0, 30.0, -30.0, 0.0);
        let e = x.exp();
        let expected = PointMatrix::real(30f64.cos(), 30f64.sin(), -30f64.sin(), 30f64.cos());
        assert!(close(&e, &expected, 1e-12));
    }

    #[test]
    fn inverse_of_singular_is_none() {
        assert!(PointMatrix::real(1.0, 2.0, 2.0, 4.0).inverse().is_none());
        let m = PointMatrix::real(2.0, 1.0, 1.0, 1.0);
        assert!(close(
            &(m * m.inverse().unwrap()),
            &PointMatrix::identity(),
            1e-15
        ));
    }
}
