use num_complex::Complex64;

use super::FactorError;
use crate::mat2::PointMatrix;

/// `|trace² − 4|` at or below this counts as a repeated eigenvalue.
const DISCRIMINANT_FLOOR: f64 = 1e-9;
/// Relative size below which the `(2,1)` entry is conjugated away.
const LOWER_ENTRY_FLOOR: f64 = 1e-6;
const SPLIT_TOL: f64 = 1e-10;

/// Conjugators tried in order when the `(2,1)` entry vanishes.
fn conjugators() -> [PointMatrix; 3] {
    [
        PointMatrix::real(1.0, 0.0, 1.0, 1.0),
        PointMatrix::real(1.0, 1.0, 0.0, 1.0),
        PointMatrix::real(0.0, -1.0, 1.0, 0.0),
    ]
}

/// A traceless solution `(u, v, w)` of `(a−d)u + bv + cw = 0`,
/// `u² + vw = −1` at one point, with its fiber coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracelessPoint {
    pub u: Complex64,
    pub v: Complex64,
    pub w: Complex64,
    /// `(d − a + √D) / 2c`.
    pub fplus: Complex64,
    /// `(d − a − √D) / 2c`.
    pub fminus: Complex64,
    /// Conjugation `Q` applied before solving (identity when `c ≠ 0`).
    pub conj: PointMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracelessSplit {
    pub b: PointMatrix,
    pub c: PointMatrix,
    pub point: TracelessPoint,
}

/// Solves the fiber equations for `A` with `c ≠ 0`, on the fiber point
/// `(ũ, ṽ) = (1, −1)` of `ũṽ = −1`.
fn solve_fiber(a: &PointMatrix) -> (Complex64, Complex64, Complex64, Complex64, Complex64) {
    let root = (a.trace() * a.trace() - 4.0).sqrt();
    let two_c = a.c * 2.0;
    let fplus = (a.d - a.a + root) / two_c;
    let fminus = (a.d - a.a - root) / two_c;
    // u + f₊v = ũ and u + f₋v = ṽ
    let (ut, vt) = (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0));
    let v = (ut - vt) / (fplus - fminus);
    let u = ut - fplus * v;
    let w = ((a.d - a.a) * u - a.b * v) / a.c;
    (u, v, w, fplus, fminus)
}

/// Writes `A ∈ SL₂(ℂ)` with distinct eigenvalues as `A = B·C` where both
/// `B` and `C` are traceless with determinant 1.
pub fn pointwise_traceless_split(a: &PointMatrix) -> Result<TracelessSplit, FactorError> {
    let disc = a.trace() * a.trace() - 4.0;
    if disc.norm() <= DISCRIMINANT_FLOOR {
        return Err(FactorError::Precondition(format!(
            "repeated eigenvalue: |trace² − 4| = {:.3e}",
            disc.norm()
        )));
    }
    let scale = a.frobenius_norm().max(1.0);
    let floor = LOWER_ENTRY_FLOOR * scale;

    let (q, target) = if a.c.norm() >= floor {
        (PointMatrix::identity(), *a)
    } else {
        conjugators()
            .into_iter()
            .map(|q| {
                let qi = q.inverse().expect("conjugators are unimodular");
                (q, q * *a * qi)
            })
            .find(|(_, m)| m.c.norm() >= floor)
            .ok_or_else(|| {
                FactorError::Internal("no listed conjugator lifts the (2,1) entry".into())
            })?
    };

    let (u, v, w, fplus, fminus) = solve_fiber(&target);
    let local = PointMatrix::new(u, w, v, -u);
    let q_inv = q.inverse().expect("conjugators are unimodular");
    let b = q_inv * local * q;
    // B⁻¹ = −B for traceless B with det 1.
    let c = -(b * *a);

    let defect = [
        b.trace().norm(),
        c.trace().norm(),
        (b.det() - 1.0).norm(),
        (c.det() - 1.0).norm(),
        (b * c - *a).frobenius_norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let bound = SPLIT_TOL * (b.frobenius_norm() * scale).max(1.0).powi(2);
    if defect > bound {
        return Err(FactorError::Internal(format!(
            "pointwise split misses its postconditions by {defect:.3e}"
        )));
    }
    Ok(TracelessSplit {
        b,
        c,
        point: TracelessPoint {
            u,
            v,
            w,
            fplus,
            fminus,
            conj: q,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        let a = PointMatrix::real(2.0, 1.0, 1.0, 1.0);
        let s = pointwise_traceless_split(&a).unwrap();
        let p = s.point;
        let r5 = 5f64.sqrt();
        assert!((p.u - Complex64::new(1.0 / r5, 0.0)).norm() < 1e-12);
        assert!((p.v - Complex64::new(2.0 / r5, 0.0)).norm() < 1e-12);
        assert!((p.w - Complex64::new(-3.0 / r5, 0.0)).norm() < 1e-12);
        assert!((p.fplus - Complex64::new((-1.0 + r5) / 2.0, 0.0)).norm() < 1e-12);
        assert!((p.fminus - Complex64::new((-1.0 - r5) / 2.0, 0.0)).norm() < 1e-12);
        // (a − d)u + bv + cw = 0 and u² + vw = −1
        assert!((p.u + p.v + p.w).norm() < 1e-12);
        assert!((p.u * p.u + p.v * p.w + 1.0).norm() < 1e-12);
        // ũṽ = −1
        assert!(((p.u + p.fplus * p.v) * (p.u + p.fminus * p.v) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn lower_left_zero_uses_conjugation() {
        let a = PointMatrix::real(2.0, 0.0, 0.0, 0.5);
        let s = pointwise_traceless_split(&a).unwrap();
        assert_ne!(s.point.conj, PointMatrix::identity());
        assert!(s.b.trace().norm() < 1e-10 && s.c.trace().norm() < 1e-10);
        assert!((s.b.det() - 1.0).norm() < 1e-10 && (s.c.det() - 1.0).norm() < 1e-10);
        assert!((s.b * s.c - a).frobenius_norm() < 1e-10);
    }

    #[test]
    fn repeated_eigenvalue_is_rejected() {
        assert!(matches!(
            pointwise_traceless_split(&PointMatrix::identity()),
            Err(FactorError::Precondition(_))
        ));
    }
}
