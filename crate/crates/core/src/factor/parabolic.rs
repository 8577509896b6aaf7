use std::f64::consts::PI;

use num_complex::Complex64;

use super::{boundary_residual, Branch, FactorError, Factorization};
use crate::mat2::{MatFun, SpecialLinear, Traceless};

/// Coefficient tolerance for `trace ≡ ±2`.
pub const PARABOLIC_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parabolic {
    /// Characteristic polynomial `(T − 1)²`.
    Plus,
    /// Characteristic polynomial `(T + 1)²`.
    Minus,
    None,
}

pub fn detect_parabolic(a: &SpecialLinear) -> Parabolic {
    let trace = a.matrix().trace();
    let two = Complex64::new(2.0, 0.0);
    if trace.add_constant(-two).max_coeff_modulus() <= PARABOLIC_TOL {
        Parabolic::Plus
    } else if trace.add_constant(two).max_coeff_modulus() <= PARABOLIC_TOL {
        Parabolic::Minus
    } else {
        Parabolic::None
    }
}

/// One-exponential (`+`) or two-exponential (`−`) factorization of a
/// parabolic matrix. With `(A − I)² = 0`, `exp(A − I) = A`; for trace −2,
/// `A = (−I)·(−A) = exp(diag(iπ, −iπ)) · exp(−A − I)`.
pub fn factor_parabolic(
    a: &SpecialLinear,
    sign: Parabolic,
    grid: usize,
) -> Result<Factorization, FactorError> {
    let detected = detect_parabolic(a);
    if sign == Parabolic::None || detected != sign {
        return Err(FactorError::Contract(format!(
            "requested {sign:?} shortcut but the trace is {detected:?}"
        )));
    }
    let m = a.matrix();
    let order = m.order();
    let id = MatFun::identity(order);
    let (m1, m2, count, branch) = match sign {
        Parabolic::Plus => (m.sub(&id), MatFun::zero(order), 1, Branch::ParabolicPlus),
        _ => {
            let ipi = Complex64::new(0.0, PI);
            let rot = MatFun::constant(&crate::mat2::PointMatrix::diag(ipi, -ipi), order);
            let neg = m.scale(Complex64::new(-1.0, 0.0)).sub(&id);
            (rot, neg, 2, Branch::ParabolicMinus)
        }
    };
    let m1 = Traceless::verify(m1, PARABOLIC_TOL)?;
    let m2 = Traceless::verify(m2, PARABOLIC_TOL)?;
    let residual = boundary_residual(m, m1.matrix(), m2.matrix(), grid);
    Ok(Factorization {
        m1: m1.into_inner(),
        m2: m2.into_inner(),
        factor_count: count,
        branch,
        inner_branch: None,
        residual,
        certificates: Vec::new(),
        delta: None,
        plan: None,
        timings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holofun::DiscFunction;
    use crate::mat2::{PointMatrix, DET_TOL};

    const N: usize = 32;
    const GRID: usize = 256;

    fn sl(m: MatFun) -> SpecialLinear {
        SpecialLinear::verify(m, GRID, DET_TOL).unwrap()
    }

    #[test]
    fn detection() {
        assert_eq!(detect_parabolic(&sl(MatFun::identity(N))), Parabolic::Plus);
        let shear = MatFun::upper_shear(DiscFunction::identity(N));
        assert_eq!(detect_parabolic(&sl(shear)), Parabolic::Plus);
        let d = MatFun::constant(&PointMatrix::real(2.0, 0.0, 0.0, 0.5), N);
        assert_eq!(detect_parabolic(&sl(d)), Parabolic::None);
        let minus = MatFun::identity(N).scale(Complex64::new(-1.0, 0.0));
        assert_eq!(detect_parabolic(&sl(minus)), Parabolic::Minus);
    }

    #[test]
    fn identity_factors_trivially() {
        let f = factor_parabolic(&sl(MatFun::identity(N)), Parabolic::Plus, GRID).unwrap();
        assert!(f.m1.max_coeff_modulus() == 0.0 && f.m2.max_coeff_modulus() == 0.0);
        assert_eq!(f.factor_count, 1);
    }

    #[test]
    fn constant_shear_is_nilpotent_log() {
        let a = sl(MatFun::constant(&PointMatrix::real(1.0, 1.0, 0.0, 1.0), N));
        let f = factor_parabolic(&a, Parabolic::Plus, GRID).unwrap();
        let expected = MatFun::constant(&PointMatrix::real(0.0, 1.0, 0.0, 0.0), N);
        assert_eq!(f.m1, expected);
        assert!(f.residual <= 1e-15, "{}", f.residual);
    }

    #[test]
    fn minus_identity() {
        let a = sl(MatFun::identity(N).scale(Complex64::new(-1.0, 0.0)));
        let f = factor_parabolic(&a, Parabolic::Minus, GRID).unwrap();
        assert_eq!(f.factor_count, 2);
        assert!(f.m2.max_coeff_modulus() == 0.0);
        assert!(f.residual <= 1e-12, "{}", f.residual);
    }

    #[test]
    fn sign_mismatch_is_contract_error() {
        let a = sl(MatFun::identity(N));
        assert!(matches!(
            factor_parabolic(&a, Parabolic::Minus, GRID),
            Err(FactorError::Contract(_))
        ));
    }
}
