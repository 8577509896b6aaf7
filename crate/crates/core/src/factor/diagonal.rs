use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::FactorError;
use crate::holofun::{sampling_grid, Certificate, DiscFunction};
use crate::mat2::{exp_traceless, sup_distance, MatFun, PointMatrix, Traceless, DET_TOL};

/// Lower bound enforced on the boundary modulus of `det P` after δ-scaling.
pub const DET_P_FLOOR: f64 = 1.0 - 1e-6;

const ROOT_SUM_TOL: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-9;
const DET_FORMULA_TOL: f64 = 1e-12;
const TRACELESS_LOG_TOL: f64 = 1e-10;

/// Roots `λ, λ⁻¹` of `T² − tT + 1` with `|λ| > 1` on the closed disc.
#[derive(Debug, Clone)]
pub struct RootPair {
    pub lambda: DiscFunction,
    pub lambda_inv: DiscFunction,
    /// Unit certificate of `λ`.
    pub certificate: Certificate,
    /// Boundary inf of `|λ|`.
    pub lambda_inf: f64,
}

/// The root of `T² − tT + 1` that stays outside the unit circle.
///
/// Needs `|t| > 2` on the closed disc, certified as: `t` is a unit (so its
/// modulus is smallest on the boundary) and its boundary inf exceeds 2.
/// Then `t² − 4` is a unit with a square root `r`, and of `(t ± r)/2`
/// exactly one has modulus above 1 everywhere. Since the two roots never
/// meet, picking the larger one pointwise on the boundary grid yields that
/// holomorphic branch; it is interpolated from the samples.
pub fn dominant_root(t: &DiscFunction, grid: usize) -> Result<RootPair, FactorError> {
    let cert = t.certificate(grid)?;
    if !cert.is_unit() || cert.min_boundary_modulus <= 2.0 {
        return Err(FactorError::Precondition(format!(
            "need |t| > 2 on the closed disc (winding {:?}, boundary inf {:.6})",
            cert.winding, cert.min_boundary_modulus
        )));
    }
    let grid = sampling_grid(t.order(), cert.grid_size);
    let mut big = Vec::with_capacity(grid);
    let mut small = Vec::with_capacity(grid);
    let mut sensitivity = 0.0f64;
    for tv in t.boundary_values(grid) {
        let r = (tv * tv - 4.0).sqrt();
        // The sign that adds t and r without cancellation gives the big root.
        let l = if (tv + r).norm() >= (tv - r).norm() {
            (tv + r) * 0.5
        } else {
            (tv - r) * 0.5
        };
        big.push(l);
        small.push(1.0 / l);
        sensitivity = sensitivity.max((l / r).norm());
    }
    let inherited = t.tail() * sensitivity;
    let sampled = |values: &[Complex64]| {
        let f = DiscFunction::from_boundary_samples(values, t.order());
        let tail = f.tail() + inherited;
        f.with_tail(tail)
    };
    let lambda = sampled(&big);
    let lambda_inv = sampled(&small);
    let certificate = lambda.require_unit(grid)?;

    let scale = t.max_coeff_modulus().max(1.0);
    let sum_defect = (&(&lambda + &lambda_inv) - t).max_coeff_modulus();
    if sum_defect > ROOT_SUM_TOL * scale {
        return Err(FactorError::Internal(format!(
            "λ + 1/λ misses t by {sum_defect:.3e}"
        )));
    }
    let lambda_inf = lambda.boundary_extrema(grid).0;
    if lambda_inf <= 1.0 {
        return Err(FactorError::Internal(format!(
            "selected root reaches modulus {lambda_inf:.6} on the boundary"
        )));
    }
    Ok(RootPair {
        lambda,
        lambda_inv,
        certificate,
        lambda_inf,
    })
}

/// Eigenvector matrix of `B` for the eigenvalues `λ` and `λ⁻¹`.
#[derive(Debug, Clone)]
pub struct Conjugator {
    /// `[[d − λ, −b], [−c, a − λ⁻¹]]` in the entries of `B`.
    pub p: MatFun,
    /// `det P` computed from the entries of `P`.
    pub det: DiscFunction,
    /// `2 − λa − λ⁻¹d`, equal to `det P` when `det B = 1`.
    pub det_closed_form: DiscFunction,
    pub certificate: Certificate,
    /// Grid sup of `‖(B − λ)v‖` and `‖(B − λ⁻¹)w‖` over the two columns.
    pub kernel_residual: f64,
}

pub fn eigen_conjugator(
    b: &MatFun,
    roots: &RootPair,
    det_floor: Option<f64>,
    grid: usize,
) -> Result<Conjugator, FactorError> {
    let (lambda, lambda_inv) = (&roots.lambda, &roots.lambda_inv);
    let p = MatFun::new(&b.d - lambda, -&b.b, -&b.c, &b.a - lambda_inv);

    let bv = b.boundary_values(grid);
    let lv = lambda.boundary_values(grid);
    let liv = lambda_inv.boundary_values(grid);
    let pv = p.boundary_values(grid);
    let mut kernel_residual = 0.0f64;
    let mut magnitude = 1.0f64;
    for j in 0..grid {
        let (m, l, li, pm) = (bv[j], lv[j], liv[j], pv[j]);
        let shifted = m - PointMatrix::identity().scale(l);
        let shifted_inv = m - PointMatrix::identity().scale(li);
        let first = (shifted.a * pm.a + shifted.b * pm.c).norm()
            + (shifted.c * pm.a + shifted.d * pm.c).norm();
        let second = (shifted_inv.a * pm.b + shifted_inv.b * pm.d).norm()
            + (shifted_inv.c * pm.b + shifted_inv.d * pm.d).norm();
        kernel_residual = kernel_residual.max(first).max(second);
        magnitude = magnitude.max((m.frobenius_norm() + l.norm()).powi(2));
    }
    if kernel_residual > KERNEL_TOL * magnitude {
        return Err(FactorError::Internal(format!(
            "eigenvector columns leave a residual of {kernel_residual:.3e}"
        )));
    }

    let det = p.det_sampled(grid);
    let lambda_a = lambda * &b.a;
    let inv_d = lambda_inv * &b.d;
    let det_closed_form = (-&(&lambda_a + &inv_d)).add_constant(Complex64::new(2.0, 0.0));
    let formula_scale = 1.0 + lambda_a.l1_norm() + inv_d.l1_norm() + b.b.l1_norm() * b.c.l1_norm();
    let formula_defect = (&det - &det_closed_form).max_coeff_modulus();
    if formula_defect > DET_FORMULA_TOL * formula_scale {
        return Err(FactorError::Internal(format!(
            "det P deviates from 2 − λa − d/λ by {formula_defect:.3e}"
        )));
    }

    let certificate = factored_det_certificate(b, roots, &det, grid)?;
    let floor_ok = det_floor.is_none_or(|f| certificate.min_boundary_modulus >= f);
    if !certificate.is_unit() || !floor_ok {
        return Err(FactorError::DegenerateConjugator(certificate));
    }
    Ok(Conjugator {
        p,
        det,
        det_closed_form,
        certificate,
        kernel_residual,
    })
}

/// Unit certificate of `det P = (d − λ)(λ − λ⁻¹)` from certificates of the
/// two factors, each of far smaller dynamic range than the product. The
/// winding adds; the boundary extrema are those of the sampled `det P` and
/// the floor is the larger relative floor of the factors.
fn factored_det_certificate(
    b: &MatFun,
    roots: &RootPair,
    det: &DiscFunction,
    grid: usize,
) -> Result<Certificate, FactorError> {
    let first = (&b.d - &roots.lambda).certificate(grid)?;
    let second = (&roots.lambda - &roots.lambda_inv).certificate(grid)?;
    let (min, max) = det.boundary_extrema(first.grid_size.max(second.grid_size));
    let relative = |c: &Certificate| c.floor / c.min_boundary_modulus;
    let winding = first.winding.zip(second.winding).map(|(x, y)| x + y);
    Ok(Certificate {
        winding,
        min_boundary_modulus: min,
        max_boundary_modulus: max,
        grid_size: first.grid_size.max(second.grid_size),
        tail: det.tail(),
        floor: min * relative(&first).max(relative(&second)),
    })
}

/// Traceless logarithm of `B = P · diag(λ, λ⁻¹) · P⁻¹`.
#[derive(Debug, Clone)]
pub struct DiagonalLog {
    pub log: Traceless,
    pub log_lambda: DiscFunction,
    /// Grid sup of `‖exp(log) − B‖`.
    pub residual: f64,
}

/// `P · diag(ℓ, −ℓ) · P⁻¹` with `ℓ` the principal logarithm of `λ`.
///
/// Expanded as `ℓ/det P · [[ps + qr, −2pq], [2rs, −(ps + qr)]]` for
/// `P = [[p, q], [r, s]]`, which is exactly traceless. The entries are
/// evaluated on a boundary grid and interpolated.
pub fn log_via_diagonalization(
    b: &MatFun,
    lambda: &DiscFunction,
    conj: &Conjugator,
    grid: usize,
) -> Result<DiagonalLog, FactorError> {
    let log_lambda = lambda.log_sampled(grid)?.value;
    if !conj.certificate.is_unit() {
        return Err(FactorError::DegenerateConjugator(conj.certificate.clone()));
    }
    let order = lambda.order();
    let fine = sampling_grid(order, grid);
    let lv = log_lambda.boundary_values(fine);
    let pv = conj.p.boundary_values(fine);
    let mut entries = [const { Vec::new() }; 3];
    for (l, m) in lv.iter().zip(&pv) {
        let coef = l / m.det();
        let e = [
            coef * (m.a * m.d + m.b * m.c),
            coef * m.a * m.b * -2.0,
            coef * m.c * m.d * 2.0,
        ];
        for (column, v) in entries.iter_mut().zip(e) {
            column.push(v);
        }
    }
    let [diag, upper, lower] = entries.map(|v| DiscFunction::from_boundary_samples(&v, order));
    let neg = -&diag;
    let log = Traceless::verify(MatFun::new(diag, upper, lower, neg), 0.0)?;
    let residual = sup_distance(
        &exp_traceless(&log).boundary_values(grid),
        &b.boundary_values(grid),
        |x, y| x - y,
    );
    Ok(DiagonalLog {
        log,
        log_lambda,
        residual,
    })
}

/// Logarithm of a traceless `SL₂` matrix function: `B² = −I` gives
/// `exp((π/2)·B) = cos(π/2)·I + sin(π/2)·B = B`.
pub fn log_traceless(b: &Traceless, grid: usize) -> Result<Traceless, FactorError> {
    let m = b.matrix();
    let det_defect = m.det_defect(grid);
    if det_defect > DET_TOL {
        return Err(FactorError::Contract(format!(
            "traceless logarithm needs det ≡ 1, defect {det_defect:.3e}"
        )));
    }
    let log = Traceless::verify(m.scale(Complex64::new(FRAC_PI_2, 0.0)), f64::INFINITY)?;
    let bv = m.boundary_values(grid);
    let scale = bv.iter().map(|x| x.frobenius_norm()).fold(1.0, f64::max);
    let residual = sup_distance(&exp_traceless(&log).boundary_values(grid), &bv, |x, y| {
        x - y
    });
    if residual > TRACELESS_LOG_TOL * scale {
        return Err(FactorError::Internal(format!(
            "exp((π/2)B) misses B by {residual:.3e}"
        )));
    }
    Ok(log)
}

/// Pointwise version of [`log_traceless`].
pub fn log_traceless_point(b: &PointMatrix) -> Result<PointMatrix, FactorError> {
    let scale = b.frobenius_norm().max(1.0);
    if b.trace().norm() > 1e-12 * scale || (b.det() - 1.0).norm() > DET_TOL * scale * scale {
        return Err(FactorError::Contract(
            "pointwise traceless logarithm needs trace 0 and det 1".into(),
        ));
    }
    Ok(b.scale(Complex64::new(FRAC_PI_2, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 64;
    const GRID: usize = 512;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn dominant_root_constants() {
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        let r = dominant_root(&DiscFunction::constant(c(3.0), N), GRID).unwrap();
        assert!((r.lambda.coeff(0) - c(golden)).norm() < 1e-12);
        assert!((r.lambda_inv.coeff(0) - c(1.0 / golden)).norm() < 1e-12);

        let r = dominant_root(&DiscFunction::constant(c(-3.0), N), GRID).unwrap();
        assert!((r.lambda.coeff(0) - c(-golden)).norm() < 1e-12);
    }

    #[test]
    fn dominant_root_of_varying_trace() {
        let t = DiscFunction::from_real(&[3.0, 0.5], N);
        let r = dominant_root(&t, GRID).unwrap();
        let sum = &r.lambda + &r.lambda_inv;
        for k in 0..N {
            assert!((sum.coeff(k) - t.coeff(k)).norm() < 1e-10);
        }
        assert!(r.lambda_inf > 1.0);
    }

    #[test]
    fn small_or_vanishing_trace_is_rejected() {
        for t in [
            DiscFunction::constant(c(1.5), N),
            // Large on the boundary but zero at the origin.
            DiscFunction::from_real(&[0.0, 3.0], N),
        ] {
            assert!(matches!(
                dominant_root(&t, GRID),
                Err(FactorError::Precondition(_))
            ));
        }
    }

    #[test]
    fn conjugator_of_diagonal() {
        let b = MatFun::constant(&PointMatrix::real(4.0, 0.0, 0.0, 0.25), N);
        let roots = dominant_root(&b.trace(), GRID).unwrap();
        assert!((roots.lambda.coeff(0) - c(4.0)).norm() < 1e-12);
        let conj = eigen_conjugator(&b, &roots, Some(DET_P_FLOOR), GRID).unwrap();
        let p0 = conj.p.eval(c(0.0)).unwrap();
        assert!((p0 - PointMatrix::real(-3.75, 0.0, 0.0, 3.75)).frobenius_norm() < 1e-12);
        assert!((conj.det.coeff(0) - c(-14.0625)).norm() < 1e-12);
        assert!(conj.certificate.min_boundary_modulus >= 1.0);

        let log = log_via_diagonalization(&b, &roots.lambda, &conj, GRID).unwrap();
        let l0 = log.log.matrix().eval(c(0.0)).unwrap();
        let ln4 = 4f64.ln();
        assert!((l0 - PointMatrix::real(ln4, 0.0, 0.0, -ln4)).frobenius_norm() < 1e-12);
        assert!(log.residual < 1e-12);
    }

    #[test]
    fn traceless_log_examples() {
        let j = PointMatrix::real(0.0, 1.0, -1.0, 0.0);
        let b = Traceless::verify(MatFun::constant(&j, N), 0.0).unwrap();
        let log = log_traceless(&b, GRID).unwrap();
        let l0 = log.matrix().eval(c(0.0)).unwrap();
        assert!((l0 - j.scale(c(FRAC_PI_2))).frobenius_norm() < 1e-15);

        let i = Complex64::new(0.0, 1.0);
        let d = PointMatrix::diag(i, -i);
        let l = log_traceless_point(&d).unwrap();
        let expected = PointMatrix::diag(i * FRAC_PI_2, -i * FRAC_PI_2);
        assert!((l - expected).frobenius_norm() < 1e-15);

        let not_sl = Traceless::verify(
            MatFun::constant(&PointMatrix::real(0.0, 2.0, -1.0, 0.0), N),
            0.0,
        )
        .unwrap();
        assert!(matches!(
            log_traceless(&not_sl, GRID),
            Err(FactorError::Contract(_))
        ));
    }
}
