use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use discfact::factor::{
    detect_parabolic, dominant_root, eigen_conjugator, factor_parabolic, log_traceless,
    log_via_diagonalization, pointwise_traceless_split, scale_split, unimodular_reduction,
    ErrorCategory, Parabolic,
};
use discfact::mat2::{exp_pointwise, exp_traceless, DET_TOL};
use discfact::verify::{certify_unit, residual_report, traceless_check};
use discfact::*;

const N: usize = 64;
const GRID: usize = 1024;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> FactorConfig {
    FactorConfig {
        grid: GRID,
        ..FactorConfig::default()
    }
}

fn sl(m: MatFun) -> SpecialLinear {
    SpecialLinear::verify(m, GRID, DET_TOL).unwrap()
}

fn constant(a: f64, b: f64, cc: f64, d: f64) -> MatFun {
    MatFun::constant(&PointMatrix::real(a, b, cc, d), N)
}

#[test]
fn parabolic_detection_and_shortcuts() {
    assert_eq!(detect_parabolic(&sl(MatFun::identity(N))), Parabolic::Plus);
    let shear = MatFun::upper_shear(DiscFunction::identity(N));
    assert_eq!(detect_parabolic(&sl(shear)), Parabolic::Plus);
    assert_eq!(
        detect_parabolic(&sl(constant(2.0, 0.0, 0.0, 0.5))),
        Parabolic::None
    );

    let a = sl(constant(1.0, 1.0, 0.0, 1.0));
    let f = factor_parabolic(&a, Parabolic::Plus, GRID).unwrap();
    assert_eq!(f.m1, constant(0.0, 1.0, 0.0, 0.0));
    assert_eq!(f.factor_count, 1);

    let minus = sl(MatFun::identity(N).scale(c(-1.0, 0.0)));
    let f = factor_parabolic(&minus, Parabolic::Minus, GRID).unwrap();
    let ipi = c(0.0, PI);
    assert_eq!(f.m1, MatFun::constant(&PointMatrix::diag(ipi, -ipi), N));
    assert_eq!(f.m2.max_coeff_modulus(), 0.0);
    assert!(f.residual <= 1e-12);
}

#[test]
fn reduction_examples() {
    let two = sl(constant(2.0, 1.0, 1.0, 1.0));
    assert!(unimodular_reduction(&two, &cfg()).unwrap().h.is_zero());
    assert!(unimodular_reduction(&sl(MatFun::identity(N)), &cfg())
        .unwrap()
        .h
        .is_zero());

    // [[z, −1], [1, 0]]: a + h·c = z + h needs |h| > 1.
    let z = DiscFunction::identity(N);
    let m = MatFun::new(
        z.clone(),
        -&DiscFunction::one(N),
        DiscFunction::one(N),
        DiscFunction::zero(N),
    );
    let r = unimodular_reduction(&sl(m.clone()), &cfg()).unwrap();
    let first = &z + &r.h;
    assert!(certify_unit(&first, GRID).unwrap().is_unit());
    assert_eq!(r.shear.det(), DiscFunction::one(N));
    let expected = r.shear.mul(&m).mul(&MatFun::upper_shear(-&r.h));
    assert!(r.reduced.sub(&expected).max_coeff_modulus() < 1e-12);
}

#[test]
fn scaling_examples() {
    let s = scale_split(&MatFun::identity(N), GRID).unwrap();
    assert!((s.beta_sup - 4.0).abs() < 1e-12);
    assert!((s.delta - 4.0 * (1.0 + 1e-6)).abs() < 1e-9);
    assert!(s.trace_inf > 2.0 && (s.trace_inf - (s.delta + 1.0 / s.delta)).abs() < 1e-9);

    let a = constant(2.0, 0.0, 0.0, 0.5);
    let s = scale_split(&a, GRID).unwrap();
    assert!((s.beta_sup - 1.75).abs() < 1e-12);
    assert!((s.trace_inf - (2.0 * s.delta + 0.5 / s.delta)).abs() < 1e-9);
    let back = exp_traceless(&s.constant_log).mul(&s.scaled);
    assert!(back.sub(&a).max_coeff_modulus() < 1e-12);
}

#[test]
fn dominant_root_examples() {
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    let three = DiscFunction::constant(c(3.0, 0.0), N);
    assert!((dominant_root(&three, GRID).unwrap().lambda.coeff(0) - golden).norm() < 1e-10);
    let minus = DiscFunction::constant(c(-3.0, 0.0), N);
    assert!((dominant_root(&minus, GRID).unwrap().lambda.coeff(0) + golden).norm() < 1e-10);

    let t = DiscFunction::from_real(&[3.0, 0.5], N);
    let r = dominant_root(&t, GRID).unwrap();
    assert!((&(&r.lambda + &r.lambda_inv) - &t).max_coeff_modulus() < 1e-10);
    assert!((&(&r.lambda * &r.lambda_inv) - &DiscFunction::one(N)).max_coeff_modulus() < 1e-10);
    assert!(r.lambda_inf > 1.0);

    assert!(dominant_root(&DiscFunction::constant(c(1.5, 0.0), N), GRID).is_err());
}

#[test]
fn conjugator_and_diagonal_log_examples() {
    let b = constant(4.0, 0.0, 0.0, 0.25);
    let roots = dominant_root(&b.trace(), GRID).unwrap();
    assert!((roots.lambda.coeff(0) - 4.0).norm() < 1e-12);
    let conj = eigen_conjugator(&b, &roots, None, GRID).unwrap();
    assert!(
        conj.p
            .sub(&constant(-3.75, 0.0, 0.0, 3.75))
            .max_coeff_modulus()
            < 1e-12
    );
    assert!((conj.det.coeff(0) + 14.0625).norm() < 1e-12);
    assert!((&conj.det - &conj.det_closed_form).max_coeff_modulus() < 1e-12);
    assert!(conj.kernel_residual <= 1e-10);

    let log = log_via_diagonalization(&b, &roots.lambda, &conj, GRID).unwrap();
    let ln4 = 4f64.ln();
    let expected = constant(ln4, 0.0, 0.0, -ln4);
    assert!(log.log.matrix().sub(&expected).max_coeff_modulus() < 1e-12);
    assert!(traceless_check(log.log.matrix()) <= 1e-11);
}

#[test]
fn traceless_log_examples() {
    let rot = Traceless::verify(constant(0.0, 1.0, -1.0, 0.0), 1e-12).unwrap();
    let log = log_traceless(&rot, GRID).unwrap();
    let expected = constant(0.0, FRAC_PI_2, -FRAC_PI_2, 0.0);
    assert!(log.matrix().sub(&expected).max_coeff_modulus() < 1e-15);

    let i = c(0.0, 1.0);
    let diag = Traceless::verify(MatFun::constant(&PointMatrix::diag(i, -i), N), 1e-12).unwrap();
    let log = log_traceless(&diag, GRID).unwrap();
    let half = c(0.0, FRAC_PI_2);
    let expected = MatFun::constant(&PointMatrix::diag(half, -half), N);
    assert!(log.matrix().sub(&expected).max_coeff_modulus() < 1e-15);
}

#[test]
fn sl2_examples() {
    let f = factor_sl2(&sl(MatFun::identity(N)), &cfg()).unwrap();
    assert_eq!(f.factor_count, 1);
    assert_eq!(f.m1.max_coeff_modulus(), 0.0);

    let m = constant(2.0, 1.0, 1.0, 1.0);
    let f = factor_sl2(&sl(m.clone()), &cfg()).unwrap();
    assert_eq!((f.factor_count, f.branch), (2, Branch::Generic));
    let report = residual_report(&m, &f, 128, 32, 1);
    assert!(report.residual_sup <= 1e-10, "{}", report.residual_sup);
    assert!(report.traceless_defect <= 1e-11);
}

#[test]
fn gl2_examples() {
    let e = std::f64::consts::E;
    let f = factor_gl2(&constant(e, 0.0, 0.0, e), &cfg()).unwrap();
    assert!(f.m1.sub(&MatFun::identity(N)).max_coeff_modulus() < 1e-12);
    assert!(f.m2.max_coeff_modulus() < 1e-12);

    let m = constant(4.0, 0.0, 0.0, 1.0);
    let f = factor_gl2(&m, &cfg()).unwrap();
    assert_eq!(f.branch, Branch::Gl2);
    assert!(residual_report(&m, &f, 128, 32, 1).residual_sup <= 1e-10);

    let winding = MatFun::diag(DiscFunction::identity(N), DiscFunction::one(N));
    let err = factor_gl2(&winding, &cfg()).unwrap_err();
    assert_eq!(err.category(), ErrorCategory::NotNullHomotopic);
}

#[test]
fn splitter_examples() {
    let a = PointMatrix::real(2.0, 1.0, 1.0, 1.0);
    let s = pointwise_traceless_split(&a).unwrap();
    let p = s.point;
    assert!((p.u - 0.4472135954999579).norm() < 1e-12);
    assert!((p.v - 0.8944271909999159).norm() < 1e-12);
    assert!((p.w + 1.3416407864998738).norm() < 1e-12);
    assert!((p.u * p.u + p.v * p.w + 1.0).norm() < 1e-12);
    assert!(((a.a - a.d) * p.u + a.b * p.v + a.c * p.w).norm() < 1e-12);
    assert!(((p.u + p.fplus * p.v) * (p.u + p.fminus * p.v) + 1.0).norm() < 1e-12);

    let d = PointMatrix::real(2.0, 0.0, 0.0, 0.5);
    let s = pointwise_traceless_split(&d).unwrap();
    assert!((s.b * s.c - d).frobenius_norm() < 1e-10);
    assert!(s.b.trace().norm() < 1e-10 && s.c.trace().norm() < 1e-10);

    let err = pointwise_traceless_split(&PointMatrix::identity()).unwrap_err();
    assert_eq!(err.category(), ErrorCategory::Precondition);
}

#[test]
fn rotation_closed_form_pointwise() {
    let b = PointMatrix::real(0.0, 1.0, -1.0, 0.0);
    let e = exp_pointwise(&b.scale(c(FRAC_PI_2, 0.0)));
    assert!((e - b).frobenius_norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugation_invariance(
        seed in 0u64..1000,
        q in (0.5f64..2.0, -1.0f64..1.0, -1.0f64..1.0),
    ) {
        let mut rng = fixtures::rng(seed);
        let m = fixtures::shear_product(&mut rng, 3, 2, 128);
        let (qa, qb, qc) = (c(q.0, 0.0), c(q.1, 0.0), c(q.2, 0.0));
        let q = MatFun::constant(&PointMatrix::new(qa, qb, qc, (qb * qc + 1.0) / qa), 128);
        let conj = m.conjugate(&q, GRID).unwrap();
        let config = FactorConfig::default();
        let a = SpecialLinear::verify(conj.clone(), config.grid, DET_TOL).unwrap();
        let f = factor_sl2(&a, &config).unwrap();
        let report = residual_report(&conj, &f, 256, 64, seed);
        prop_assert!(report.residual_sup <= 1e-8, "{}", report.residual_sup);
    }
}
