use num_complex::Complex64;

use super::{MatFun, Traceless};
use crate::holofun::{sampling_grid, DiscFunction};

/// Target for the factorial tail of the outer series.
const OUTER_TAIL: f64 = 1e-16;
const MAX_TERMS: usize = 4096;

/// Number of outer terms `K` after which `σᴷ / (2K)!` drops below `1e-16`.
pub fn series_terms_for(sigma: f64) -> usize {
    if sigma <= 0.0 {
        return 1;
    }
    let target = OUTER_TAIL.ln();
    let ln_sigma = sigma.ln();
    let mut ln_fact = 0.0; // ln (2k)!
    for k in 1..MAX_TERMS {
        ln_fact += ((2 * k - 1) as f64).ln() + ((2 * k) as f64).ln();
        if k as f64 * ln_sigma - ln_fact < target {
            return k;
        }
    }
    MAX_TERMS
}

/// `Σ_{k<K} coeff(k) · s^k` by Horner's rule on truncated series.
fn horner(s: &DiscFunction, terms: usize, coeff: impl Fn(usize) -> f64) -> DiscFunction {
    let mut acc = DiscFunction::constant(Complex64::new(coeff(terms - 1), 0.0), s.order());
    for k in (0..terms - 1).rev() {
        acc = (&acc * s).add_constant(Complex64::new(coeff(k), 0.0));
    }
    acc
}

/// `(C(s), S(s)) = (cosh √s, sinh √s / √s)`, even in `√s`.
pub fn cayley_hamilton_coefficients(s: Complex64) -> (Complex64, Complex64) {
    if s.norm() < 1e-3 {
        // Enough terms for full precision below |s| = 1e-3.
        let cosh = 1.0 + s * (0.5 + s * (1.0 / 24.0 + s * (1.0 / 720.0 + s / 40320.0)));
        let sinh = 1.0 + s * (1.0 / 6.0 + s * (1.0 / 120.0 + s * (1.0 / 5040.0 + s / 362880.0)));
        return (cosh, sinh);
    }
    let w = s.sqrt();
    (w.cosh(), w.sinh() / w)
}

/// Exponential of a traceless matrix function via Cayley–Hamilton.
///
/// For traceless `M`, `M² = s·I` with `s = −det M`, so
/// `exp M = C(s)·I + S(s)·M` where `C(s) = Σ sᵏ/(2k)!` and
/// `S(s) = Σ sᵏ/(2k+1)!` are entire in `s`. The coefficients are evaluated
/// on a boundary grid and interpolated, which keeps the rounding error
/// relative to the sup of the result.
pub fn exp_traceless(m: &Traceless) -> MatFun {
    let m = m.matrix();
    let order = m.order();
    let grid = sampling_grid(order, 0);
    let samples = m.boundary_values(grid);
    let mut entries = [const { Vec::new() }; 4];
    let mut sup = 0.0f64;
    for p in &samples {
        let (cosh, sinh) = cayley_hamilton_coefficients(-p.det());
        let e = [cosh + sinh * p.a, sinh * p.b, sinh * p.c, cosh + sinh * p.d];
        for (column, v) in entries.iter_mut().zip(e) {
            column.push(v);
        }
        sup = sup.max(p.frobenius_norm());
    }
    let input_tail = [&m.a, &m.b, &m.c, &m.d]
        .iter()
        .map(|f| f.tail())
        .fold(0.0, f64::max);
    let inherited = input_tail * sup.exp();
    let [a, b, c, d] = entries.map(|v| {
        let f = DiscFunction::from_boundary_samples(&v, order);
        let tail = f.tail() + inherited;
        f.with_tail(tail)
    });
    MatFun::new(a, b, c, d)
}

/// [`exp_traceless`] by Horner's rule on truncated series, with the number
/// of terms set by `σ = ‖s‖₁`.
pub fn exp_traceless_series(m: &Traceless) -> MatFun {
    let m = m.matrix();
    let s = -m.det();
    // ℓ¹ norm bounds the sup of s over the closed disc.
    let sigma = s.l1_norm();
    let terms = series_terms_for(sigma) + 1;

    let mut inv_fact = vec![1.0f64; 2 * terms + 2];
    for j in 1..inv_fact.len() {
        inv_fact[j] = inv_fact[j - 1] / j as f64;
    }
    let outer_tail = 2.0 * sigma.powi(terms as i32) * inv_fact[2 * terms];

    let cosh_part = horner(&s, terms, |k| inv_fact[2 * k]);
    let sinh_part = horner(&s, terms, |k| inv_fact[2 * k + 1]);
    let cosh_part = cosh_part.clone().with_tail(cosh_part.tail() + outer_tail);
    let sinh_part = sinh_part.clone().with_tail(sinh_part.tail() + outer_tail);

    MatFun::new(
        &cosh_part + &sinh_part * &m.a,
        &sinh_part * &m.b,
        &sinh_part * &m.c,
        &cosh_part + &sinh_part * &m.d,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{PointMatrix, TRACELESS_TOL};
    use std::f64::consts::FRAC_PI_2;

    const N: usize = 64;

    fn traceless(p: PointMatrix) -> Traceless {
        Traceless::verify(MatFun::constant(&p, N), TRACELESS_TOL).unwrap()
    }

    fn value_at_zero(m: &MatFun) -> PointMatrix {
        m.eval(Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = exp_traceless(&Traceless::zero(N));
        assert_eq!(value_at_zero(&e), PointMatrix::identity());
    }

    #[test]
    fn diagonal_case() {
        let t = 0.7;
        let e = exp_traceless(&traceless(PointMatrix::real(t, 0.0, 0.0, -t)));
        let expected = PointMatrix::real(t.exp(), 0.0, 0.0, (-t).exp());
        assert!((value_at_zero(&e) - expected).frobenius_norm() < 1e-15);
    }

    #[test]
    fn quarter_rotation() {
        let j = PointMatrix::real(0.0, 1.0, -1.0, 0.0);
        let e = exp_traceless(&traceless(j.scale(FRAC_PI_2.into())));
        assert!((value_at_zero(&e) - j).frobenius_norm() < 1e-15);
    }

    #[test]
    fn sampled_and_series_agree() {
        let z = DiscFunction::identity(N);
        let u = DiscFunction::from_real(&[0.3, -0.5, 0.2], N);
        let v = DiscFunction::from_real(&[1.0, 0.4], N);
        let w = &z + &DiscFunction::from_real(&[-0.7], N);
        let m = Traceless::verify(MatFun::new(u.clone(), v, w, -&u), 0.0).unwrap();
        let diff = exp_traceless(&m).sub(&exp_traceless_series(&m));
        assert!(
            diff.max_coeff_modulus() < 1e-14,
            "{}",
            diff.max_coeff_modulus()
        );
    }

    #[test]
    fn coefficients_are_continuous_at_small_s() {
        for s in [9.99e-4, 1.001e-3] {
            let (c, sh) = cayley_hamilton_coefficients(Complex64::new(s, 0.0));
            let w = s.sqrt();
            assert!((c.re - w.cosh()).abs() < 1e-16);
            assert!((sh.re - w.sinh() / w).abs() < 1e-15);
        }
    }

    #[test]
    fn term_count_grows_with_sigma() {
        assert_eq!(series_terms_for(0.0), 1);
        assert!(series_terms_for(1.0) < series_terms_for(100.0));
        let k = series_terms_for(50.0);
        let mut bound = 1.0f64;
        for j in 1..=2 * k {
            bound /= j as f64;
        }
        assert!(50f64.powi(k as i32) * bound < 1e-16);
    }
}
