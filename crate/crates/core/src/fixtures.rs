//! Seeded test inputs: shear products, unit polynomials, the `e^{4πiz}` matrix.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::holofun::DiscFunction;
use crate::mat2::{MatFun, PointMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disc of the given radius.
pub fn random_in_disc(rng: &mut impl Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

/// Polynomial of degree at most `degree` with coefficients of modulus ≤ `radius`.
pub fn random_poly(rng: &mut impl Rng, degree: usize, radius: f64, order: usize) -> DiscFunction {
    let coeffs = (0..=degree).map(|_| random_in_disc(rng, radius)).collect();
    DiscFunction::new(coeffs, order)
}

/// Product of 1 to `max_shears` shears `[[1,p],[0,1]]` / `[[1,0],[q,1]]`
/// with random polynomial off-diagonal entries; det ≡ 1 exactly.
pub fn shear_product(rng: &mut impl Rng, max_shears: usize, degree: usize, order: usize) -> MatFun {
    let count = rng.gen_range(1..=max_shears);
    let mut upper = rng.gen::<bool>();
    let mut m = MatFun::identity(order);
    for _ in 0..count {
        let p = random_poly(rng, degree, 1.0, order);
        let shear = if upper {
            MatFun::upper_shear(p)
        } else {
            MatFun::lower_shear(p)
        };
        m = m.mul(&shear);
        upper = !upper;
    }
    m
}

/// The seeded shear-product corpus (≤ 6 shears, degree ≤ 4).
pub fn shear_corpus(seed: u64, count: usize, order: usize) -> Vec<MatFun> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| shear_product(&mut rng, 6, 4, order))
        .collect()
}

/// Taylor polynomial of `e^{wz}` through degree `degree`.
pub fn exp_linear(w: Complex64, degree: usize, order: usize) -> DiscFunction {
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=degree {
        if k > 0 {
            term = term * w / k as f64;
        }
        coeffs.push(term);
    }
    DiscFunction::new(coeffs, order)
}

/// `[[1, 1], [0, e^{4πiz}]]` with the exponential truncated at `degree`.
/// No single exponential lifts this matrix on the disc.
pub fn sharpness_matrix(degree: usize, order: usize) -> MatFun {
    let e = exp_linear(Complex64::new(0.0, 4.0 * PI), degree, order);
    MatFun::new(
        DiscFunction::one(order),
        DiscFunction::one(order),
        DiscFunction::zero(order),
        e,
    )
}

/// `c₀ + p(z)` with `|c₀| ≥ 1` and `Σ|p_k| ≤ |c₀|/2`: a unit with no zeros
/// within radius 2.
pub fn random_unit(rng: &mut impl Rng, degree: usize, order: usize) -> DiscFunction {
    let c0 = Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..TAU));
    let budget = 0.5 * c0.norm() / degree.max(1) as f64;
    let mut coeffs = vec![c0];
    coeffs.extend((1..=degree).map(|_| random_in_disc(rng, budget)));
    DiscFunction::new(coeffs, order)
}

/// `diag(u, 1) · S` with a random unit `u` and a shear product `S`.
pub fn gl2_corpus(seed: u64, count: usize, order: usize) -> Vec<MatFun> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let u = random_unit(&mut rng, 3, order);
            let s = shear_product(&mut rng, 4, 3, order);
            MatFun::new(&u * &s.a, &u * &s.b, s.c, s.d)
        })
        .collect()
}

/// Random `SL₂(ℂ)` point with `|a| ≥ 1/2` and `|trace² − 4| > min_disc`.
pub fn random_sl2_point(rng: &mut impl Rng, min_disc: f64) -> PointMatrix {
    loop {
        let a = random_in_disc(rng, 2.0);
        if a.norm() < 0.5 {
            continue;
        }
        let b = random_in_disc(rng, 2.0);
        let c = random_in_disc(rng, 2.0);
        let d = (b * c + 1.0) / a;
        let m = PointMatrix::new(a, b, c, d);
        if (m.trace() * m.trace() - 4.0).norm() > min_disc {
            return m;
        }
    }
}

/// Random traceless det-1 point with entries of modulus ≤ `radius`.
pub fn random_traceless_sl2_point(rng: &mut impl Rng, radius: f64) -> PointMatrix {
    loop {
        // u² + vw = −1 with w solved from u, v.
        let u = random_in_disc(rng, radius);
        let v = random_in_disc(rng, radius);
        if v.norm() < 0.1 {
            continue;
        }
        let w = -(u * u + 1.0) / v;
        if w.norm() <= radius {
            return PointMatrix::new(u, v, w, -u);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_products_have_unit_determinant() {
        for m in shear_corpus(1, 20, 64) {
            assert!(m.det_defect(256) < 1e-10);
        }
    }

    #[test]
    fn sharpness_determinant_defect() {
        let m = sharpness_matrix(60, 256);
        let exact = |z: Complex64| (Complex64::new(0.0, 4.0 * PI) * z).exp();
        let worst = (0..512)
            .map(|j| {
                let z = Complex64::from_polar(1.0, TAU * j as f64 / 512.0);
                (m.det().eval(z).unwrap() - exact(z)).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-9, "{worst}");
    }

    #[test]
    fn traceless_points_are_special_linear() {
        let mut r = rng(3);
        for _ in 0..100 {
            let p = random_traceless_sl2_point(&mut r, 3.0);
            assert!(p.trace().norm() == 0.0);
            assert!((p.det() - 1.0).norm() < 1e-14);
        }
    }
}
