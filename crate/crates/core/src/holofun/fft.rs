use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Below this many products the schoolbook convolution is used.
const DIRECT_CUTOFF: usize = 4096;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

fn inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Full linear convolution of two coefficient vectors.
pub(crate) fn convolve(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let out_len = f.len() + g.len() - 1;
    if f.len().min(g.len()) <= 16 || f.len() * g.len() <= DIRECT_CUTOFF {
        return convolve_direct(f, g);
    }
    let size = out_len.next_power_of_two();
    let mut a = vec![Complex64::default(); size];
    let mut b = vec![Complex64::default(); size];
    a[..f.len()].copy_from_slice(f);
    b[..g.len()].copy_from_slice(g);
    forward(&mut a);
    forward(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inverse(&mut a);
    let norm = 1.0 / size as f64;
    a.truncate(out_len);
    a.iter_mut().for_each(|x| *x *= norm);
    a
}

pub(crate) fn convolve_direct(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::default(); f.len() + g.len() - 1];
    for (i, &x) in f.iter().enumerate() {
        for (j, &y) in g.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Σ c_k ω^{jk}` for `ω = exp(2πi/grid)` and `j = 0 … grid-1`.
pub(crate) fn eval_roots_of_unity(coeffs: &[Complex64], grid: usize) -> Vec<Complex64> {
    assert!(grid > 0, "grid must be positive");
    let mut buf = vec![Complex64::default(); grid];
    for (k, &c) in coeffs.iter().enumerate() {
        buf[k % grid] += c;
    }
    inverse(&mut buf);
    buf
}

/// Inverse of [`eval_roots_of_unity`]: the aliased coefficients
/// `(1/grid) Σ_j v_j ω^{-jk}` of the samples.
pub(crate) fn coeffs_from_roots_of_unity(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    forward(&mut buf);
    let norm = 1.0 / values.len() as f64;
    buf.iter_mut().for_each(|x| *x *= norm);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn fft_convolution_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, m) in &[(9, 9), (65, 65), (100, 37), (300, 512)] {
            let f = random_poly(&mut rng, n);
            let g = random_poly(&mut rng, m);
            let fast = convolve(&f, &g);
            let slow = convolve_direct(&f, &g);
            let err = fast
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "n={n} m={m} err={err}");
        }
    }

    #[test]
    fn sampling_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = random_poly(&mut rng, 40);
        let back = coeffs_from_roots_of_unity(&eval_roots_of_unity(&c, 128));
        assert!(back[..40]
            .iter()
            .zip(&c)
            .all(|(a, b)| (a - b).norm() < 1e-14));
        assert!(back[40..].iter().all(|a| a.norm() < 1e-14));
    }

    #[test]
    fn aliasing_when_grid_is_small() {
        // 1 + z^4 on 4 points equals 2 everywhere.
        let c = [
            Complex64::new(1.0, 0.0),
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
            Complex64::new(1.0, 0.0),
        ];
        for v in eval_roots_of_unity(&c, 4) {
            assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        }
    }
}
