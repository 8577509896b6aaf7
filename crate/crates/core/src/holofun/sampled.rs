//! Unit operations computed from boundary samples.
//!
//! A holomorphic function of a certified unit is evaluated pointwise on a
//! grid of roots of unity and interpolated back to coefficients. Unlike
//! the coefficient-space kernels, the rounding error scales with the sup of
//! the result rather than with ℓ¹ norms of intermediates, which matters for
//! functions whose modulus varies over many orders of magnitude.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::series::Solved;
use super::{Certificate, DiscFunction, HoloError};

/// Sampling grid for a result truncated at `order`.
pub fn sampling_grid(order: usize, grid: usize) -> usize {
    grid.max(4 * order).next_power_of_two()
}

fn sup_defect(values: impl Iterator<Item = Complex64>) -> f64 {
    values.map(|v| v.norm()).fold(0.0, f64::max)
}

impl DiscFunction {
    /// `g(f)` evaluated pointwise and interpolated; the spectrum above the
    /// working order is booked as tail.
    pub fn map_sampled(&self, grid: usize, g: impl Fn(Complex64) -> Complex64) -> DiscFunction {
        let grid = sampling_grid(self.order, grid);
        let values: Vec<Complex64> = self.boundary_values(grid).into_iter().map(g).collect();
        DiscFunction::from_boundary_samples(&values, self.order)
    }

    /// Multiplicative inverse of a certified unit, from boundary samples.
    pub fn invert_sampled(&self, grid: usize) -> Result<Solved, HoloError> {
        let certificate = self.require_unit(grid)?;
        let grid = sampling_grid(self.order, certificate.grid_size);
        let g = self.map_sampled(grid, |v| 1.0 / v);
        let fv = self.boundary_values(grid);
        let gv = g.boundary_values(grid);
        let residual = sup_defect(fv.iter().zip(&gv).map(|(f, g)| f * g - 1.0));
        let min = certificate.min_boundary_modulus;
        let inherited = self.tail / (min * (min - self.tail));
        let tail = g.tail() + residual / min + inherited;
        Ok(Solved {
            value: g.with_tail(tail),
            residual,
            certificate,
        })
    }

    /// Logarithm of a certified unit from the continuous boundary argument,
    /// principal at `z = 0`.
    pub fn log_sampled(&self, grid: usize) -> Result<Solved, HoloError> {
        let certificate = self.require_unit(grid)?;
        let grid = sampling_grid(self.order, certificate.grid_size);
        let fv = self.boundary_values(grid);
        let logs = unwrapped_log(&fv, &certificate)?;
        let mut g = DiscFunction::from_boundary_samples(&logs, self.order);

        // Pin the branch: Im g(0) must equal the principal argument of f(0).
        let principal = self.coeff(0).ln();
        let turns = ((g.coeff(0).im - principal.im) / TAU).round();
        if turns != 0.0 {
            let tail = g.tail();
            g = g
                .add_constant(Complex64::new(0.0, -TAU * turns))
                .with_tail(tail);
        }

        let gv = g.boundary_values(grid);
        let residual = sup_defect(fv.iter().zip(&gv).map(|(f, g)| g.exp() - f));
        let min = certificate.min_boundary_modulus;
        let inherited = -(1.0 - self.tail / min).ln();
        let tail = g.tail() + residual / min + inherited;
        Ok(Solved {
            value: g.with_tail(tail),
            residual,
            certificate,
        })
    }
}

/// `ln|f| + i·arg f` along the circle with the argument made continuous.
fn unwrapped_log(values: &[Complex64], cert: &Certificate) -> Result<Vec<Complex64>, HoloError> {
    let mut out = Vec::with_capacity(values.len());
    let mut arg = values[0].arg();
    for (j, v) in values.iter().enumerate() {
        if j > 0 {
            let step = (v / values[j - 1]).arg();
            if step.abs() > std::f64::consts::FRAC_PI_2 {
                return Err(HoloError::Uncertifiable {
                    min: cert.min_boundary_modulus,
                    floor: cert.floor,
                });
            }
            arg += step;
        }
        out.push(Complex64::new(v.norm().ln(), arg));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 64;

    #[test]
    fn sampled_kernels_match_series_kernels() {
        let f = DiscFunction::new(
            vec![
                Complex64::new(-2.0, 0.5),
                Complex64::new(0.7, -0.2),
                Complex64::new(0.1, 0.4),
                Complex64::new(-0.3, 0.0),
            ],
            256,
        );
        let inv = f.invert_sampled(1024).unwrap();
        let reference = f.invert(1024).unwrap();
        assert!((&inv.value - &reference.value).max_coeff_modulus() < 1e-13);
        assert!(inv.residual < 1e-13, "{}", inv.residual);

        let log = f.log_sampled(1024).unwrap();
        let reference = f.log(1024).unwrap();
        assert!((&log.value - &reference.value).max_coeff_modulus() < 1e-13);
        assert!((log.value.coeff(0) - f.coeff(0).ln()).norm() < 1e-13);
    }

    #[test]
    fn log_of_wide_range_unit() {
        // e^{8z}: modulus from e^{-8} to e^{8} on the circle.
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for k in 1..60 {
            let prev = coeffs[k - 1];
            coeffs.push(prev * 8.0 / k as f64);
        }
        let f = DiscFunction::new(coeffs, N);
        let log = f.log_sampled(1024).unwrap();
        assert!((log.value.coeff(1) - Complex64::new(8.0, 0.0)).norm() < 1e-10);
        assert!(log.value.coeff(0).norm() < 1e-10);
        assert!(log.value.coeffs().iter().skip(2).all(|c| c.norm() < 1e-10));
    }

    #[test]
    fn non_units_are_rejected() {
        assert!(DiscFunction::identity(N).invert_sampled(256).is_err());
        assert!(DiscFunction::identity(N).log_sampled(256).is_err());
    }
}
