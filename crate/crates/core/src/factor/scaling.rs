use num_complex::Complex64;

use super::reduction::beta_sup;
use super::FactorError;
use crate::holofun::DiscFunction;
use crate::mat2::{MatFun, Traceless};

/// Relative headroom of `δ` over the grid sup of `β`.
pub const DELTA_MARGIN: f64 = 1e-6;

/// `A = exp(constant_log) · scaled` with `scaled = diag(δ, 1/δ) · A`.
#[derive(Debug, Clone)]
pub struct ScaleSplit {
    pub delta: f64,
    pub beta_sup: f64,
    pub scaled: MatFun,
    /// `diag(−log δ, log δ)`.
    pub constant_log: Traceless,
    /// Boundary inf of `|trace(scaled)|`.
    pub trace_inf: f64,
}

/// Picks `δ ≥ max(1, sup (3+|d|)/|a|)` so that
/// `|δa + d/δ| ≥ δ|a| − |d|/δ ≥ 3 > 2` on the whole disc.
pub fn scale_split(a: &MatFun, grid: usize) -> Result<ScaleSplit, FactorError> {
    let cert = a.a.certificate(grid)?;
    if !cert.is_unit() {
        return Err(FactorError::Contract(format!(
            "(1,1) entry is not a certified unit (winding {:?}, boundary min {:.3e})",
            cert.winding, cert.min_boundary_modulus
        )));
    }
    let grid = cert.grid_size;
    let beta = beta_sup(&a.a, &a.d, grid);
    let delta = beta.max(1.0) * (1.0 + DELTA_MARGIN);
    let order = a.order();
    let up = Complex64::new(delta, 0.0);
    let down = Complex64::new(1.0 / delta, 0.0);
    let scaled = MatFun::new(
        a.a.scale(up),
        a.b.scale(up),
        a.c.scale(down),
        a.d.scale(down),
    );

    let trace_inf = scaled.trace().boundary_extrema(grid).0;
    if trace_inf <= 2.0 {
        return Err(FactorError::Internal(format!(
            "scaled trace dips to {trace_inf:.6} on the boundary (δ = {delta:.6e})"
        )));
    }
    let log_delta = Complex64::new(delta.ln(), 0.0);
    let constant_log = Traceless::verify(
        MatFun::diag(
            DiscFunction::constant(-log_delta, order),
            DiscFunction::constant(log_delta, order),
        ),
        0.0,
    )?;
    Ok(ScaleSplit {
        delta,
        beta_sup: beta,
        scaled,
        constant_log,
        trace_inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{exp_traceless, sup_distance, PointMatrix};

    const N: usize = 32;
    const GRID: usize = 256;

    #[test]
    fn identity_scaling() {
        let s = scale_split(&MatFun::identity(N), GRID).unwrap();
        assert!((s.beta_sup - 4.0).abs() < 1e-14);
        assert!((s.delta - 4.0 * (1.0 + DELTA_MARGIN)).abs() < 1e-12);
        let expected = s.delta + 1.0 / s.delta;
        assert!((s.trace_inf - expected).abs() < 1e-12);
        assert!(s.trace_inf > 4.24);
    }

    #[test]
    fn diagonal_scaling() {
        let a = MatFun::constant(&PointMatrix::real(2.0, 0.0, 0.0, 0.5), N);
        let s = scale_split(&a, GRID).unwrap();
        assert!((s.beta_sup - 1.75).abs() < 1e-14);
        // trace(B) = 2δ + 1/(2δ)
        assert!((s.trace_inf - (2.0 * s.delta + 0.5 / s.delta)).abs() < 1e-12);
        assert!((s.trace_inf - 3.7857).abs() < 1e-3);
    }

    #[test]
    fn constant_factor_recovers_input() {
        let p = |c: &[f64]| DiscFunction::from_real(c, N);
        let a = MatFun::new(
            p(&[2.0, 0.5]),
            p(&[1.0, 0.3]),
            p(&[0.2, 0.1]),
            p(&[0.0, 1.0]),
        );
        let s = scale_split(&a, GRID).unwrap();
        let back = exp_traceless(&s.constant_log).mul(&s.scaled);
        let err = sup_distance(
            &back.boundary_values(GRID),
            &a.boundary_values(GRID),
            |x, y| x - y,
        );
        assert!(err < 1e-13, "{err}");
        assert!(s.trace_inf > 2.0);
    }

    #[test]
    fn non_unit_first_entry_is_rejected() {
        let a = MatFun::diag(DiscFunction::identity(N), DiscFunction::one(N));
        assert!(matches!(
            scale_split(&a, GRID),
            Err(FactorError::Contract(_))
        ));
    }
}
