//! Newton-type power series kernels and the certified unit operations built on them.

use num_complex::Complex64;

use super::fft::convolve;
use super::{Certificate, DiscFunction, HoloError};

/// Result of a certified unit operation with its boundary residual.
#[derive(Debug, Clone)]
pub struct Solved {
    pub value: DiscFunction,
    /// Grid sup of the defining equation's defect (e.g. `|f·g − 1|`).
    pub residual: f64,
    /// Unit certificate of the input.
    pub certificate: Certificate,
}

fn mul_trunc(f: &[Complex64], g: &[Complex64], n: usize) -> Vec<Complex64> {
    let f = &f[..f.len().min(n)];
    let g = &g[..g.len().min(n)];
    let mut out = convolve(f, g);
    out.resize(n, Complex64::default());
    out
}

/// Reciprocal series mod `z^n` by `g ← g(2 − f g)`, doubling the number of
/// correct coefficients each pass. Requires `f[0] != 0`.
pub(crate) fn inv_series(f: &[Complex64], n: usize) -> Vec<Complex64> {
    debug_assert!(!f.is_empty() && f[0] != Complex64::default());
    let mut g = vec![f[0].inv()];
    let mut m = 1;
    while m < n {
        let m2 = (2 * m).min(n);
        let mut e = mul_trunc(f, &g, m2);
        e.iter_mut().for_each(|x| *x = -*x);
        e[0] += 2.0;
        g = mul_trunc(&g, &e, m2);
        m = m2;
    }
    g.truncate(n);
    g
}

/// Principal-branch logarithm mod `z^n`: `∫ f'/f` plus `Log f(0)`.
pub(crate) fn log_series(f: &[Complex64], n: usize) -> Vec<Complex64> {
    let df: Vec<Complex64> = f
        .iter()
        .enumerate()
        .skip(1)
        .take(n.saturating_sub(1))
        .map(|(k, &c)| c * k as f64)
        .collect();
    let mut out = Vec::with_capacity(n);
    out.push(f[0].ln());
    if n > 1 {
        let q = mul_trunc(&df, &inv_series(f, n - 1), n - 1);
        out.extend(q.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
    }
    out
}

/// `exp(f)` mod `z^n` from the recurrence `k g_k = Σ_{j=1}^{k} j f_j g_{k-j}`.
pub(crate) fn exp_series_ode(f: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut g = Vec::with_capacity(n);
    g.push(f.first().copied().unwrap_or_default().exp());
    let weighted: Vec<Complex64> = f
        .iter()
        .enumerate()
        .take(n)
        .map(|(j, &c)| c * j as f64)
        .collect();
    for k in 1..n {
        let mut acc = Complex64::default();
        for j in 1..=k.min(weighted.len().saturating_sub(1)) {
            acc += weighted[j] * g[k - j];
        }
        g.push(acc / k as f64);
    }
    g
}

/// `exp(f)` mod `z^n` by Newton iteration `g ← g(1 + f − log g)`.
pub(crate) fn exp_series_newton(f: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut g = vec![f.first().copied().unwrap_or_default().exp()];
    let mut m = 1;
    while m < n {
        let m2 = (2 * m).min(n);
        let lg = log_series(&g, m2);
        let mut e: Vec<Complex64> = (0..m2)
            .map(|k| f.get(k).copied().unwrap_or_default() - lg[k])
            .collect();
        e[0] += 1.0;
        g = mul_trunc(&g, &e, m2);
        m = m2;
    }
    g.truncate(n);
    g
}

fn sup_defect(values: impl Iterator<Item = Complex64>) -> f64 {
    values.map(|v| v.norm()).fold(0.0, f64::max)
}

impl DiscFunction {
    /// Multiplicative inverse of a certified unit.
    pub fn invert(&self, grid: usize) -> Result<Solved, HoloError> {
        let certificate = self.require_unit(grid)?;
        let g = DiscFunction::new(inv_series(&self.coeffs, self.order), self.order);
        let grid = certificate.grid_size;
        let fv = self.boundary_values(grid);
        let gv = g.boundary_values(grid);
        let residual = sup_defect(fv.iter().zip(&gv).map(|(f, g)| f * g - 1.0));
        let tail = residual / certificate.min_boundary_modulus;
        Ok(Solved {
            value: g.with_tail(tail),
            residual,
            certificate,
        })
    }

    /// Logarithm of a certified unit, principal at `z = 0`.
    pub fn log(&self, grid: usize) -> Result<Solved, HoloError> {
        let certificate = self.require_unit(grid)?;
        let g = DiscFunction::new(log_series(&self.coeffs, self.order), self.order);
        let grid = certificate.grid_size;
        let fv = self.boundary_values(grid);
        let gv = g.boundary_values(grid);
        let residual = sup_defect(fv.iter().zip(&gv).map(|(f, g)| g.exp() - f));
        let tail = residual / certificate.min_boundary_modulus;
        Ok(Solved {
            value: g.with_tail(tail),
            residual,
            certificate,
        })
    }

    /// Square root of a certified unit, `exp(½ log f)`; principal at `z = 0`.
    pub fn sqrt(&self, grid: usize) -> Result<Solved, HoloError> {
        let log = self.log(grid)?;
        let r = log.value.scale_real(0.5).exp();
        let grid = log.certificate.grid_size;
        let fv = self.boundary_values(grid);
        let rv = r.boundary_values(grid);
        let residual = sup_defect(fv.iter().zip(&rv).map(|(f, r)| r * r - f));
        let tail = residual / log.certificate.min_boundary_modulus.sqrt();
        Ok(Solved {
            value: r.with_tail(tail),
            residual,
            certificate: log.certificate,
        })
    }

    /// `exp(f)` truncated to the working order.
    pub fn exp(&self) -> DiscFunction {
        let g = DiscFunction::new(exp_series_ode(&self.coeffs, self.order), self.order);
        let tail = self.tail * g.l1_norm() * self.tail.exp();
        g.with_tail(tail)
    }

    /// `exp(f)` by Newton iteration on the logarithm; agrees with [`Self::exp`].
    pub fn exp_newton(&self) -> DiscFunction {
        let g = DiscFunction::new(exp_series_newton(&self.coeffs, self.order), self.order);
        let tail = self.tail * g.l1_norm() * self.tail.exp();
        g.with_tail(tail)
    }
}
