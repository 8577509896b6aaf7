//! Disc-algebra elements represented by truncated Taylor series.
//!
//! A [`DiscFunction`] stores the coefficients `c_0 … c_{N-1}` of a function
//! holomorphic on the open disc and continuous up to the boundary, together
//! with the working truncation order `N` and an ℓ¹ bound on everything that
//! has been discarded by retruncation so far (the *tail*). Boundary values at
//! the `M`-th roots of unity are computed with an FFT and may be cached.
//!
//! Every "is a unit" claim goes through [`Certificate`]: boundary winding
//! number zero plus a boundary modulus bounded away from zero.

mod boundary;
mod error;
mod fft;
mod sampled;
mod series;

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

pub use boundary::{Certificate, UNIT_RELATIVE_FLOOR};
pub use error::HoloError;
pub use sampled::sampling_grid;
pub use series::Solved;

/// Default working truncation order.
pub const DEFAULT_ORDER: usize = 256;
/// Default number of boundary sample points.
pub const DEFAULT_GRID: usize = 4096;

/// Points with modulus up to `1 + DOMAIN_SLACK` count as inside the closed disc.
pub const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone)]
struct BoundaryCache {
    grid: usize,
    values: Vec<Complex64>,
}

/// A disc-algebra element as a truncated Taylor polynomial.
#[derive(Debug, Clone)]
pub struct DiscFunction {
    coeffs: Vec<Complex64>,
    order: usize,
    tail: f64,
    cache: Option<Arc<BoundaryCache>>,
}

impl PartialEq for DiscFunction {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.coeffs == other.coeffs
    }
}

impl DiscFunction {
    /// Builds a function from Taylor coefficients. Coefficients at index
    /// `order` and beyond are dropped and their ℓ¹ norm is booked as tail.
    pub fn new(mut coeffs: Vec<Complex64>, order: usize) -> Self {
        assert!(order > 0, "truncation order must be positive");
        let mut tail = 0.0;
        if coeffs.len() > order {
            tail = coeffs[order..].iter().map(|c| c.norm()).sum();
            coeffs.truncate(order);
        }
        let mut f = DiscFunction {
            coeffs,
            order,
            tail,
            cache: None,
        };
        f.trim();
        f
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        Self::new(
            coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            order,
        )
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// The coordinate function `z`.
    pub fn identity(order: usize) -> Self {
        Self::new(
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            order,
        )
    }

    pub(crate) fn with_tail(mut self, tail: f64) -> Self {
        self.tail = tail;
        self
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if *last == Complex64::new(0.0, 0.0) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Nonzero-prefix of the coefficient vector (trailing zeros removed).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// ℓ¹ bound on coefficients discarded by retruncation so far.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of coefficient moduli; an upper bound for the sup over the closed disc.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Same coefficients, different working order.
    pub fn retruncate(&self, order: usize) -> Self {
        let tail = self.tail;
        let mut g = Self::new(self.coeffs.clone(), order);
        g.tail += tail;
        g
    }

    /// Evaluates `Σ c_k z^k` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, HoloError> {
        if z.norm() > 1.0 + DOMAIN_SLACK {
            return Err(HoloError::Domain { z });
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect(), self.order)
            .with_tail(self.tail * s.norm())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `f(r·z)`. Contractions (`r ≤ 1`) always succeed and keep the tail
    /// bound; a dilation needs an exact polynomial whose largest
    /// coefficient grows by at most `max_growth`.
    pub fn dilate(&self, r: f64, max_growth: f64) -> Option<Self> {
        if r > 1.0 && self.tail > 0.0 {
            return None;
        }
        let coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * r.powi(k as i32))
            .collect();
        let out = Self::new(coeffs, self.order).with_tail(self.tail);
        (r <= 1.0 || out.max_coeff_modulus() <= max_growth * self.max_coeff_modulus())
            .then_some(out)
    }

    /// Adds a constant to the zeroth coefficient.
    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c);
        } else {
            coeffs[0] += c;
        }
        Self::new(coeffs, self.order).with_tail(self.tail)
    }

    pub fn ring_op(&self, other: &Self, op: RingOp) -> Self {
        match op {
            RingOp::Add => self.add_sub(other, 1.0),
            RingOp::Sub => self.add_sub(other, -1.0),
            RingOp::Mul => self.mul_trunc(other),
        }
    }

    fn add_sub(&self, other: &Self, sign: f64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k) + other.coeff(k) * sign)
            .collect();
        Self::new(coeffs, self.order.max(other.order)).with_tail(self.tail + other.tail)
    }

    fn mul_trunc(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        if self.is_zero() || other.is_zero() {
            return Self::zero(order).with_tail(
                self.tail * other.l1_norm() + other.tail * self.l1_norm() + self.tail * other.tail,
            );
        }
        let full = fft::convolve(&self.coeffs, &other.coeffs);
        let discarded: f64 = full.iter().skip(order).map(|c| c.norm()).sum();
        let propagated =
            self.tail * other.l1_norm() + other.tail * self.l1_norm() + self.tail * other.tail;
        let mut coeffs = full;
        coeffs.truncate(order);
        Self::new(coeffs, order).with_tail(discarded + propagated)
    }

    /// Term-by-term derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::new(coeffs, self.order).with_tail(self.tail * self.order as f64)
    }

    /// Term-by-term antiderivative with the given constant term; the top
    /// coefficient that no longer fits is booked as tail.
    pub fn antiderivative(&self, constant: Complex64) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        let tail = self.tail;
        let mut g = Self::new(coeffs, self.order);
        g.tail += tail;
        g
    }

    /// Values at `exp(2πi j / grid)`, `j = 0 … grid-1`.
    pub fn boundary_values(&self, grid: usize) -> Vec<Complex64> {
        if let Some(cache) = &self.cache {
            if cache.grid == grid {
                return cache.values.clone();
            }
        }
        fft::eval_roots_of_unity(&self.coeffs, grid)
    }

    /// Interpolates samples at the `grid`-th roots of unity. The lower half
    /// of the spectrum (capped at `order`) is kept; the ℓ¹ norm of the rest
    /// is booked as tail.
    pub fn from_boundary_samples(values: &[Complex64], order: usize) -> Self {
        let mut coeffs = fft::coeffs_from_roots_of_unity(values);
        let keep = order.min(values.len() / 2);
        let tail = coeffs[keep..].iter().map(|c| c.norm()).sum();
        coeffs.truncate(keep);
        Self::new(coeffs, order).with_tail(tail)
    }

    /// Returns a copy carrying cached boundary samples on the given grid.
    pub fn with_boundary_cache(mut self, grid: usize) -> Self {
        let values = fft::eval_roots_of_unity(&self.coeffs, grid);
        self.cache = Some(Arc::new(BoundaryCache { grid, values }));
        self
    }

    /// Cached samples, if any, with their grid size.
    pub fn cached_samples(&self) -> Option<(usize, &[Complex64])> {
        self.cache.as_ref().map(|c| (c.grid, c.values.as_slice()))
    }

    /// Grid-approximated `(inf, sup)` of `|f|` on the unit circle. By the
    /// maximum principle the sup is also the sup over the closed disc. The
    /// true extrema differ from the grid values by at most
    /// `π · Σ k|c_k| / grid`.
    pub fn boundary_extrema(&self, grid: usize) -> (f64, f64) {
        boundary::extrema(&self.boundary_values(grid))
    }

    /// Lipschitz constant of `θ ↦ f(e^{iθ})` from the coefficient sum `Σ k|c_k|`.
    pub fn boundary_lipschitz(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm())
            .sum()
    }
}

impl Add for &DiscFunction {
    type Output = DiscFunction;
    fn add(self, rhs: &DiscFunction) -> DiscFunction {
        self.ring_op(rhs, RingOp::Add)
    }
}

impl Sub for &DiscFunction {
    type Output = DiscFunction;
    fn sub(self, rhs: &DiscFunction) -> DiscFunction {
        self.ring_op(rhs, RingOp::Sub)
    }
}

impl Mul for &DiscFunction {
    type Output = DiscFunction;
    fn mul(self, rhs: &DiscFunction) -> DiscFunction {
        self.ring_op(rhs, RingOp::Mul)
    }
}

impl Neg for &DiscFunction {
    type Output = DiscFunction;
    fn neg(self) -> DiscFunction {
        self.scale_real(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for DiscFunction {
            type Output = DiscFunction;
            fn $method(self, rhs: DiscFunction) -> DiscFunction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&DiscFunction> for DiscFunction {
            type Output = DiscFunction;
            fn $method(self, rhs: &DiscFunction) -> DiscFunction {
                (&self).$method(rhs)
            }
        }
        impl $tr<DiscFunction> for &DiscFunction {
            type Output = DiscFunction;
            fn $method(self, rhs: DiscFunction) -> DiscFunction {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DiscFunction {
    type Output = DiscFunction;
    fn neg(self) -> DiscFunction {
        -&self
    }
}
