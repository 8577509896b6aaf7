//! 2×2 matrices over the disc algebra.

mod expm;
mod point;

use num_complex::Complex64;
use thiserror::Error;

use crate::holofun::{sampling_grid, Certificate, DiscFunction, HoloError};

pub use expm::{
    cayley_hamilton_coefficients, exp_traceless, exp_traceless_series, series_terms_for,
};
pub use point::{exp_pointwise, PointMatrix};

/// Coefficient bound on `a + d` for the traceless tag.
pub const TRACELESS_TOL: f64 = 1e-12;
/// Boundary bound on `|det − 1|` for the special-linear tag.
pub const DET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error)]
pub enum MatError {
    #[error("determinant is not a certified unit (winding {:?}, boundary min {:.3e})",
        .0.winding, .0.min_boundary_modulus)]
    NotInvertible(Certificate),

    #[error("trace coefficients reach {defect:.3e}, above {tol:.1e}")]
    NotTraceless { defect: f64, tol: f64 },

    #[error("boundary sup of |det - 1| is {defect:.3e}, above {tol:.1e}")]
    NotSpecialLinear { defect: f64, tol: f64 },

    #[error(transparent)]
    Holo(#[from] HoloError),
}

/// A 2×2 matrix `[[a, b], [c, d]]` of disc functions.
#[derive(Debug, Clone, PartialEq)]
pub struct MatFun {
    pub a: DiscFunction,
    pub b: DiscFunction,
    pub c: DiscFunction,
    pub d: DiscFunction,
}

impl MatFun {
    pub fn new(a: DiscFunction, b: DiscFunction, c: DiscFunction, d: DiscFunction) -> Self {
        MatFun { a, b, c, d }
    }

    /// `M(r·z)` entrywise; see [`DiscFunction::dilate`].
    pub fn dilate(&self, r: f64, max_growth: f64) -> Option<Self> {
        let [a, b, c, d] = self.entries().map(|e| e.dilate(r, max_growth));
        Some(Self::new(a?, b?, c?, d?))
    }

    pub fn identity(order: usize) -> Self {
        Self::diag(DiscFunction::one(order), DiscFunction::one(order))
    }

    pub fn zero(order: usize) -> Self {
        let z = DiscFunction::zero(order);
        Self::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn diag(p: DiscFunction, q: DiscFunction) -> Self {
        let order = p.order().max(q.order());
        Self::new(p, DiscFunction::zero(order), DiscFunction::zero(order), q)
    }

    pub fn constant(m: &PointMatrix, order: usize) -> Self {
        Self::new(
            DiscFunction::constant(m.a, order),
            DiscFunction::constant(m.b, order),
            DiscFunction::constant(m.c, order),
            DiscFunction::constant(m.d, order),
        )
    }

    /// `[[1, h], [0, 1]]`.
    pub fn upper_shear(h: DiscFunction) -> Self {
        let order = h.order();
        Self::new(
            DiscFunction::one(order),
            h,
            DiscFunction::zero(order),
            DiscFunction::one(order),
        )
    }

    /// `[[1, 0], [g, 1]]`.
    pub fn lower_shear(g: DiscFunction) -> Self {
        let order = g.order();
        Self::new(
            DiscFunction::one(order),
            DiscFunction::zero(order),
            g,
            DiscFunction::one(order),
        )
    }

    pub fn entries(&self) -> [&DiscFunction; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn map(&self, f: impl Fn(&DiscFunction) -> DiscFunction) -> Self {
        Self::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }

    pub fn order(&self) -> usize {
        self.entries().iter().map(|e| e.order()).max().unwrap_or(1)
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.entries()
            .iter()
            .map(|e| e.max_coeff_modulus())
            .fold(0.0, f64::max)
    }

    pub fn retruncate(&self, order: usize) -> Self {
        self.map(|e| e.retruncate(order))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|e| e.scale(s))
    }

    /// Multiplies every entry by the scalar function `f`.
    pub fn scale_by(&self, f: &DiscFunction) -> Self {
        self.map(|e| e * f)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            &self.a + &o.a,
            &self.b + &o.b,
            &self.c + &o.c,
            &self.d + &o.d,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(
            &self.a - &o.a,
            &self.b - &o.b,
            &self.c - &o.c,
            &self.d - &o.d,
        )
    }

    /// Matrix product, entry-wise through the truncated ring operations.
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn det(&self) -> DiscFunction {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Determinant evaluated on a boundary grid and interpolated. Its
    /// rounding error scales with the sup of the entries rather than with
    /// their ℓ¹ norms.
    pub fn det_sampled(&self, grid: usize) -> DiscFunction {
        let order = self.order();
        let grid = sampling_grid(order, grid);
        let samples = self.boundary_values(grid);
        let values: Vec<Complex64> = samples.iter().map(PointMatrix::det).collect();
        let sup = samples
            .iter()
            .map(|p| p.a.norm().max(p.b.norm()).max(p.c.norm()).max(p.d.norm()))
            .fold(0.0, f64::max);
        let tail = [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|f| f.tail())
            .fold(0.0, f64::max);
        let f = DiscFunction::from_boundary_samples(&values, order);
        let total = f.tail() + 2.0 * tail * (2.0 * sup + tail);
        f.with_tail(total)
    }

    pub fn trace(&self) -> DiscFunction {
        &self.a + &self.d
    }

    pub fn det_trace(&self) -> (DiscFunction, DiscFunction) {
        (self.det(), self.trace())
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Largest coefficient modulus of the trace.
    pub fn trace_defect(&self) -> f64 {
        self.trace().max_coeff_modulus()
    }

    pub fn eval(&self, z: Complex64) -> Result<PointMatrix, HoloError> {
        Ok(PointMatrix::new(
            self.a.eval(z)?,
            self.b.eval(z)?,
            self.c.eval(z)?,
            self.d.eval(z)?,
        ))
    }

    /// Values at the `grid`-th roots of unity.
    pub fn boundary_values(&self, grid: usize) -> Vec<PointMatrix> {
        let [a, b, c, d] = self.entries().map(|e| e.boundary_values(grid));
        (0..grid)
            .map(|j| PointMatrix::new(a[j], b[j], c[j], d[j]))
            .collect()
    }

    /// Boundary sup of `|det − 1|`.
    pub fn det_defect(&self, grid: usize) -> f64 {
        self.det()
            .boundary_values(grid)
            .iter()
            .map(|v| (v - 1.0).norm())
            .fold(0.0, f64::max)
    }

    /// Adjugate times the inverse determinant; the determinant must be a
    /// certified unit.
    pub fn inverse(&self, grid: usize) -> Result<Inverse, MatError> {
        let det = self.det();
        let inv_det = match det.invert(grid) {
            Ok(s) => s,
            Err(HoloError::NotAUnit(cert)) => return Err(MatError::NotInvertible(cert)),
            Err(e) => return Err(e.into()),
        };
        let value = self.adjugate().scale_by(&inv_det.value);
        let residual = sup_distance(
            &self.boundary_values(grid),
            &value.boundary_values(grid),
            |m, n| m * n - PointMatrix::identity(),
        );
        Ok(Inverse {
            value,
            residual,
            certificate: inv_det.certificate,
        })
    }

    /// `P · self · P⁻¹`.
    pub fn conjugate(&self, p: &MatFun, grid: usize) -> Result<MatFun, MatError> {
        let p_inv = p.inverse(grid)?;
        Ok(p.mul(self).mul(&p_inv.value))
    }
}

/// A certified matrix inverse with its boundary residual `sup ‖M·M⁻¹ − I‖`.
#[derive(Debug, Clone)]
pub struct Inverse {
    pub value: MatFun,
    pub residual: f64,
    pub certificate: Certificate,
}

pub(crate) fn sup_distance(
    left: &[PointMatrix],
    right: &[PointMatrix],
    defect: impl Fn(PointMatrix, PointMatrix) -> PointMatrix,
) -> f64 {
    left.iter()
        .zip(right)
        .map(|(&m, &n)| defect(m, n).frobenius_norm())
        .fold(0.0, f64::max)
}

/// A matrix whose trace coefficients have been checked to vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct Traceless(MatFun);

impl Traceless {
    pub fn verify(m: MatFun, tol: f64) -> Result<Self, MatError> {
        let defect = m.trace_defect();
        if defect <= tol {
            Ok(Traceless(m))
        } else {
            Err(MatError::NotTraceless { defect, tol })
        }
    }

    pub fn zero(order: usize) -> Self {
        Traceless(MatFun::zero(order))
    }

    pub fn matrix(&self) -> &MatFun {
        &self.0
    }

    pub fn into_inner(self) -> MatFun {
        self.0
    }
}

/// A matrix whose boundary determinant defect has been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialLinear(MatFun);

impl SpecialLinear {
    pub fn verify(m: MatFun, grid: usize, tol: f64) -> Result<Self, MatError> {
        let defect = m.det_defect(grid);
        if defect <= tol {
            Ok(SpecialLinear(m))
        } else {
            Err(MatError::NotSpecialLinear { defect, tol })
        }
    }

    pub fn matrix(&self) -> &MatFun {
        &self.0
    }

    pub fn into_inner(self) -> MatFun {
        self.0
    }
}
