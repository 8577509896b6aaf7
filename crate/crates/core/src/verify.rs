//! Independent certification of factorizations.
//!
//! The residual oracle exponentiates the evaluated factors pointwise with
//! the Padé scaling-and-squaring routine; it never goes through the series
//! closed form used to build the factors.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::factor::{Branch, Factorization, StageTiming};
use crate::fixtures;
use crate::holofun::{Certificate, DiscFunction, HoloError};
use crate::mat2::{exp_pointwise, MatFun, PointMatrix};

/// Interior samples are drawn from `|z| ≤ INTERIOR_RADIUS`.
pub const INTERIOR_RADIUS: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub z: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub residual_sup: f64,
    pub residual_grid: Vec<ResidualPoint>,
    /// Largest trace coefficient of either factor.
    pub traceless_defect: f64,
    /// Sample sup of `|det(exp m1 · exp m2) − det A|`.
    pub det_defect: f64,
    pub certificates: Vec<Certificate>,
    pub branch: Branch,
    pub inner_branch: Option<Branch>,
    pub factor_count: u8,
    /// Wall-clock times; the only field that varies between identical runs.
    pub timings: Vec<StageTiming>,
}

/// Boundary roots of unity followed by seeded interior points.
pub fn sample_points(boundary_pts: usize, interior_pts: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = fixtures::rng(seed);
    let boundary =
        (0..boundary_pts).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / boundary_pts as f64));
    let interior: Vec<Complex64> = (0..interior_pts)
        .map(|_| {
            let r = INTERIOR_RADIUS * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..TAU))
        })
        .collect();
    boundary.chain(interior).collect()
}

pub fn residual_report(
    a: &MatFun,
    f: &Factorization,
    boundary_pts: usize,
    interior_pts: usize,
    seed: u64,
) -> Report {
    let start = Instant::now();
    let mut residual_grid = Vec::with_capacity(boundary_pts + interior_pts);
    let mut det_defect = 0.0f64;
    for z in sample_points(boundary_pts, interior_pts, seed) {
        let at = |m: &MatFun| m.eval(z).expect("sample points lie in the closed disc");
        let target = at(a);
        let product = exp_pointwise(&at(&f.m1)) * exp_pointwise(&at(&f.m2));
        residual_grid.push(ResidualPoint {
            z,
            residual: (product - target).frobenius_norm(),
        });
        det_defect = det_defect.max((product.det() - target.det()).norm());
    }
    let residual_sup = residual_grid.iter().map(|p| p.residual).fold(0.0, f64::max);
    let mut timings = f.timings.clone();
    timings.push(StageTiming {
        stage: "verify".into(),
        seconds: start.elapsed().as_secs_f64(),
    });
    Report {
        residual_sup,
        residual_grid,
        traceless_defect: traceless_check(&f.m1).max(traceless_check(&f.m2)),
        det_defect,
        certificates: f.certificates.clone(),
        branch: f.branch,
        inner_branch: f.inner_branch,
        factor_count: f.factor_count,
        timings,
    }
}

/// Certificate of a unit candidate; an uncertifiable winding is an error.
pub fn certify_unit(f: &DiscFunction, grid: usize) -> Result<Certificate, HoloError> {
    let cert = f.certificate(grid)?;
    if cert.winding.is_none() {
        return Err(HoloError::Uncertifiable {
            min: cert.min_boundary_modulus,
            floor: cert.floor,
        });
    }
    Ok(cert)
}

/// Largest coefficient modulus of the trace.
pub fn traceless_check(m: &MatFun) -> f64 {
    m.trace_defect()
}

/// Pointwise Frobenius residual of `exp(m1(z))·exp(m2(z))` against `A(z)`.
pub fn pointwise_residual(a: &PointMatrix, m1: &PointMatrix, m2: &PointMatrix) -> f64 {
    (exp_pointwise(m1) * exp_pointwise(m2) - *a).frobenius_norm()
}
