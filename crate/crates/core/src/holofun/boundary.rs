use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DiscFunction, HoloError};

/// Boundary moduli below `UNIT_RELATIVE_FLOOR · sup|f|` are treated as
/// numerically zero.
pub const UNIT_RELATIVE_FLOOR: f64 = 1e-12;

/// Finest grid the winding count will refine to before giving up.
const MAX_WINDING_GRID: usize = 1 << 20;

/// Argument-principle certificate of a boundary scan.
///
/// `winding` is `None` when the minimum boundary modulus sits below `floor`,
/// in which case the zero count cannot be trusted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub winding: Option<i64>,
    pub min_boundary_modulus: f64,
    pub max_boundary_modulus: f64,
    pub grid_size: usize,
    pub tail: f64,
    pub floor: f64,
}

impl Certificate {
    /// Winding zero and a boundary modulus above the floor: a certified unit.
    pub fn is_unit(&self) -> bool {
        self.winding == Some(0) && self.min_boundary_modulus > self.floor
    }
}

pub(crate) fn extrema(values: &[Complex64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| {
        let m = v.norm();
        (lo.min(m), hi.max(m))
    })
}

/// Total argument change along the sampled circle divided by 2π, or `None`
/// if some step turns by more than a quarter turn (grid too coarse).
fn winding_of_samples(values: &[Complex64]) -> Option<f64> {
    let mut total = 0.0;
    for (j, v) in values.iter().enumerate() {
        let next = values[(j + 1) % values.len()];
        let step = (next / v).arg();
        if step.abs() > FRAC_PI_2 {
            return None;
        }
        total += step;
    }
    Some(total / TAU)
}

impl DiscFunction {
    fn certification_floor(&self, sup: f64) -> f64 {
        (10.0 * self.tail).max(UNIT_RELATIVE_FLOOR * sup)
    }

    /// Scans the boundary and bundles winding number and modulus extrema.
    ///
    /// The effective grid is at least twice the coefficient count and is
    /// doubled while consecutive samples turn by more than a quarter turn.
    pub fn certificate(&self, grid: usize) -> Result<Certificate, HoloError> {
        if self.is_zero() {
            return Err(HoloError::ZeroFunction);
        }
        let mut grid = grid.max((2 * self.coeffs.len()).next_power_of_two());
        loop {
            let values = self.boundary_values(grid);
            let (min, max) = extrema(&values);
            let floor = self.certification_floor(max);
            let mut cert = Certificate {
                winding: None,
                min_boundary_modulus: min,
                max_boundary_modulus: max,
                grid_size: grid,
                tail: self.tail,
                floor,
            };
            if min <= floor {
                return Ok(cert);
            }
            match winding_of_samples(&values) {
                Some(w) => {
                    cert.winding = Some(w.round() as i64);
                    return Ok(cert);
                }
                None if grid < MAX_WINDING_GRID => grid *= 2,
                None => return Ok(cert),
            }
        }
    }

    /// Number of zeros in the open disc by the argument principle.
    pub fn winding_number(&self, grid: usize) -> Result<i64, HoloError> {
        let cert = self.certificate(grid)?;
        cert.winding.ok_or(HoloError::Uncertifiable {
            min: cert.min_boundary_modulus,
            floor: cert.floor,
        })
    }

    /// Certificate if `self` is a certified unit, `NotAUnit` otherwise.
    pub fn require_unit(&self, grid: usize) -> Result<Certificate, HoloError> {
        let cert = self.certificate(grid)?;
        if cert.is_unit() {
            Ok(cert)
        } else {
            Err(HoloError::NotAUnit(cert))
        }
    }
}
