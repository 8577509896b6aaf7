use num_complex::Complex64;
use thiserror::Error;

use super::Certificate;

#[derive(Debug, Clone, Error)]
pub enum HoloError {
    #[error("point {z} lies outside the closed unit disc")]
    Domain { z: Complex64 },

    #[error("the zero function has no inverse, logarithm or root")]
    ZeroFunction,

    #[error("not a unit of the disc algebra (winding {winding:?}, boundary min {min:.3e})",
        winding = .0.winding, min = .0.min_boundary_modulus)]
    NotAUnit(Certificate),

    #[error("boundary modulus {min:.3e} is below the certification floor {floor:.3e}")]
    Uncertifiable { min: f64, floor: f64 },
}
