//! Factorization of `SL₂` and `GL₂` matrix functions into two exponentials.
//!
//! The generic route: conjugate by a shear so the `(1,1)` entry becomes a
//! unit, scale by `diag(δ, 1/δ)` until the trace stays above 2 in modulus,
//! diagonalize the scaled matrix with an explicit eigenvector matrix and take
//! the logarithm of the diagonal. Matrices with trace `±2` take a shortcut.

mod diagonal;
mod parabolic;
mod pipeline;
mod plan;
mod pointwise;
mod reduction;
mod scaling;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::holofun::{Certificate, HoloError, DEFAULT_GRID};
use crate::mat2::{exp_pointwise, MatError, MatFun};

pub use diagonal::{
    dominant_root, eigen_conjugator, log_traceless, log_traceless_point, log_via_diagonalization,
    Conjugator, DiagonalLog, RootPair, DET_P_FLOOR,
};
pub use parabolic::{detect_parabolic, factor_parabolic, Parabolic, PARABOLIC_TOL};
pub use pipeline::{factor_gl2, factor_sl2, FACTOR_TRACE_TOL};
pub use plan::{plans, Plan, DILATION_GROWTH, MAX_DILATION, MAX_PLANS, MIN_DILATION};
pub use pointwise::{pointwise_traceless_split, TracelessPoint, TracelessSplit};
pub use reduction::{
    reduction_candidates, unimodular_reduction, ReductionRecord, BETA_ACCEPT, MAX_CANDIDATES,
};
pub use scaling::{scale_split, ScaleSplit, DELTA_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ParabolicPlus,
    ParabolicMinus,
    Generic,
    Gl2,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::ParabolicPlus => "parabolic_plus",
            Branch::ParabolicMinus => "parabolic_minus",
            Branch::Generic => "generic",
            Branch::Gl2 => "gl2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// `A = exp(m1) · exp(m2)` with certification metadata.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub m1: MatFun,
    pub m2: MatFun,
    pub factor_count: u8,
    pub branch: Branch,
    /// Branch taken by the inner `SL₂` factorization of a `GL₂` input.
    pub inner_branch: Option<Branch>,
    /// Boundary-grid sup of the Frobenius residual.
    pub residual: f64,
    pub certificates: Vec<Certificate>,
    /// Scaling `δ` of the generic branch.
    pub delta: Option<f64>,
    /// Preconditioning of the generic branch.
    pub plan: Option<Plan>,
    pub timings: Vec<StageTiming>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorConfig {
    pub grid: usize,
    /// Seed of the pseudorandom phases of the stable-rank search.
    pub seed: u64,
    /// Budget for `|det − 1|` of matrices handed to the `SL₂` pipeline.
    pub det_tol: f64,
    /// Boundary residual at which the search over reduction candidates stops.
    pub residual_target: f64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            grid: DEFAULT_GRID,
            seed: 0x5eed,
            det_tol: crate::mat2::DET_TOL,
            residual_target: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCategory {
    Validation,
    Precondition,
    NotNullHomotopic,
    ReductionFailed,
    Internal,
}

impl ErrorCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::Validation => "validation",
            ErrorCategory::Precondition => "precondition",
            ErrorCategory::NotNullHomotopic => "not-null-homotopic",
            ErrorCategory::ReductionFailed => "reduction-failed",
            ErrorCategory::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum FactorError {
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("determinant winds {:?} times around 0; the map is not null-homotopic", .0.winding)]
    NotNullHomotopic(Certificate),

    #[error("no shear made the (1,1) entry a certified unit after {attempts} candidates")]
    ReductionFailed { attempts: usize },

    #[error("eigenvector matrix has a degenerate determinant (boundary min {:.3e})",
        .0.min_boundary_modulus)]
    DegenerateConjugator(Certificate),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Mat(#[from] MatError),

    #[error(transparent)]
    Holo(#[from] HoloError),
}

impl FactorError {
    pub fn category(&self) -> ErrorCategory {
        match self {
            FactorError::Precondition(_) => ErrorCategory::Precondition,
            FactorError::NotNullHomotopic(_) => ErrorCategory::NotNullHomotopic,
            FactorError::ReductionFailed { .. } => ErrorCategory::ReductionFailed,
            FactorError::Contract(_)
            | FactorError::Internal(_)
            | FactorError::DegenerateConjugator(_) => ErrorCategory::Internal,
            FactorError::Mat(MatError::NotSpecialLinear { .. } | MatError::NotTraceless { .. }) => {
                ErrorCategory::Validation
            }
            FactorError::Mat(_) | FactorError::Holo(_) => ErrorCategory::Precondition,
        }
    }

    /// Certificate attached to the failure, if any.
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            FactorError::NotNullHomotopic(c)
            | FactorError::DegenerateConjugator(c)
            | FactorError::Holo(HoloError::NotAUnit(c))
            | FactorError::Mat(MatError::NotInvertible(c))
            | FactorError::Mat(MatError::Holo(HoloError::NotAUnit(c))) => Some(c),
            _ => None,
        }
    }
}

/// Grid sup of `‖exp(m1(z))·exp(m2(z)) − A(z)‖_F` with the exponentials taken
/// pointwise, as an independent verifier would.
pub(crate) fn boundary_residual(a: &MatFun, m1: &MatFun, m2: &MatFun, grid: usize) -> f64 {
    let (av, m1v, m2v) = (
        a.boundary_values(grid),
        m1.boundary_values(grid),
        m2.boundary_values(grid),
    );
    av.iter()
        .zip(m1v.iter().zip(&m2v))
        .map(|(a, (x, y))| (exp_pointwise(x) * exp_pointwise(y) - *a).frobenius_norm())
        .fold(0.0, f64::max)
}
