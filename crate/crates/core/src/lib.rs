//! Factorization of 2×2 matrix functions over the disc algebra into two
//! exponentials, on truncated Taylor series with certified preconditions.
//!
//! - [`holofun`]: scalar disc functions, series kernels, unit certificates.
//! - [`mat2`]: 2×2 matrices of disc functions and their exponentials.
//! - [`factor`]: the factorization pipelines for `SL₂` and `GL₂`.
//! - [`verify`]: residual reports against an independent pointwise oracle.
//! - [`fixtures`]: seeded inputs used by tests and the CLI.

pub mod factor;
pub mod fixtures;
pub mod holofun;
pub mod mat2;
pub mod verify;

pub use factor::{factor_gl2, factor_sl2, Branch, FactorConfig, FactorError, Factorization};
pub use holofun::{Certificate, DiscFunction, HoloError};
pub use mat2::{MatFun, PointMatrix, SpecialLinear, Traceless};
