//! Command-line driver: factor a matrix file into two exponentials, or verify
//! a factors file against its input.
//!
//! Exit codes: 0 success, 2 parse or validation, 3 precondition, 4 reduction
//! failed, 5 residual over tolerance, 1 internal.

pub mod format;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use discfact::factor::ErrorCategory;
use discfact::holofun::{DEFAULT_GRID, DEFAULT_ORDER};
use discfact::verify::{residual_report, Report};
use discfact::{
    factor_gl2, factor_sl2, Branch, Certificate, FactorConfig, FactorError, Factorization, MatFun,
    SpecialLinear,
};
use serde::Serialize;
use thiserror::Error;

pub use format::{Entries, FactorsFile, FormatError, Kind, MatrixFile, FORMAT_VERSION};

#[derive(Debug, Parser)]
#[command(
    name = "discfact",
    version,
    about = "Factor 2x2 matrices over the disc into two exponentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a matrix file and write the factors file.
    Factor(FactorArgs),
    /// Recompute the residual of a factors file against its input.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FactorArgs {
    /// Matrix file to factor.
    pub input: PathBuf,
    /// Destination of the factors file.
    #[arg(short, long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    pub factors: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Working truncation order.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub trunc: usize,
    /// Boundary grid size.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Largest accepted residual sup.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Budget for the input determinant defect.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_input: f64,
    /// Seed of the interior sample points.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Write the residual report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the sampled residuals as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl Default for CommonArgs {
    fn default() -> Self {
        CommonArgs {
            trunc: DEFAULT_ORDER,
            grid: DEFAULT_GRID,
            tol: 1e-8,
            tol_input: 1e-10,
            seed: 7,
            report: None,
            csv: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Factor(#[from] FactorError),

    #[error("residual sup {residual:.3e} exceeds tolerance {tol:.1e}")]
    Residual { residual: f64, tol: f64 },
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Format(FormatError::Write { .. }) => "io",
            CliError::Format(FormatError::Read { .. } | FormatError::Parse { .. }) => "parse",
            CliError::Format(FormatError::Invalid { .. }) | CliError::Validation(_) => "validation",
            CliError::Factor(e) => e.category().as_str(),
            CliError::Residual { .. } => "residual",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Format(FormatError::Write { .. }) => 1,
            CliError::Format(_) | CliError::Validation(_) => 2,
            CliError::Factor(e) => match e.category() {
                ErrorCategory::Validation => 2,
                ErrorCategory::Precondition | ErrorCategory::NotNullHomotopic => 3,
                ErrorCategory::ReductionFailed => 4,
                ErrorCategory::Internal => 1,
            },
            CliError::Residual { .. } => 5,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CliError::Factor(e) => e.certificate(),
            _ => None,
        }
    }

    /// One-line JSON description for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            error: &'a str,
            message: String,
            certificate: Option<&'a Certificate>,
        }
        serde_json::to_string(&Line {
            error: self.category(),
            message: self.to_string(),
            certificate: self.certificate(),
        })
        .expect("error lines serialize")
    }
}

/// What a successful command prints on stdout.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub branch: Branch,
    pub factor_count: u8,
    pub residual_sup: f64,
    pub det_defect: f64,
}

pub struct ParsedInput {
    pub kind: Kind,
    pub matrix: MatFun,
}

/// Reads a matrix file at the working order and checks its determinant:
/// `sl2` inputs must have `|det − 1| ≤ tol_input` on the boundary grid.
pub fn parse_input(path: &Path, common: &CommonArgs) -> Result<ParsedInput, CliError> {
    let file = MatrixFile::read(path)?;
    file.entries.validate("entries", common.trunc)?;
    let matrix = file.entries.to_matfun(common.trunc);
    if file.kind == Kind::Sl2 {
        let defect = matrix.det_defect(common.grid);
        if defect.is_nan() || defect > common.tol_input {
            return Err(CliError::Validation(format!(
                "det defect {defect:.3e} exceeds --tol-input {:.1e}",
                common.tol_input
            )));
        }
    }
    Ok(ParsedInput {
        kind: file.kind,
        matrix,
    })
}

pub fn run(cli: &Cli) -> Result<Summary, CliError> {
    match &cli.command {
        Command::Factor(args) => cmd_factor(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

pub fn cmd_factor(args: &FactorArgs) -> Result<Summary, CliError> {
    let common = &args.common;
    let input = parse_input(&args.input, common)?;
    let cfg = FactorConfig {
        grid: common.grid,
        det_tol: common.tol_input,
        ..FactorConfig::default()
    };
    let f = match input.kind {
        Kind::Sl2 => {
            let a = SpecialLinear::verify(input.matrix.clone(), common.grid, common.tol_input)
                .map_err(FactorError::from)?;
            factor_sl2(&a, &cfg)?
        }
        Kind::Gl2 => factor_gl2(&input.matrix, &cfg)?,
    };
    FactorsFile::new(input.kind, &f).write(&args.out)?;
    certify(&input.matrix, &f, common)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Summary, CliError> {
    let common = &args.common;
    let input = parse_input(&args.input, common)?;
    let factors = FactorsFile::read(&args.factors)?;
    if factors.trunc_order != common.trunc {
        return Err(CliError::Validation(format!(
            "factors truncated at order {}, working order is {}",
            factors.trunc_order, common.trunc
        )));
    }
    if factors.kind != input.kind {
        return Err(CliError::Validation(format!(
            "factors are of kind {:?}, input is {:?}",
            factors.kind, input.kind
        )));
    }
    certify(&input.matrix, &factors.factorization(), common)
}

/// Samples the residual, writes the requested outputs and applies `--tol`.
fn certify(a: &MatFun, f: &Factorization, common: &CommonArgs) -> Result<Summary, CliError> {
    let report = residual_report(a, f, common.grid, common.grid / 8, common.seed);
    if let Some(path) = &common.report {
        format::write_json(path, &report)?;
    }
    if let Some(path) = &common.csv {
        write_csv(path, &report)?;
    }
    if report.residual_sup.is_nan() || report.residual_sup > common.tol {
        return Err(CliError::Residual {
            residual: report.residual_sup,
            tol: common.tol,
        });
    }
    Ok(Summary {
        branch: report.branch,
        factor_count: report.factor_count,
        residual_sup: report.residual_sup,
        det_defect: report.det_defect,
    })
}

fn write_csv(path: &Path, report: &Report) -> Result<(), FormatError> {
    let mut out = String::from("re,im,residual\n");
    for p in &report.residual_grid {
        out.push_str(&format!("{},{},{}\n", p.z.re, p.z.im, p.residual));
    }
    let io = |source| FormatError::Write {
        path: path.to_owned(),
        source,
    };
    let mut file = fs::File::create(path).map_err(io)?;
    file.write_all(out.as_bytes()).map_err(io)
}
