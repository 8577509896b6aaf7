//! JSON documents read and written by the CLI.
//!
//! Coefficients are `[re, im]` pairs. Floats are written in their shortest
//! round-trip decimal form and parsed with correct rounding, so a document
//! re-read from disk yields bit-identical coefficients.

use std::fs;
use std::path::{Path, PathBuf};

use discfact::factor::Plan;
use discfact::{Branch, Certificate, DiscFunction, Factorization, MatFun};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    /// Syntax or schema violation; the message carries line and column.
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{field}: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sl2,
    Gl2,
}

pub type Coeffs = Vec<[f64; 2]>;

/// The four entries of `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entries {
    pub a: Coeffs,
    pub b: Coeffs,
    pub c: Coeffs,
    pub d: Coeffs,
}

impl Entries {
    pub fn from_matfun(m: &MatFun) -> Self {
        let [a, b, c, d] = m.entries().map(coeffs_of);
        Entries { a, b, c, d }
    }

    fn named(&self) -> [(&'static str, &Coeffs); 4] {
        [
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
        ]
    }

    /// Non-empty lists of finite pairs, none longer than `order`.
    pub fn validate(&self, prefix: &str, order: usize) -> Result<(), FormatError> {
        for (name, coeffs) in self.named() {
            let field = format!("{prefix}.{name}");
            if coeffs.is_empty() {
                return Err(invalid(field, "coefficient list is empty"));
            }
            if coeffs.len() > order {
                return Err(invalid(
                    field,
                    format!(
                        "{} coefficients exceed truncation order {order}",
                        coeffs.len()
                    ),
                ));
            }
            if let Some(k) = coeffs.iter().position(|p| !p.iter().all(|x| x.is_finite())) {
                return Err(invalid(format!("{field}[{k}]"), "non-finite coefficient"));
            }
        }
        Ok(())
    }

    pub fn to_matfun(&self, order: usize) -> MatFun {
        let [a, b, c, d] = self.named().map(|(_, coeffs)| {
            DiscFunction::new(
                coeffs
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
                order,
            )
        });
        MatFun::new(a, b, c, d)
    }
}

fn coeffs_of(f: &DiscFunction) -> Coeffs {
    let coeffs: Coeffs = f.coeffs().iter().map(|c| [c.re, c.im]).collect();
    if coeffs.is_empty() {
        vec![[0.0, 0.0]]
    } else {
        coeffs
    }
}

fn check_version(version: &str) -> Result<(), FormatError> {
    if version != FORMAT_VERSION {
        return Err(invalid(
            "format_version",
            format!("unsupported version {version:?}, expected {FORMAT_VERSION:?}"),
        ));
    }
    Ok(())
}

/// A matrix of truncated power series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub format_version: String,
    pub kind: Kind,
    pub trunc_order: usize,
    pub entries: Entries,
}

impl MatrixFile {
    pub fn new(kind: Kind, m: &MatFun) -> Self {
        MatrixFile {
            format_version: FORMAT_VERSION.into(),
            kind,
            trunc_order: m.order(),
            entries: Entries::from_matfun(m),
        }
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        let file: Self = read_json(path)?;
        file.validate()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        write_json(path, self)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        check_version(&self.format_version)?;
        if self.trunc_order == 0 {
            return Err(invalid("trunc_order", "must be positive"));
        }
        self.entries.validate("entries", self.trunc_order)
    }

    pub fn matrix(&self) -> MatFun {
        self.entries.to_matfun(self.trunc_order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanRecord {
    pub lower: [f64; 2],
    pub radius: f64,
    pub gap: f64,
}

impl From<Plan> for PlanRecord {
    fn from(p: Plan) -> Self {
        PlanRecord {
            lower: [p.lower.re, p.lower.im],
            radius: p.radius,
            gap: p.gap,
        }
    }
}

impl From<PlanRecord> for Plan {
    fn from(p: PlanRecord) -> Self {
        Plan {
            lower: Complex64::new(p.lower[0], p.lower[1]),
            radius: p.radius,
            gap: p.gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub branch: Branch,
    pub inner_branch: Option<Branch>,
    pub factor_count: u8,
    /// Boundary residual measured by the factorization itself.
    pub residual: f64,
    pub delta: Option<f64>,
    pub plan: Option<PlanRecord>,
    pub certificates: Vec<Certificate>,
}

/// `A = exp(m1) · exp(m2)` together with the metadata of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorsFile {
    pub format_version: String,
    pub kind: Kind,
    pub trunc_order: usize,
    pub m1: Entries,
    pub m2: Entries,
    pub metadata: Metadata,
}

impl FactorsFile {
    pub fn new(kind: Kind, f: &Factorization) -> Self {
        FactorsFile {
            format_version: FORMAT_VERSION.into(),
            kind,
            trunc_order: f.m1.order(),
            m1: Entries::from_matfun(&f.m1),
            m2: Entries::from_matfun(&f.m2),
            metadata: Metadata {
                branch: f.branch,
                inner_branch: f.inner_branch,
                factor_count: f.factor_count,
                residual: f.residual,
                delta: f.delta,
                plan: f.plan.map(PlanRecord::from),
                certificates: f.certificates.clone(),
            },
        }
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        let file: Self = read_json(path)?;
        file.validate()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        write_json(path, self)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        check_version(&self.format_version)?;
        if self.trunc_order == 0 {
            return Err(invalid("trunc_order", "must be positive"));
        }
        self.m1.validate("m1", self.trunc_order)?;
        self.m2.validate("m2", self.trunc_order)
    }

    pub fn factorization(&self) -> Factorization {
        let meta = &self.metadata;
        Factorization {
            m1: self.m1.to_matfun(self.trunc_order),
            m2: self.m2.to_matfun(self.trunc_order),
            factor_count: meta.factor_count,
            branch: meta.branch,
            inner_branch: meta.inner_branch,
            residual: meta.residual,
            certificates: meta.certificates.clone(),
            delta: meta.delta,
            plan: meta.plan.map(Plan::from),
            timings: Vec::new(),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| FormatError::Write {
        path: path.to_owned(),
        source,
    })
}
