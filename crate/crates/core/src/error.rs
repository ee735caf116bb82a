use thiserror::Error;

use crate::rat::{format, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("non-reduced key {0:?}")]
    NonReducedKey(Vec<i64>),
    #[error("non-integral coefficient {value} in component {key:?} at exponent {exp}")]
    NonIntegral { key: Vec<i64>, exp: String, value: String },
    #[error("mixed exponent residues in component {0:?}")]
    MixedResidues(Vec<i64>),
    #[error("components {0:?} and {1:?} disagree although they are negatives of each other")]
    Asymmetric(Vec<i64>, Vec<i64>),
    #[error("insufficient input precision: need exponents up to {}, have {}", format(.required), .available.as_deref().map(format).unwrap_or_else(|| "none".into()))]
    InsufficientPrecision { required: Box<Rat>, available: Option<Box<Rat>> },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("degenerate truncation: {0}")]
    Degenerate(String),
    #[error("timed out: {0}")]
    Timeout(String),
    #[error("non-integral final coefficient {value} at {index}")]
    Integrality { index: String, value: String },
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Schema(_) => "schema",
            Error::NonReducedKey(_) => "non_reduced_key",
            Error::NonIntegral { .. } => "non_integral_coefficient",
            Error::MixedResidues(_) => "mixed_residues",
            Error::Asymmetric(..) => "asymmetric_components",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::Contract(_) => "contract_violation",
            Error::Degenerate(_) => "degenerate_truncation",
            Error::Timeout(_) => "timeout",
            Error::Integrality { .. } => "integrality",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
