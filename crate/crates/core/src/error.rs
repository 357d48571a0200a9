use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("material '{material}' lacks property '{property}'")]
    MissingProperty {
        material: String,
        property: &'static str,
    },
    #[error("outside validity domain: {0}")]
    Domain(String),
    #[error(
        "displacement ratio {ratio:.3} lies between rule-of-thumb bands ({band}); use total_energy instead"
    )]
    AmbiguousBand { ratio: f64, band: &'static str },
    #[error("unit error: {0}")]
    Unit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn missing(material: &str, property: &'static str) -> Self {
        Error::MissingProperty {
            material: material.to_string(),
            property,
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
