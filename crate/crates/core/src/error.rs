use crate::models::Site;

/// Errors raised by model construction, oracles and samplers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("self-coupling undefined at site {0:?}")]
    SelfCoupling(Site),

    #[error("dimension mismatch: {what} has {got} entries, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("model family `{family}` needs a disorder realization")]
    MissingDisorder { family: &'static str },

    #[error("volume has {sites} sites, above the enumeration bound {bound}; use monte-carlo")]
    EnumerationBound { sites: usize, bound: usize },

    #[error("divergent sum: alpha = {alpha} must exceed 1")]
    DivergentSum { alpha: f64 },

    #[error("invalid {name} = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("volume mismatch: {0}")]
    VolumeMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(
        name: &'static str,
        value: impl ToString,
        expected: &'static str,
    ) -> Self {
        Error::InvalidParameter {
            name,
            value: value.to_string(),
            expected,
        }
    }
}
