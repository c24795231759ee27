use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: argument {value} is outside the supported domain")]
    Domain { function: &'static str, value: f64 },

    #[error("integrand returned a non-finite value at x = {abscissa}")]
    Evaluation { abscissa: f64 },

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("omega = {omega} eV lies outside the tabulated range [{min}, {max}] eV")]
    Extrapolation { omega: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64) -> Self {
        Error::Domain { function, value }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Evaluation { .. } | Error::Divergence(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
