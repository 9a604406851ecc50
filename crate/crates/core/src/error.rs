use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Series index attached to a failure inside a truncated sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermIndex {
    Outage { k: usize, l: usize },
    Capacity { k: usize, n: usize, l: usize },
}

impl std::fmt::Display for TermIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TermIndex::Outage { k, l } => write!(f, "(k={k}, l={l})"),
            TermIndex::Capacity { k, n, l } => write!(f, "(k={k}, n={n}, l={l})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at argument {0}")]
    Pole(Complex64),

    #[error("pole collision: top parameter {a} minus bottom parameter {b} is a positive integer")]
    PoleCollision { a: f64, b: f64 },

    #[error("no vertical contour separates the pole families (left boundary {left}, right boundary {right})")]
    NoSeparatingContour { left: f64, right: f64 },

    #[error("missing parameter group `{0}` needed to place the contour")]
    MissingParameterGroup(&'static str),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("quadrature did not converge after {evals} panel evaluations (estimate {estimate:e}, error {error:e})")]
    QuadratureNonConvergence { evals: usize, estimate: f64, error: f64 },

    #[error("contour integral has imaginary residue {imag:e} above tolerance {tol:e}")]
    ImaginaryResidue { imag: f64, tol: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("series term {index} failed: {source}")]
    SeriesTerm {
        index: TermIndex,
        #[source]
        source: Box<Error>,
    },

    #[error("density {value:e} at {gamma} is below -1e-4; truncation is inadequate")]
    NegativeDensity { gamma: f64, value: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn at(self, index: TermIndex) -> Self {
        Error::SeriesTerm {
            index,
            source: Box::new(self),
        }
    }

    /// Short machine-readable class name, used in CSV failure flags.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Pole(_) => "pole",
            Error::PoleCollision { .. } => "pole_collision",
            Error::NoSeparatingContour { .. } => "no_contour",
            Error::MissingParameterGroup(_) => "missing_group",
            Error::InvalidParameters(_) => "invalid_parameters",
            Error::QuadratureNonConvergence { .. } => "quadrature",
            Error::ImaginaryResidue { .. } => "imaginary_residue",
            Error::NonFinite(_) => "non_finite",
            Error::SeriesTerm { source, .. } => source.class(),
            Error::NegativeDensity { .. } => "negative_density",
            Error::InvalidConfig(_) => "invalid_config",
        }
    }
}
