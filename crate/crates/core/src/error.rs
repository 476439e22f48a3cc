use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interpolation nodes {first} and {second} coincide")]
    DuplicateNode { first: usize, second: usize },

    #[error("root iteration did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence { iterations: usize, worst_residual: f64 },

    #[error("polynomial division left a remainder of relative size {residual:e}")]
    InexactDivision { residual: f64 },

    #[error("polynomial has degree {degree}; at least {required} is required")]
    DegreeTooLow { degree: isize, required: usize },

    #[error("frozen index m = {m} is outside 1..={l}")]
    BadIndex { m: usize, l: usize },

    #[error("characteristic polynomial has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: isize },

    #[error("gcd(m, l + 1) = {d} > 1 for l = {l}, m = {m}; the non-degenerate solver does not apply")]
    DegenerateConfiguration { l: usize, m: usize, d: usize },

    #[error("gcd(m, l + 1) = 1 for l = {l}, m = {m}; the configuration is not degenerate")]
    NotDegenerate { l: usize, m: usize },

    #[error("expected {expected} values, got {found}")]
    WrongCount { expected: usize, found: usize },

    #[error("a-priori data does not match the configuration: {0}")]
    SideDataMismatch(String),

    #[error("adaptive quadrature did not reach tolerance (last change {last_change:e})")]
    QuadratureFailure { last_change: f64 },

    #[error("no sign change of R(rho) around rho = {n}")]
    BracketFailure { n: usize },

    #[error("value expected to be real has imaginary part {imag:e}")]
    ComplexResidue { imag: f64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),
}

impl Error {
    /// Variant name, stable for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateNode { .. } => "DuplicateNode",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InexactDivision { .. } => "InexactDivision",
            Error::DegreeTooLow { .. } => "DegreeTooLow",
            Error::BadIndex { .. } => "BadIndex",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::DegenerateConfiguration { .. } => "DegenerateConfiguration",
            Error::NotDegenerate { .. } => "NotDegenerate",
            Error::WrongCount { .. } => "WrongCount",
            Error::SideDataMismatch(_) => "SideDataMismatch",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::ComplexResidue { .. } => "ComplexResidue",
            Error::InvalidPotential(_) => "InvalidPotential",
        }
    }
}
