use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid state: trace is {0}")]
    BadTrace(f64),

    #[error("vectors do not span a plane (Gram determinant {0:e})")]
    DegenerateSpan(f64),

    #[error("{name} = {value} lies outside {domain}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("degenerate family: sin(2θ) = {0:e}")]
    DegenerateFamily(f64),

    #[error("measurement axis is not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("invalid effect: |η| + |r| = {0} exceeds 1")]
    InvalidEffect(f64),

    #[error("malformed outcome counts: {0}")]
    MalformedCounts(&'static str),

    #[error("correlator {0} lies outside [-1, 1]")]
    CorrelatorOutOfRange(f64),

    #[error("correlation matrix has rank < 2 (second singular value {0:e})")]
    DegenerateCorrelation(f64),

    #[error("{outcomes}^{settings} deterministic strategies exceed the limit")]
    TooManyStrategies { settings: usize, outcomes: usize },

    #[error("inconsistent assemblage: marginals differ by {0:e}")]
    InconsistentAssemblage(f64),

    #[error("unsupported assemblage shape: {0}")]
    Shape(&'static str),

    #[error("conic solver failed: {0}")]
    Solver(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
