use thiserror::Error;

/// Errors raised while building models or computing intervals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("{u} is not a point of the support grid")]
    NotASupportPoint { u: f64 },

    #[error("theta1 range is degenerate at vartheta = {vartheta}")]
    DegenerateRange { vartheta: f64 },

    #[error("quadrature did not reach tolerance within {max_subdivisions} subdivisions (error estimate {estimate:e})")]
    QuadratureFailure { max_subdivisions: usize, estimate: f64 },

    #[error("{stage}: target {target} is not bracketed on [{lo}, {hi}] (values {f_lo}, {f_hi})")]
    RootBracketFailure {
        stage: &'static str,
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("design with {cells} (k1, k2) cells is too large for the brute-force oracle (limit {limit})")]
    DesignTooLarge { cells: usize, limit: usize },

    #[error("coverage sweep failed at vartheta = {vartheta}: {source}")]
    SweepPoint {
        vartheta: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
