use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain where a formula is valid.
    #[error("domain error: {0}")]
    Domain(String),

    /// A row's constants violate a validity gate (c1 > 0, c5 < 1, c1^2 > c5).
    #[error("invalid row: {0}")]
    InvalidRow(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("tail envelope violated at t = {t}: integrand {value:e} exceeds envelope {envelope:e}")]
    Envelope { t: f64, value: f64, envelope: f64 },

    #[error("external data required: {0}")]
    ExternalData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no feasible point: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
