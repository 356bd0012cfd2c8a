use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("policy {policy} does not support the {model} model")]
    UnsupportedModel { policy: &'static str, model: &'static str },

    #[error("no crossover in [{m_low}, {m_high}]: {detail}")]
    NoCrossover { m_low: usize, m_high: usize, detail: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
