use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported catalog entry: {0}")]
    UnsupportedCatalog(String),

    #[error("derivative requested at kink x = {location}; use the kink metadata")]
    KinkEvaluation { location: f64 },

    #[error("integrand returned a non-finite value at x = {abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    #[error("oscillatory integral needs {needed} panels, budget is {budget}")]
    PanelBudget { needed: usize, budget: usize },

    #[error("ingestion error at sample {index}: {reason}")]
    Ingestion { index: usize, reason: String },

    #[error("inconsistent state: {0}")]
    Inconsistent(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
