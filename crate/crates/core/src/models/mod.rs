//! Baseline generators and predictors: the Simon and Pitman-Yor urn
//! processes, n-gram language models with four smoothing schemes, and
//! perplexity evaluation.

mod ngram;
mod perplexity;
mod pitman_yor;
mod simon;

pub use ngram::{
    load_model, ngram_generate, ngram_prob, ngram_train, save_model, NGramModel, Smoothing,
    SmoothingConfig,
};
pub use perplexity::{perplexity, OovPolicy, PerplexityResult};
pub use pitman_yor::{pitman_yor_generate, PitmanYorParams};
pub use simon::{simon_generate, SimonParams};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("vocabulary mismatch: token {surface:?} is out of vocabulary and the model has no <unk>")]
    VocabularyMismatch { surface: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("model file format error: {0}")]
    Format(String),
}
