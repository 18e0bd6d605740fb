//! Perplexity: e to the power of the negative mean log probability,
//! exp(−(1/N)·Σ_i ln q(x_i | preceding context)).
//!
//! The first n−1 positions are scored by the longest available lower-order
//! model. Out-of-vocabulary tokens are scored as `<unk>` when the model
//! vocabulary has it; otherwise scoring fails. A zero probability anywhere
//! makes the result infinite, flagged rather than fatal.

use serde::{Deserialize, Serialize};

use crate::parallel;
use crate::textio::{TokenId, TokenStream, UNK};

use super::{ModelError, NGramModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OovPolicy {
    /// All stream tokens were in the model vocabulary.
    InVocabulary,
    /// Out-of-vocabulary tokens were scored as `<unk>`.
    MappedToUnk,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerplexityResult {
    pub value: f64,
    pub n_tokens: u64,
    pub oov_handling: OovPolicy,
    pub oov_count: u64,
    /// Positions where the model assigned probability zero; nonzero makes
    /// `value` infinite.
    pub zero_prob_positions: u64,
}

/// Score a stream under a trained model.
///
/// Under the `parallel` feature the stream is scored in fixed 8192-token
/// blocks whose log sums are folded in block order, so the reduction is
/// deterministic and identical to the sequential build.
pub fn perplexity(model: &NGramModel, stream: &TokenStream) -> Result<PerplexityResult, ModelError> {
    if stream.is_empty() {
        return Err(ModelError::InsufficientData(
            "cannot score an empty stream".into(),
        ));
    }
    let unk = model.vocab().id(UNK);
    let mut oov_count = 0u64;
    let mut mapped: Vec<TokenId> = Vec::with_capacity(stream.len());
    for &t in stream.tokens() {
        let surface = stream.vocab().surface(t);
        match model.vocab().id(surface) {
            Some(id) => mapped.push(id),
            None => match unk {
                Some(unk_id) => {
                    oov_count += 1;
                    mapped.push(unk_id);
                }
                None => {
                    return Err(ModelError::VocabularyMismatch {
                        surface: surface.to_owned(),
                    })
                }
            },
        }
    }

    const BLOCK: usize = 8192;
    let n = mapped.len();
    let n_blocks = n.div_ceil(BLOCK);
    let max_ctx = model.order() - 1;
    let partials: Vec<(f64, u64)> = parallel::ordered_map(n_blocks, |b| {
        let mut sum = 0.0f64;
        let mut zeros = 0u64;
        for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
            let start = i.saturating_sub(max_ctx);
            let q = model.prob(&mapped[start..i], mapped[i]);
            if q > 0.0 {
                sum += q.ln();
            } else {
                zeros += 1;
                sum = f64::NEG_INFINITY;
            }
        }
        (sum, zeros)
    });
    let mut log_sum = 0.0f64;
    let mut zero_prob_positions = 0u64;
    for (s, z) in partials {
        log_sum += s;
        zero_prob_positions += z;
    }
    let value = (-log_sum / n as f64).exp();
    Ok(PerplexityResult {
        value,
        n_tokens: n as u64,
        oov_handling: if oov_count > 0 {
            OovPolicy::MappedToUnk
        } else {
            OovPolicy::InVocabulary
        },
        oov_count,
        zero_prob_positions,
    })
}
