//! The Pitman-Yor urn process.
//!
//! A two-parameter generalization of the Chinese restaurant process that
//! slows vocabulary introduction as the number of types K grows: after t
//! tokens, an existing type k is continued with probability
//! (n_k − a)/(t + b) and a new type is introduced with probability
//! (a·K + b)/(t + b). Those branch probabilities sum to one at every step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::textio::TokenStream;

use super::simon::integer_surface_stream;
use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitmanYorParams {
    /// Discount, 0 ≤ a < 1.
    pub a: f64,
    /// Strength, b ≥ 0.
    pub b: f64,
    pub seed: u64,
}

impl PitmanYorParams {
    /// Probability of introducing a new type after `t` tokens with `k`
    /// types observed.
    pub fn p_new(&self, t: u64, k: u64) -> f64 {
        (self.a * k as f64 + self.b) / (t as f64 + self.b)
    }

    /// Probability of continuing an existing type with count `n_k`.
    pub fn p_existing(&self, t: u64, n_k: u64) -> f64 {
        (n_k as f64 - self.a) / (t as f64 + self.b)
    }
}

/// Generate `length` tokens with decimal-id surfaces; deterministic under
/// the seed.
///
/// The existing-type branch samples k with probability proportional to
/// n_k − a by rejection: a uniformly random past position proposes k with
/// probability n_k/t, accepted with probability (n_k − a)/n_k.
pub fn pitman_yor_generate(
    params: PitmanYorParams,
    length: usize,
) -> Result<TokenStream, ModelError> {
    if !(params.a >= 0.0 && params.a < 1.0) {
        return Err(ModelError::InvalidParameter(format!(
            "Pitman-Yor discount must satisfy 0 <= a < 1, got {}",
            params.a
        )));
    }
    if !params.b.is_finite() || params.b < 0.0 {
        return Err(ModelError::InvalidParameter(format!(
            "Pitman-Yor strength must satisfy b >= 0, got {}",
            params.b
        )));
    }
    if length < 1 {
        return Err(ModelError::InsufficientData(
            "generation length must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tokens: Vec<u32> = Vec::with_capacity(length);
    let mut counts: Vec<u64> = Vec::new();
    tokens.push(0);
    counts.push(1);
    for t in 1..length {
        let k = counts.len() as u64;
        if rng.random::<f64>() < params.p_new(t as u64, k) {
            tokens.push(counts.len() as u32);
            counts.push(1);
        } else {
            let chosen = loop {
                let pos = rng.random_range(0..t);
                let candidate = tokens[pos];
                let n_k = counts[candidate as usize] as f64;
                if rng.random::<f64>() < (n_k - params.a) / n_k {
                    break candidate;
                }
            };
            tokens.push(chosen);
            counts[chosen as usize] += 1;
        }
    }
    let n_types = counts.len() as u32;
    Ok(integer_surface_stream(tokens, n_types))
}
