//! The Simon urn process.
//!
//! The sequence starts with a single word type. At every later step a
//! brand-new type is introduced with probability `a`; otherwise a
//! uniformly random past position is copied, so an existing type k is
//! continued with probability (1 − a)·n_k/t. The output follows Zipf's
//! law with exponent close to 1 and, by construction, has no burstiness
//! beyond its ever-growing vocabulary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::textio::TokenStream;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimonParams {
    /// New-word probability, strictly between 0 and 1.
    pub a: f64,
    pub seed: u64,
}

/// Generate `length` tokens; surfaces are decimal type ids in order of
/// introduction. Deterministic in (params, length).
pub fn simon_generate(params: SimonParams, length: usize) -> Result<TokenStream, ModelError> {
    if !(params.a > 0.0 && params.a < 1.0) {
        return Err(ModelError::InvalidParameter(format!(
            "Simon new-word probability must satisfy 0 < a < 1, got {}",
            params.a
        )));
    }
    if length < 1 {
        return Err(ModelError::InsufficientData(
            "generation length must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tokens: Vec<u32> = Vec::with_capacity(length);
    tokens.push(0);
    let mut n_types = 1u32;
    for t in 1..length {
        if rng.random::<f64>() < params.a {
            tokens.push(n_types);
            n_types += 1;
        } else {
            let copy_from = rng.random_range(0..t);
            tokens.push(tokens[copy_from]);
        }
    }
    Ok(integer_surface_stream(tokens, n_types))
}

/// Build a stream whose vocabulary surfaces are the decimal ids 0..K-1.
pub(crate) fn integer_surface_stream(tokens: Vec<u32>, n_types: u32) -> TokenStream {
    let mut frequency = vec![0u64; n_types as usize];
    for &t in &tokens {
        frequency[t as usize] += 1;
    }
    let surfaces: Vec<String> = (0..n_types).map(|i| i.to_string()).collect();
    let vocab = crate::textio::Vocabulary::from_raw_parts(surfaces, frequency);
    TokenStream::from_parts(tokens, Arc::new(vocab))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_innovation_limit() {
        let stream = simon_generate(
            SimonParams {
                a: 1e-9,
                seed: 42,
            },
            1000,
        )
        .unwrap();
        assert_eq!(stream.vocab().len(), 1);
        assert!(stream.tokens().iter().all(|&t| t == 0));
    }

    #[test]
    fn vocabulary_growth_matches_binomial() {
        let length = 200_000usize;
        let a = 0.1;
        let stream = simon_generate(SimonParams { a, seed: 7 }, length).unwrap();
        let expected = 1.0 + a * (length as f64 - 1.0);
        let sd = ((length as f64 - 1.0) * a * (1.0 - a)).sqrt();
        let v = stream.vocab().len() as f64;
        assert!(
            (v - expected).abs() <= 3.0 * sd,
            "V = {v}, expected {expected} ± {}",
            3.0 * sd
        );
    }

    #[test]
    fn zipf_exponent_near_one() {
        let stream = simon_generate(SimonParams { a: 0.1, seed: 11 }, 1_000_000).unwrap();
        let rf = crate::scaling::zipf(&stream, crate::scaling::ZipfOrder::Unigram).unwrap();
        // Fit the mid-rank region (ranks 10..1000) where the Simon process
        // is cleanly Zipfian.
        let points: Vec<(f64, f64)> = rf
            .entries
            .iter()
            .filter(|&&(r, _)| (10..=1000).contains(&r))
            .map(|&(r, f)| (r as f64, f as f64))
            .collect();
        let fit = crate::powerlaw::fit_power_law(&points.into()).unwrap();
        let alpha = -fit.exponent;
        assert!((alpha - 1.0).abs() <= 0.1, "alpha = {alpha}");
    }

    #[test]
    fn deterministic_and_validated() {
        let p = SimonParams { a: 0.3, seed: 9 };
        let a = simon_generate(p, 500).unwrap();
        let b = simon_generate(p, 500).unwrap();
        assert_eq!(a.tokens(), b.tokens());
        assert!(simon_generate(SimonParams { a: 0.0, seed: 0 }, 10).is_err());
        assert!(simon_generate(SimonParams { a: 1.0, seed: 0 }, 10).is_err());
    }
}
