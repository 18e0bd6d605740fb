//! Character-level fluctuation analysis.
//!
//! For each window length l the text is cut into ⌊len/l⌋ consecutive
//! non-overlapping windows. For every character c, y(c,l) counts its
//! occurrences per window and m2(c,l) = ⟨y²⟩ − ⟨y⟩² is the population
//! variance of those counts. The fluctuation function m(l) = Σ_c m2(c,l)
//! grows as l^η; η = 1 for an i.i.d. sequence, η > 1 under long memory.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::parallel;
use crate::powerlaw::{fit_power_law, PointSet, PowerLawFit};
use crate::textio::CharStream;

use super::{log_spaced, ScalingError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluctuationCurve {
    /// (window length l, m(l)) with m(l) > 0, l strictly increasing.
    pub samples: Vec<(u64, f64)>,
    /// Window lengths whose summed variance was exactly zero, excluded
    /// from the fit (periodic or constant text).
    pub zero_variance_lengths: Vec<u64>,
    /// Fit of m(l) = c·l^η.
    pub fit: PowerLawFit,
}

impl FluctuationCurve {
    pub fn points(&self) -> PointSet {
        PointSet::new(self.samples.iter().map(|&(l, m)| (l as f64, m)).collect())
    }
}

/// Fluctuation analysis at log-spaced window lengths in `[min_l, max_l]`.
pub fn ebeling(
    chars: &CharStream,
    min_l: usize,
    max_l: usize,
    samples_per_decade: usize,
) -> Result<FluctuationCurve, ScalingError> {
    let len = chars.len();
    if min_l < 1 || max_l < min_l {
        return Err(ScalingError::insufficient(format!(
            "invalid window range [{min_l}, {max_l}]"
        )));
    }
    if len < 10 * max_l {
        return Err(ScalingError::insufficient(format!(
            "need at least 10 windows at max length: stream has {len} chars, max_l = {max_l}"
        )));
    }
    let alphabet: HashMap<char, u32> = chars
        .alphabet()
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i as u32))
        .collect();
    let codes: Vec<u32> = chars.chars().iter().map(|c| alphabet[c]).collect();
    let lengths = log_spaced(min_l as u64, max_l as u64, samples_per_decade);

    let m_values = parallel::ordered_map(lengths.len(), |i| {
        fluctuation_at(&codes, alphabet.len(), lengths[i] as usize)
    });

    let mut samples = Vec::new();
    let mut zero_variance_lengths = Vec::new();
    for (&l, &m) in lengths.iter().zip(m_values.iter()) {
        if m > 0.0 {
            samples.push((l, m));
        } else {
            zero_variance_lengths.push(l);
        }
    }
    if samples.len() < 2 {
        return Err(ScalingError::DegenerateVariance);
    }
    let fit = fit_power_law(&PointSet::new(
        samples.iter().map(|&(l, m)| (l as f64, m)).collect(),
    ))?;
    Ok(FluctuationCurve {
        samples,
        zero_variance_lengths,
        fit,
    })
}

/// m(l) for one window length. Integer accumulation keeps the result
/// independent of evaluation order.
fn fluctuation_at(codes: &[u32], alphabet_size: usize, l: usize) -> f64 {
    let k = codes.len() / l;
    let mut sum = vec![0u64; alphabet_size];
    let mut sumsq = vec![0u128; alphabet_size];
    let mut window = vec![0u32; alphabet_size];
    for w in 0..k {
        window.fill(0);
        for &c in &codes[w * l..(w + 1) * l] {
            window[c as usize] += 1;
        }
        for (c, &y) in window.iter().enumerate() {
            if y > 0 {
                sum[c] += y as u64;
                sumsq[c] += (y as u128) * (y as u128);
            }
        }
    }
    let kf = k as f64;
    let mut m = 0.0;
    for c in 0..alphabet_size {
        let s = sum[c] as f64;
        let var = (sumsq[c] as f64 - s * s / kf) / kf;
        m += var.max(0.0);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct per-window enumeration, kept independent of `fluctuation_at`.
    fn brute_force_m(text: &str, l: usize) -> f64 {
        let chars: Vec<char> = text.chars().collect();
        let k = chars.len() / l;
        let mut alphabet: Vec<char> = chars.clone();
        alphabet.sort_unstable();
        alphabet.dedup();
        let mut m = 0.0;
        for &c in &alphabet {
            let counts: Vec<f64> = (0..k)
                .map(|w| chars[w * l..(w + 1) * l].iter().filter(|&&x| x == c).count() as f64)
                .collect();
            let mean = counts.iter().sum::<f64>() / k as f64;
            let var = counts.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / k as f64;
            m += var;
        }
        m
    }

    #[test]
    fn matches_brute_force_enumeration() {
        let text = "aabbaababbabaaabbbababab aabb aabbab";
        for l in [2usize, 3, 4] {
            let cs = CharStream::from_text(text);
            let alphabet: HashMap<char, u32> = cs
                .alphabet()
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, i as u32))
                .collect();
            let codes: Vec<u32> = cs.chars().iter().map(|c| alphabet[c]).collect();
            let got = fluctuation_at(&codes, alphabet.len(), l);
            let want = brute_force_m(text, l);
            assert!((got - want).abs() <= 1e-9, "l={l}: {got} vs {want}");
        }
    }

    #[test]
    fn iid_uniform_characters_eta_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let text: String = (0..1_000_000)
            .map(|_| if rng.random::<bool>() { 'a' } else { 'b' })
            .collect();
        let cs = CharStream::from_text(&text);
        let curve = ebeling(&cs, 10, 10_000, 10).unwrap();
        assert!(
            (curve.fit.exponent - 1.0).abs() <= 0.03,
            "eta = {}",
            curve.fit.exponent
        );
    }

    #[test]
    fn periodic_text_degenerates() {
        let text = "ab".repeat(5000);
        let cs = CharStream::from_text(&text);
        // Even window lengths only: every window holds l/2 of each char.
        let err = ebeling(&cs, 2, 2, 10);
        assert!(matches!(err, Err(ScalingError::DegenerateVariance)));
    }

    #[test]
    fn too_short_stream() {
        let cs = CharStream::from_text("abcabc");
        assert!(matches!(
            ebeling(&cs, 1, 100, 10),
            Err(ScalingError::InsufficientData { .. })
        ));
    }
}
