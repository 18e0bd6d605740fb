//! Vocabulary growth v(n) over log-spaced prefix lengths.

use serde::{Deserialize, Serialize};

use crate::powerlaw::{fit_power_law, PointSet, PowerLawFit};
use crate::textio::TokenStream;

use super::{log_spaced, ScalingError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeapsCurve {
    /// (prefix length n, vocabulary size v(n)), n strictly increasing.
    pub samples: Vec<(u64, u64)>,
    /// Fit of v(n) = c·n^β over all samples.
    pub fit: PowerLawFit,
}

impl HeapsCurve {
    pub fn points(&self) -> PointSet {
        PointSet::new(
            self.samples
                .iter()
                .map(|&(n, v)| (n as f64, v as f64))
                .collect(),
        )
    }
}

/// Measure v(n) at `samples_per_decade` log-spaced prefix lengths
/// (always including n = N) in a single pass.
pub fn heaps(stream: &TokenStream, samples_per_decade: usize) -> Result<HeapsCurve, ScalingError> {
    let n = stream.len() as u64;
    if n < 10 {
        return Err(ScalingError::insufficient(format!(
            "need at least 10 tokens for vocabulary growth, got {n}"
        )));
    }
    let sample_at = log_spaced(1, n, samples_per_decade);
    let mut seen = vec![false; stream.vocab().len()];
    let mut distinct = 0u64;
    let mut samples = Vec::with_capacity(sample_at.len());
    let mut next = 0usize;
    for (pos, &t) in stream.tokens().iter().enumerate() {
        if !seen[t as usize] {
            seen[t as usize] = true;
            distinct += 1;
        }
        while next < sample_at.len() && sample_at[next] == pos as u64 + 1 {
            samples.push((sample_at[next], distinct));
            next += 1;
        }
    }
    let fit = fit_power_law(&PointSet::new(
        samples.iter().map(|&(n, v)| (n as f64, v as f64)).collect(),
    ))?;
    Ok(HeapsCurve { samples, fit })
}
