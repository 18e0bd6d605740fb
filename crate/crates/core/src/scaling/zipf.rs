//! Rank-frequency distributions for words and adjacent word pairs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::powerlaw::PointSet;
use crate::textio::TokenStream;

use super::ScalingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZipfOrder {
    Unigram,
    Bigram,
}

impl ZipfOrder {
    pub fn width(self) -> usize {
        match self {
            ZipfOrder::Unigram => 1,
            ZipfOrder::Bigram => 2,
        }
    }
}

/// Frequencies sorted by descending count; rank starts at 1. Ties are
/// broken by first occurrence in the stream, so the ordering is stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFrequency {
    pub order: u8,
    /// (rank, frequency), frequencies nonincreasing.
    pub entries: Vec<(u64, u64)>,
}

impl RankFrequency {
    pub fn points(&self) -> PointSet {
        PointSet::new(
            self.entries
                .iter()
                .map(|&(r, f)| (r as f64, f as f64))
                .collect(),
        )
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, f)| f).sum()
    }
}

/// Count unigram frequencies, or the N-1 overlapping adjacent pairs for
/// bigrams, and rank them.
pub fn zipf(stream: &TokenStream, order: ZipfOrder) -> Result<RankFrequency, ScalingError> {
    let width = order.width();
    if stream.len() < width {
        return Err(ScalingError::insufficient(format!(
            "need at least {width} tokens for order-{width} rank-frequency, got {}",
            stream.len()
        )));
    }
    // (count, first occurrence) per unit, in first-seen order.
    let ranked: Vec<(u64, usize)> = match order {
        ZipfOrder::Unigram => {
            let mut counts = vec![0u64; stream.vocab().len()];
            let mut first = vec![usize::MAX; stream.vocab().len()];
            for (pos, &t) in stream.tokens().iter().enumerate() {
                if counts[t as usize] == 0 {
                    first[t as usize] = pos;
                }
                counts[t as usize] += 1;
            }
            counts
                .into_iter()
                .zip(first)
                .filter(|&(c, _)| c > 0)
                .collect()
        }
        ZipfOrder::Bigram => {
            let mut map: HashMap<(u32, u32), (u64, usize)> = HashMap::new();
            for (pos, pair) in stream.tokens().windows(2).enumerate() {
                let entry = map.entry((pair[0], pair[1])).or_insert((0, pos));
                entry.0 += 1;
            }
            map.into_values().collect()
        }
    };
    let mut ranked = ranked;
    ranked.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    Ok(RankFrequency {
        order: width as u8,
        entries: ranked
            .into_iter()
            .enumerate()
            .map(|(i, (c, _))| (i as u64 + 1, c))
            .collect(),
    })
}
