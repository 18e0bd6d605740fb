//! Taylor's law: per-word mean vs. standard deviation of segment counts.
//!
//! The stream is cut into ⌊N/l⌋ non-overlapping segments of l tokens (the
//! trailing remainder is discarded). For each word type w the mean μ_w and
//! population standard deviation σ_w of its per-segment counts give one
//! scatter point; σ ∝ μ^ζ with ζ = 0.5 for i.i.d. text and ζ = 1 when all
//! segments share the same word proportions. Words that never vary
//! (σ_w = 0) are excluded from the fit, as are words absent from the
//! segmented region (μ_w = 0).

use serde::{Deserialize, Serialize};

use crate::parallel;
use crate::powerlaw::{fit_power_law, PointSet, PowerLawFit};
use crate::textio::TokenStream;

use super::ScalingError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorScatter {
    pub segment_len: usize,
    pub n_segments: usize,
    /// (μ_w, σ_w) per retained word type, in vocabulary id order.
    pub points: Vec<(f64, f64)>,
    /// Word types excluded because their counts never varied.
    pub excluded_zero_std: usize,
    /// Fit of σ = c·μ^ζ.
    pub fit: PowerLawFit,
}

impl TaylorScatter {
    pub fn points(&self) -> PointSet {
        PointSet::new(self.points.clone())
    }
}

struct CountMoments {
    sum: Vec<u64>,
    sumsq: Vec<u64>,
}

/// Mean-variance analysis at segment length `segment_len` (≥ 2).
pub fn taylor(stream: &TokenStream, segment_len: usize) -> Result<TaylorScatter, ScalingError> {
    if segment_len < 2 {
        return Err(ScalingError::insufficient(format!(
            "segment length must be at least 2, got {segment_len}"
        )));
    }
    let k = stream.len() / segment_len;
    if k < 2 {
        return Err(ScalingError::insufficient(format!(
            "need at least 2 segments of {segment_len} tokens, stream has {}",
            stream.len()
        )));
    }
    let v = stream.vocab().len();
    let tokens = stream.tokens();

    // Integer sums over segments commute exactly, so the parallel merge
    // order cannot change the result.
    let moments = parallel::fold_exact(
        k,
        || CountMoments {
            sum: vec![0u64; v],
            sumsq: vec![0u64; v],
        },
        |acc, seg| {
            let mut counts = vec![0u32; v];
            for &t in &tokens[seg * segment_len..(seg + 1) * segment_len] {
                counts[t as usize] += 1;
            }
            for (w, &c) in counts.iter().enumerate() {
                if c > 0 {
                    acc.sum[w] += c as u64;
                    acc.sumsq[w] += (c as u64) * (c as u64);
                }
            }
        },
        |a, b| {
            for w in 0..v {
                a.sum[w] += b.sum[w];
                a.sumsq[w] += b.sumsq[w];
            }
        },
    );

    let kf = k as f64;
    let mut points = Vec::new();
    let mut excluded_zero_std = 0usize;
    for w in 0..v {
        if moments.sum[w] == 0 {
            continue;
        }
        let s = moments.sum[w] as f64;
        let mean = s / kf;
        let var = (moments.sumsq[w] as f64 - s * s / kf) / kf;
        // All-equal counts give var = 0 up to rounding; treat tiny negatives
        // from cancellation as zero as well.
        if var > 1e-12 {
            points.push((mean, var.sqrt()));
        } else {
            excluded_zero_std += 1;
        }
    }
    if points.len() < 2 {
        return Err(ScalingError::insufficient(format!(
            "only {} word types with varying counts; cannot fit",
            points.len()
        )));
    }
    let fit = fit_power_law(&PointSet::new(points.clone()))?;
    Ok(TaylorScatter {
        segment_len,
        n_segments: k,
        points,
        excluded_zero_std,
        fit,
    })
}
