//! Long-range correlation of rare-word return intervals.
//!
//! The rarest word types are accumulated (ascending frequency) until they
//! cover 1/Q of the token mass; the gaps between successive occurrences of
//! any selected type form a numeric series. Its autocorrelation c(s) is
//! examined for power-law decay c(s) ∝ s^−ξ. Following the sign rules: the
//! verdict is No when two or more of c(1..10) are negative, Weak when
//! exactly one of c(1..100) is negative, and Positive otherwise, in which
//! case ξ is fitted over the positive c(s) with s ≤ 100.

use serde::{Deserialize, Serialize};

use crate::parallel;
use crate::powerlaw::{fit_power_law, PointSet, PowerLawFit};
use crate::textio::TokenStream;

use super::ScalingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LrcVerdict {
    Positive,
    Weak,
    No,
}

impl std::fmt::Display for LrcVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LrcVerdict::Positive => write!(f, "positive"),
            LrcVerdict::Weak => write!(f, "weak"),
            LrcVerdict::No => write!(f, "no"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfSeries {
    /// Rarity divisor Q: the selected types cover ≥ 1/Q of the tokens.
    pub q: u64,
    /// Number of return intervals in the series.
    pub n_intervals: usize,
    /// c(s) for s = 1..=max_lag.
    pub acf: Vec<f64>,
    pub verdict: LrcVerdict,
    /// Power-law fit of the positive c(s), s ≤ fit range; ξ = −exponent.
    /// Present only for a Positive verdict.
    pub fit: Option<PowerLawFit>,
}

impl AcfSeries {
    /// ξ when the verdict is Positive.
    pub fn xi(&self) -> Option<f64> {
        self.fit.map(|f| -f.exponent)
    }

    pub fn points(&self) -> PointSet {
        PointSet::new(
            self.acf
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0.0)
                .map(|(i, &c)| (i as f64 + 1.0, c))
                .collect(),
        )
    }
}

/// Return intervals of the rare-word set covering 1/Q of the text.
///
/// Types are taken in ascending frequency order (ties: later first
/// occurrence first) until their total count first reaches N/Q; whole
/// types are always included. The intervals are successive differences of
/// the merged occurrence positions.
pub fn rare_word_intervals(stream: &TokenStream, q: u64) -> Result<Vec<u64>, ScalingError> {
    if q < 2 {
        return Err(ScalingError::insufficient(format!(
            "rarity divisor must be at least 2, got {q}"
        )));
    }
    let n = stream.len() as u64;
    if n < q {
        return Err(ScalingError::insufficient(format!(
            "need at least Q = {q} tokens, got {n}"
        )));
    }
    let v = stream.vocab().len();
    let mut counts = vec![0u64; v];
    let mut first = vec![0u64; v];
    for (pos, &t) in stream.tokens().iter().enumerate() {
        if counts[t as usize] == 0 {
            first[t as usize] = pos as u64;
        }
        counts[t as usize] += 1;
    }
    let mut order: Vec<u32> = (0..v as u32).filter(|&w| counts[w as usize] > 0).collect();
    order.sort_unstable_by(|&a, &b| {
        counts[a as usize]
            .cmp(&counts[b as usize])
            .then(first[b as usize].cmp(&first[a as usize]))
    });
    let mut selected = vec![false; v];
    let mut cumulative = 0u128;
    let target = n as u128;
    for &w in &order {
        selected[w as usize] = true;
        cumulative += counts[w as usize] as u128;
        if cumulative * q as u128 >= target {
            break;
        }
    }
    let positions: Vec<u64> = stream
        .tokens()
        .iter()
        .enumerate()
        .filter(|&(_, &t)| selected[t as usize])
        .map(|(pos, _)| pos as u64)
        .collect();
    if positions.len() < 2 {
        return Err(ScalingError::insufficient(
            "fewer than 2 occurrences in the rare-word set",
        ));
    }
    Ok(positions.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Autocorrelation c(s) for s = 1..=max_lag, with the global sample mean
/// and population variance of the whole series:
/// c(s) = (1/(T−s))·Σ_t (x_t − μ)(x_{t+s} − μ) / σ².
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>, ScalingError> {
    let t = series.len();
    if max_lag < 1 || t <= max_lag + 1 {
        return Err(ScalingError::insufficient(format!(
            "series of length {t} is too short for max lag {max_lag}"
        )));
    }
    let tf = t as f64;
    let mean = series.iter().sum::<f64>() / tf;
    let variance = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / tf;
    if variance <= 0.0 {
        return Err(ScalingError::DegenerateSeries);
    }
    Ok(parallel::ordered_map(max_lag, |i| {
        let s = i + 1;
        let mut sum = 0.0;
        for t0 in 0..t - s {
            sum += (series[t0] - mean) * (series[t0 + s] - mean);
        }
        sum / (t - s) as f64 / variance
    }))
}

/// The sign rules applied to c(1..): No when ≥ 2 of the first 10 values
/// are negative, Weak when exactly one of the first 100 is negative,
/// Positive otherwise. A pure function of the signs.
pub fn verdict_from_acf(c: &[f64]) -> LrcVerdict {
    let neg_10 = c.iter().take(10).filter(|&&x| x < 0.0).count();
    if neg_10 >= 2 {
        return LrcVerdict::No;
    }
    let neg_100 = c.iter().take(100).filter(|&&x| x < 0.0).count();
    if neg_100 == 1 {
        return LrcVerdict::Weak;
    }
    LrcVerdict::Positive
}

/// Full long-range correlation analysis of a token stream.
pub fn lrc_analyze(
    stream: &TokenStream,
    q: u64,
    fit_max_lag: usize,
) -> Result<AcfSeries, ScalingError> {
    let intervals = rare_word_intervals(stream, q)?;
    let series: Vec<f64> = intervals.iter().map(|&i| i as f64).collect();
    let c = acf(&series, fit_max_lag)?;
    let verdict = verdict_from_acf(&c);
    let fit = match verdict {
        LrcVerdict::Positive => {
            let points = PointSet::new(
                c.iter()
                    .take(fit_max_lag)
                    .enumerate()
                    .filter(|&(_, &v)| v > 0.0)
                    .map(|(i, &v)| (i as f64 + 1.0, v))
                    .collect(),
            );
            Some(fit_power_law(&points)?)
        }
        _ => None,
    };
    Ok(AcfSeries {
        q,
        n_intervals: intervals.len(),
        acf: c,
        verdict,
        fit,
    })
}
