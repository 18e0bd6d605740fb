//! The five scaling-property analyses and the combined report.
//!
//! Each analysis turns a token (or character) stream into a point set plus
//! a [`PowerLawFit`]:
//!
//! - [`zipf`]: rank-frequency distribution of words or adjacent word pairs.
//! - [`heaps`]: vocabulary growth v(n) over log-spaced prefixes.
//! - [`ebeling`]: per-character window-count variance m(l) summed over the
//!   alphabet, at log-spaced window lengths.
//! - [`taylor`]: per-word mean vs. standard deviation of counts over
//!   fixed-length segments.
//! - [`lrc_analyze`]: autocorrelation of rare-word return intervals, with
//!   the Positive/Weak/No verdict and an exponent fit when applicable.
//!
//! [`full_report`] runs everything, recording per-analysis failures instead
//! of aborting, and computes exponent deltas against an optional reference
//! report.

mod ebeling;
mod heaps;
mod lrc;
mod report;
mod taylor;
mod zipf;

pub use ebeling::{ebeling, FluctuationCurve};
pub use heaps::{heaps, HeapsCurve};
pub use lrc::{acf, lrc_analyze, rare_word_intervals, verdict_from_acf, AcfSeries, LrcVerdict};
pub use report::{
    fnv1a64, full_report, write_report_files, AnalysisConfig, ExponentDeltas, ReportMeta,
    ScalingReport, Section,
};
pub use taylor::{taylor, TaylorScatter};
pub use zipf::{zipf, RankFrequency, ZipfOrder};

use thiserror::Error;

use crate::powerlaw::FitError;

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("insufficient data: {reason}")]
    InsufficientData { reason: String },
    #[error("degenerate variance: every window-count variance is zero")]
    DegenerateVariance,
    #[error("degenerate series: zero variance")]
    DegenerateSeries,
    #[error(transparent)]
    Fit(#[from] FitError),
}

impl ScalingError {
    pub(crate) fn insufficient(reason: impl Into<String>) -> ScalingError {
        ScalingError::InsufficientData {
            reason: reason.into(),
        }
    }
}

/// Log-spaced integer sample points in `[min, max]`, `per_decade` samples
/// per factor of ten, deduplicated, always including both endpoints.
pub(crate) fn log_spaced(min: u64, max: u64, per_decade: usize) -> Vec<u64> {
    assert!(min >= 1 && per_decade >= 1);
    if max <= min {
        return vec![min.min(max).max(1)];
    }
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let value = 10f64.powf(j as f64 / per_decade as f64);
        if value > max as f64 * (1.0 + 1e-12) {
            break;
        }
        let v = value.round() as u64;
        if v >= min && v <= max {
            out.push(v);
        }
        j += 1;
    }
    out.push(min);
    out.push(max);
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::log_spaced;

    #[test]
    fn log_spacing_covers_endpoints() {
        let pts = log_spaced(10, 1000, 10);
        assert_eq!(*pts.first().unwrap(), 10);
        assert_eq!(*pts.last().unwrap(), 1000);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        // Ten samples per decade over two decades, within dedup slack.
        assert!(pts.len() >= 18 && pts.len() <= 23, "{}", pts.len());
    }

    #[test]
    fn log_spacing_degenerate_range() {
        assert_eq!(log_spaced(5, 5, 10), vec![5]);
        assert_eq!(log_spaced(9, 3, 10), vec![3]);
    }
}
