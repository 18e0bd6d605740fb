//! Least-squares power-law fitting in log-log space.
//!
//! Every scaling analysis in this crate reduces to the same estimation
//! problem: given points (z_i, y_i) believed to follow y ∝ z^κ, estimate the
//! exponent κ and coefficient c minimizing the RMS log-space residual
//!
//! ```text
//! ε(κ, c) = sqrt( Σ_i (ln y_i − ln(c·z_i^κ))² / N )
//! ```
//!
//! which is ordinary least squares of ln y on ln z. Natural logarithms are
//! used throughout; κ is base-independent, ε is reported in nats.
//!
//! Points are fitted unweighted, exactly as supplied. Any binning or
//! subsampling is the caller's responsibility.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    /// Fewer than two distinct abscissae: the slope is not identifiable.
    #[error("degenerate fit: need >= 2 points with distinct abscissae, got {distinct} distinct of {total}")]
    Degenerate { distinct: usize, total: usize },
    /// A coordinate is outside the log domain.
    #[error("point {index} has nonpositive coordinate (z={z}, y={y}); log-log fit requires z > 0 and y > 0")]
    Domain { index: usize, z: f64, y: f64 },
}

#[derive(Debug, Error)]
pub enum PointFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: expected two tab-separated numbers, got {content:?}")]
    Parse { line: usize, content: String },
}

/// A set of (z, y) points with positive coordinates, z the abscissa.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<(f64, f64)>,
}

impl PointSet {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        PointSet { points }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parse the two-column TSV point format: `z<TAB>y`, one point per
    /// line, `#`-prefixed comment lines and blank lines ignored.
    pub fn read_tsv<R: BufRead>(reader: R) -> Result<PointSet, PointFileError> {
        let mut points = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split('\t');
            let parsed = match (fields.next(), fields.next(), fields.next()) {
                (Some(z), Some(y), None) => z
                    .trim()
                    .parse::<f64>()
                    .and_then(|z| y.trim().parse::<f64>().map(|y| (z, y)))
                    .ok(),
                _ => None,
            };
            match parsed {
                Some(p) => points.push(p),
                None => {
                    return Err(PointFileError::Parse {
                        line: idx + 1,
                        content: line,
                    })
                }
            }
        }
        Ok(PointSet { points })
    }

    pub fn write_tsv<W: Write>(&self, mut writer: W) -> io::Result<()> {
        for (z, y) in &self.points {
            writeln!(writer, "{z}\t{y}")?;
        }
        Ok(())
    }
}

impl From<Vec<(f64, f64)>> for PointSet {
    fn from(points: Vec<(f64, f64)>) -> Self {
        PointSet { points }
    }
}

/// Result of fitting y = c·z^κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Estimated exponent κ (the log-log slope).
    pub exponent: f64,
    /// Estimated coefficient c (exp of the log-log intercept).
    pub coefficient: f64,
    /// RMS residual ε in natural-log space.
    pub rms_error: f64,
    /// Number of points used.
    pub n_points: usize,
}

/// Fit a power law by ordinary least squares of ln y on ln z.
pub fn fit_power_law(points: &PointSet) -> Result<PowerLawFit, FitError> {
    let pts = &points.points;
    for (index, &(z, y)) in pts.iter().enumerate() {
        if !z.is_finite() || z <= 0.0 || !y.is_finite() || y <= 0.0 {
            return Err(FitError::Domain { index, z, y });
        }
    }
    let n = pts.len();
    let distinct = distinct_abscissae(pts);
    if n < 2 || distinct < 2 {
        return Err(FitError::Degenerate { distinct, total: n });
    }

    let n_f = n as f64;
    let xs: Vec<f64> = pts.iter().map(|&(z, _)| z.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, y)| y.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / n_f;
    let mean_y = ys.iter().sum::<f64>() / n_f;

    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let dx = x - mean_x;
        sxx += dx * dx;
        sxy += dx * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let mut sse = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let r = y - (intercept + slope * x);
        sse += r * r;
    }

    Ok(PowerLawFit {
        exponent: slope,
        coefficient: intercept.exp(),
        rms_error: (sse / n_f).sqrt(),
        n_points: n,
    })
}

fn distinct_abscissae(pts: &[(f64, f64)]) -> usize {
    let mut zs: Vec<f64> = pts.iter().map(|&(z, _)| z).collect();
    zs.sort_unstable_by(f64::total_cmp);
    zs.dedup();
    zs.len()
}
