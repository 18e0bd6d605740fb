//! NLL-versus-length profile: per-length mean/min/max negative
//! log-likelihood and the Pearson correlation of mean NLL with length.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::cky::{viterbi_nll_batch, CkyOptions, ParseOutcome};
use super::grammar::CnfGrammar;
use super::PcfgError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub length: usize,
    pub count: usize,
    pub mean_nll: f64,
    pub min_nll: f64,
    pub max_nll: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NllProfile {
    pub rows: Vec<ProfileRow>,
    /// Items with no parse.
    pub unparseable: usize,
    /// Items skipped for other reasons (out-of-alphabet tokens, length cap).
    pub skipped: usize,
    /// Pearson correlation of (length, mean NLL), when ≥ 2 lengths exist.
    pub pearson_length_mean: Option<f64>,
}

impl NllProfile {
    /// `length<TAB>count<TAB>mean<TAB>min<TAB>max` rows.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# length\tcount\tmean_nll\tmin_nll\tmax_nll")?;
        for r in &self.rows {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                r.length, r.count, r.mean_nll, r.min_nll, r.max_nll
            )?;
        }
        Ok(())
    }
}

/// Score every item and aggregate by length.
pub fn nll_length_profile(
    grammar: &CnfGrammar,
    items: &[Vec<String>],
    options: &CkyOptions,
) -> Result<NllProfile, PcfgError> {
    if items.is_empty() {
        return Err(PcfgError::EmptySentence);
    }
    let outcomes = viterbi_nll_batch(grammar, items, options);
    let mut by_length: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut unparseable = 0usize;
    let mut skipped = 0usize;
    for (item, outcome) in items.iter().zip(outcomes) {
        match outcome {
            Ok(ParseOutcome::Parsed { nll }) => by_length.entry(item.len()).or_default().push(nll),
            Ok(ParseOutcome::Unparseable) => unparseable += 1,
            Err(PcfgError::Vocabulary { .. }) | Err(PcfgError::LengthCap { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let rows: Vec<ProfileRow> = by_length
        .into_iter()
        .map(|(length, nlls)| {
            let count = nlls.len();
            let mean = nlls.iter().sum::<f64>() / count as f64;
            let min = nlls.iter().copied().fold(f64::INFINITY, f64::min);
            let max = nlls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            ProfileRow {
                length,
                count,
                mean_nll: mean,
                min_nll: min,
                max_nll: max,
            }
        })
        .collect();
    let pearson_length_mean = pearson(
        &rows.iter().map(|r| r.length as f64).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.mean_nll).collect::<Vec<_>>(),
    );
    Ok(NllProfile {
        rows,
        unparseable,
        skipped,
        pearson_length_mean,
    })
}

/// Pearson correlation; `None` when either side has no variance or
/// fewer than two points.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
