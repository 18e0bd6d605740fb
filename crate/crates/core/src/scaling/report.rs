//! The combined scaling report: every analysis, its point sets, verdicts,
//! and exponent deltas against an optional reference.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::textio::{to_char_stream, TokenStream};

use super::{
    ebeling, heaps, lrc_analyze, taylor, zipf, AcfSeries, FluctuationCurve, HeapsCurve,
    TaylorScatter, ZipfOrder,
};

/// Parameters for [`full_report`]. Defaults: Taylor l = 5620, Q = 16 with
/// the fit restricted to s ≤ 100, ten samples per decade, Ebeling windows
/// from 10 up to a hundredth of the character count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub taylor_segment_len: usize,
    pub lrc_q: u64,
    pub lrc_fit_max_lag: usize,
    pub heaps_samples_per_decade: usize,
    pub ebeling_samples_per_decade: usize,
    pub ebeling_min_len: usize,
    /// Upper window length; `None` means chars/100.
    pub ebeling_max_len: Option<usize>,
    /// Skip the character-level analysis (id-only streams, e.g. output of
    /// the Simon/Pitman-Yor processes, have no meaningful character form).
    pub include_ebeling: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            taylor_segment_len: 5620,
            lrc_q: 16,
            lrc_fit_max_lag: 100,
            heaps_samples_per_decade: 10,
            ebeling_samples_per_decade: 10,
            ebeling_min_len: 10,
            ebeling_max_len: None,
            include_ebeling: true,
        }
    }
}

/// Reproducibility metadata embedded verbatim in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub tool_version: String,
    pub input_path: Option<String>,
    /// FNV-1a 64-bit hash of the raw input bytes, hex encoded.
    pub input_hash: Option<String>,
    pub seed: Option<u64>,
    /// Generator identity for any randomized step ("chacha8").
    pub rng: Option<String>,
}

/// A per-analysis slot: the result, or the error that analysis reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section<T> {
    Computed { value: T },
    Failed { error: String },
}

impl<T> Section<T> {
    fn from_result<E: std::fmt::Display>(r: Result<T, E>) -> Section<T> {
        match r {
            Ok(value) => Section::Computed { value },
            Err(e) => Section::Failed {
                error: e.to_string(),
            },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Section::Computed { value } => Some(value),
            Section::Failed { .. } => None,
        }
    }

    pub fn is_computed(&self) -> bool {
        matches!(self, Section::Computed { .. })
    }
}

/// Exponent differences against a reference report (generated minus
/// reference), where both sides computed the property.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExponentDeltas {
    pub heaps_beta: Option<f64>,
    pub ebeling_eta: Option<f64>,
    pub taylor_zeta: Option<f64>,
    pub lrc_xi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub meta: Option<ReportMeta>,
    pub config: AnalysisConfig,
    pub n_tokens: u64,
    pub vocabulary: u64,
    pub zipf_unigram: Section<super::RankFrequency>,
    pub zipf_bigram: Section<super::RankFrequency>,
    pub heaps: Section<HeapsCurve>,
    /// Absent (None) when the character analysis was not applicable.
    pub ebeling: Option<Section<FluctuationCurve>>,
    pub taylor: Section<TaylorScatter>,
    pub lrc: Section<AcfSeries>,
    /// Q2: exponent deltas vs. the reference, when one was supplied.
    pub q2_deltas: Option<ExponentDeltas>,
}

impl ScalingReport {
    pub fn heaps_beta(&self) -> Option<f64> {
        self.heaps.value().map(|h| h.fit.exponent)
    }

    pub fn ebeling_eta(&self) -> Option<f64> {
        self.ebeling
            .as_ref()
            .and_then(|s| s.value())
            .map(|e| e.fit.exponent)
    }

    pub fn taylor_zeta(&self) -> Option<f64> {
        self.taylor.value().map(|t| t.fit.exponent)
    }

    pub fn lrc_xi(&self) -> Option<f64> {
        self.lrc.value().and_then(|l| l.xi())
    }

    pub fn lrc_verdict(&self) -> Option<super::LrcVerdict> {
        self.lrc.value().map(|l| l.verdict)
    }

    /// Q1: one qualitative verdict line per property.
    pub fn q1_verdicts(&self) -> Vec<(String, String)> {
        let yes_no = |ok: bool| if ok { "yes" } else { "not-computed" }.to_owned();
        vec![
            (
                "zipf".into(),
                yes_no(self.zipf_unigram.is_computed() && self.zipf_bigram.is_computed()),
            ),
            ("heaps".into(), yes_no(self.heaps.is_computed())),
            (
                "ebeling".into(),
                match &self.ebeling {
                    None => "not-applicable".into(),
                    Some(s) => yes_no(s.is_computed()),
                },
            ),
            ("taylor".into(), yes_no(self.taylor.is_computed())),
            (
                "lrc".into(),
                self.lrc
                    .value()
                    .map(|l| l.verdict.to_string())
                    .unwrap_or_else(|| "not-computed".into()),
            ),
        ]
    }

    pub fn any_computed(&self) -> bool {
        self.zipf_unigram.is_computed()
            || self.heaps.is_computed()
            || self.taylor.is_computed()
            || self.lrc.is_computed()
            || self.ebeling.as_ref().is_some_and(|s| s.is_computed())
    }
}

/// Run all five analyses. Sub-analyses that fail record their error in the
/// report rather than aborting; an empty stream yields a report whose
/// sections are all marked failed.
pub fn full_report(
    stream: &TokenStream,
    config: &AnalysisConfig,
    reference: Option<&ScalingReport>,
) -> ScalingReport {
    let zipf_unigram = Section::from_result(zipf(stream, ZipfOrder::Unigram));
    let zipf_bigram = Section::from_result(zipf(stream, ZipfOrder::Bigram));
    let heaps_section = Section::from_result(heaps(stream, config.heaps_samples_per_decade));
    let ebeling_section = if config.include_ebeling {
        Some(Section::from_result(to_char_stream(stream).map_err(
            |e| e.to_string(),
        ).and_then(|chars| {
            let max_l = config.ebeling_max_len.unwrap_or(chars.len() / 100).max(1);
            ebeling(
                &chars,
                config.ebeling_min_len,
                max_l,
                config.ebeling_samples_per_decade,
            )
            .map_err(|e| e.to_string())
        })))
    } else {
        None
    };
    let taylor_section = Section::from_result(taylor(stream, config.taylor_segment_len));
    let lrc_section = Section::from_result(lrc_analyze(stream, config.lrc_q, config.lrc_fit_max_lag));

    let mut report = ScalingReport {
        meta: None,
        config: config.clone(),
        n_tokens: stream.len() as u64,
        vocabulary: stream.vocab().len() as u64,
        zipf_unigram,
        zipf_bigram,
        heaps: heaps_section,
        ebeling: ebeling_section,
        taylor: taylor_section,
        lrc: lrc_section,
        q2_deltas: None,
    };
    if let Some(reference) = reference {
        let delta = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        };
        report.q2_deltas = Some(ExponentDeltas {
            heaps_beta: delta(report.heaps_beta(), reference.heaps_beta()),
            ebeling_eta: delta(report.ebeling_eta(), reference.ebeling_eta()),
            taylor_zeta: delta(report.taylor_zeta(), reference.taylor_zeta()),
            lrc_xi: delta(report.lrc_xi(), reference.lrc_xi()),
        });
    }
    report
}

/// FNV-1a 64-bit content hash, used to fingerprint report inputs.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Write `<prefix>.report.json` plus one point TSV per computed property,
/// returning the paths written. Output is byte-deterministic for a given
/// report.
pub fn write_report_files(prefix: &Path, report: &ScalingReport) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let with_ext = |ext: &str| -> PathBuf {
        let mut os = prefix.as_os_str().to_owned();
        os.push(ext);
        PathBuf::from(os)
    };

    let json_path = with_ext(".report.json");
    let mut json = serde_json::to_vec_pretty(report)?;
    json.push(b'\n');
    fs::write(&json_path, json)?;
    written.push(json_path);

    let mut write_points = |name: &str, points: crate::powerlaw::PointSet, header: &str| -> io::Result<()> {
        let path = with_ext(&format!(".{name}.tsv"));
        let mut buf = Vec::new();
        writeln!(buf, "# {header}")?;
        points.write_tsv(&mut buf)?;
        fs::write(&path, buf)?;
        written.push(path);
        Ok(())
    };

    if let Some(v) = report.zipf_unigram.value() {
        write_points("zipf1", v.points(), "rank\tfrequency")?;
    }
    if let Some(v) = report.zipf_bigram.value() {
        write_points("zipf2", v.points(), "rank\tfrequency")?;
    }
    if let Some(v) = report.heaps.value() {
        write_points("heaps", v.points(), "prefix_length\tvocabulary")?;
    }
    if let Some(v) = report.ebeling.as_ref().and_then(|s| s.value()) {
        write_points("ebeling", v.points(), "window_length\tm")?;
    }
    if let Some(v) = report.taylor.value() {
        write_points("taylor", v.points(), "mean\tstd_dev")?;
    }
    if let Some(v) = report.lrc.value() {
        write_points("lrc", v.points(), "lag\tacf")?;
    }
    Ok(written)
}
