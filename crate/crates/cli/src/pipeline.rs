//! The `pipeline` subcommand: one evaluation row per baseline, mirroring
//! the layout of the summary tables (perplexity where defined, one column
//! pair per scaling exponent, "-" where a metric is undefined).
//!
//! Fixed row list: the corpus itself; 1/2/5/10-gram chunk shuffles; MLE
//! 3/5-gram, interpolated 3-gram, Katz 3/5-gram, Kneser-Ney 3/5-gram
//! models (trained on the head split, scored on the tail, then used to
//! generate a sample that is analyzed); and the Simon and Pitman-Yor
//! processes. Row i derives its seed as base seed + i; per-row failures
//! are recorded and the pipeline continues.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use textlaws::models::{
    ngram_generate, ngram_train, perplexity, pitman_yor_generate, simon_generate, PitmanYorParams,
    SimonParams, SmoothingConfig,
};
use textlaws::scaling::{full_report, write_report_files, ScalingReport};
use textlaws::textio::{preprocess, shuffle_ngram};
use textlaws::TokenStream;

use crate::util::{self, CliError};
use crate::{analyze, AnalysisArgs, FormatArg, PreprocessArgs};

pub struct PipelineConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub seed: u64,
    pub gen_tokens: usize,
    pub held_out_fraction: f64,
    pub simon_a: f64,
    pub py_a: f64,
    pub py_b: f64,
    pub analysis: AnalysisArgs,
    pub preprocess: PreprocessArgs,
    pub format: FormatArg,
}

#[derive(Clone, Copy)]
enum RowSpec {
    Original,
    Shuffle { n: usize },
    NGram { order: usize, smoothing: crate::SmoothingArg },
    Simon,
    PitmanYor,
}

impl RowSpec {
    fn name(&self) -> String {
        match self {
            RowSpec::Original => "original".into(),
            RowSpec::Shuffle { n } => format!("shuffle-{n}gram"),
            RowSpec::NGram { order, smoothing } => {
                let s = match smoothing {
                    crate::SmoothingArg::Mle => "mle",
                    crate::SmoothingArg::Interp => "interpolation",
                    crate::SmoothingArg::Katz => "katz",
                    crate::SmoothingArg::Kn => "kneser-ney",
                };
                format!("{s}-{order}gram")
            }
            RowSpec::Simon => "simon".into(),
            RowSpec::PitmanYor => "pitman-yor".into(),
        }
    }
}

const ROWS: [RowSpec; 14] = [
    RowSpec::Original,
    RowSpec::Shuffle { n: 1 },
    RowSpec::Shuffle { n: 2 },
    RowSpec::Shuffle { n: 5 },
    RowSpec::Shuffle { n: 10 },
    RowSpec::NGram { order: 3, smoothing: crate::SmoothingArg::Mle },
    RowSpec::NGram { order: 5, smoothing: crate::SmoothingArg::Mle },
    RowSpec::NGram { order: 3, smoothing: crate::SmoothingArg::Interp },
    RowSpec::NGram { order: 3, smoothing: crate::SmoothingArg::Katz },
    RowSpec::NGram { order: 5, smoothing: crate::SmoothingArg::Katz },
    RowSpec::NGram { order: 3, smoothing: crate::SmoothingArg::Kn },
    RowSpec::NGram { order: 5, smoothing: crate::SmoothingArg::Kn },
    RowSpec::Simon,
    RowSpec::PitmanYor,
];

#[derive(Serialize)]
struct RowResult {
    name: String,
    seed: u64,
    perplexity: Option<f64>,
    heaps_beta: Option<f64>,
    heaps_eps: Option<f64>,
    ebeling_eta: Option<f64>,
    ebeling_eps: Option<f64>,
    taylor_zeta: Option<f64>,
    taylor_eps: Option<f64>,
    lrc_verdict: Option<String>,
    lrc_xi: Option<f64>,
    lrc_eps: Option<f64>,
    error: Option<String>,
}

impl RowResult {
    fn failed(name: String, seed: u64, error: String) -> RowResult {
        RowResult {
            name,
            seed,
            perplexity: None,
            heaps_beta: None,
            heaps_eps: None,
            ebeling_eta: None,
            ebeling_eps: None,
            taylor_zeta: None,
            taylor_eps: None,
            lrc_verdict: None,
            lrc_xi: None,
            lrc_eps: None,
            error: Some(error),
        }
    }

    fn from_report(name: String, seed: u64, perplexity: Option<f64>, report: &ScalingReport) -> RowResult {
        let heaps = report.heaps.value().map(|h| h.fit);
        let ebeling = report.ebeling.as_ref().and_then(|s| s.value()).map(|e| e.fit);
        let taylor = report.taylor.value().map(|t| t.fit);
        let lrc = report.lrc.value();
        RowResult {
            name,
            seed,
            perplexity,
            heaps_beta: heaps.map(|f| f.exponent),
            heaps_eps: heaps.map(|f| f.rms_error),
            ebeling_eta: ebeling.map(|f| f.exponent),
            ebeling_eps: ebeling.map(|f| f.rms_error),
            taylor_zeta: taylor.map(|f| f.exponent),
            taylor_eps: taylor.map(|f| f.rms_error),
            lrc_verdict: lrc.map(|l| l.verdict.to_string()),
            lrc_xi: lrc.and_then(|l| l.xi()),
            lrc_eps: lrc.and_then(|l| l.fit.map(|f| f.rms_error)),
            error: None,
        }
    }
}

#[derive(Serialize)]
struct PipelineSummary {
    meta: textlaws::scaling::ReportMeta,
    n_tokens: u64,
    vocabulary: u64,
    gen_tokens: usize,
    held_out_fraction: f64,
    warnings: Vec<String>,
    rows: Vec<RowResult>,
}

pub fn run(config: &PipelineConfig) -> Result<(), CliError> {
    let (stream, hash) = util::read_corpus(&config.input, &config.preprocess)?;
    if stream.is_empty() {
        return Err(CliError::InsufficientData("input corpus is empty".into()));
    }
    let mut warnings = Vec::new();
    if stream.len() < 1_000_000 {
        let w = format!(
            "corpus has {} tokens; exponents are noisy below one million",
            stream.len()
        );
        eprintln!("warning: {w}");
        warnings.push(w);
    }

    // Model rows train on the head split and score the tail. The head is
    // re-preprocessed with a floor of min-freq 2 so the training
    // vocabulary always carries <unk> for out-of-vocabulary tail tokens.
    let split = stream.len() - ((stream.len() as f64 * config.held_out_fraction) as usize).max(1);
    let analysis_config = analyze::to_config(&config.analysis);

    let rows_dir = util::with_suffix(&config.output, ".rows");
    std::fs::create_dir_all(&rows_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", rows_dir.display())))?;

    // The original row is the Q2 reference for every other row.
    let mut original_report = full_report(&stream, &analysis_config, None);
    original_report.meta = Some(util::meta(&config.input, hash, Some(config.seed)));
    write_report_files(&rows_dir.join("original"), &original_report)
        .map_err(|e| CliError::Io(format!("writing original report: {e}")))?;
    let original_row = RowResult::from_report("original".into(), config.seed, None, &original_report);

    let work = |i: usize| -> RowResult {
        let spec = ROWS[i];
        let seed = config.seed + i as u64;
        let name = spec.name();
        let run_row = || -> Result<RowResult, CliError> {
            let (analyzed, ppl, ebeling) = match spec {
                RowSpec::Original => unreachable!("row 0 handled above"),
                RowSpec::Shuffle { n } => {
                    (shuffle_ngram(&stream, n, seed), None, true)
                }
                RowSpec::NGram { order, smoothing } => {
                    let head = TokenStream::from_surfaces(
                        stream.tokens()[..split]
                            .iter()
                            .map(|&t| stream.vocab().surface(t)),
                    );
                    let head = preprocess(&head, config.preprocess.min_freq.max(2), false);
                    let tail = stream.slice(split..stream.len());
                    let smoothing_config = match smoothing {
                        crate::SmoothingArg::Mle => SmoothingConfig::Mle,
                        crate::SmoothingArg::Interp => {
                            SmoothingConfig::Interpolation { weights: None }
                        }
                        crate::SmoothingArg::Katz => SmoothingConfig::KatzBackoff { threshold: 5 },
                        crate::SmoothingArg::Kn => SmoothingConfig::KneserNey,
                    };
                    let model = ngram_train(&head, order, smoothing_config, 0.1)?;
                    let ppl = perplexity(&model, &tail)?;
                    let generated = ngram_generate(&model, config.gen_tokens, seed)?;
                    (generated, Some(ppl.value), true)
                }
                RowSpec::Simon => {
                    let generated =
                        simon_generate(SimonParams { a: config.simon_a, seed }, config.gen_tokens)?;
                    (generated, None, false)
                }
                RowSpec::PitmanYor => {
                    let generated = pitman_yor_generate(
                        PitmanYorParams { a: config.py_a, b: config.py_b, seed },
                        config.gen_tokens,
                    )?;
                    (generated, None, false)
                }
            };
            let mut row_config = analysis_config.clone();
            row_config.include_ebeling = analysis_config.include_ebeling && ebeling;
            let mut report = full_report(&analyzed, &row_config, Some(&original_report));
            report.meta = Some(util::meta(&config.input, hash, Some(seed)));
            write_report_files(&rows_dir.join(&name), &report)
                .map_err(|e| CliError::Io(format!("writing {name} report: {e}")))?;
            Ok(RowResult::from_report(name.clone(), seed, ppl, &report))
        };
        run_row().unwrap_or_else(|e| RowResult::failed(spec.name(), seed, e.to_string()))
    };

    #[cfg(feature = "parallel")]
    let mut rows: Vec<RowResult> = {
        use rayon::prelude::*;
        (1..ROWS.len()).into_par_iter().map(work).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut rows: Vec<RowResult> = (1..ROWS.len()).map(work).collect();
    rows.insert(0, original_row);

    for row in &rows {
        if let Some(e) = &row.error {
            eprintln!("warning: row {} failed: {e}", row.name);
        }
    }

    let summary = PipelineSummary {
        meta: util::meta(&config.input, hash, Some(config.seed)),
        n_tokens: stream.len() as u64,
        vocabulary: stream.vocab().len() as u64,
        gen_tokens: config.gen_tokens,
        held_out_fraction: config.held_out_fraction,
        warnings,
        rows,
    };

    let tsv = render_tsv(&summary);
    util::write_bytes(&util::with_suffix(&config.output, ".summary.tsv"), tsv.as_bytes())?;
    let mut json = serde_json::to_vec_pretty(&summary)
        .map_err(|e| CliError::Internal(format!("serializing summary: {e}")))?;
    json.push(b'\n');
    util::write_bytes(&util::with_suffix(&config.output, ".summary.json"), &json)?;

    match config.format {
        FormatArg::Tsv => print!("{tsv}"),
        FormatArg::Json => {
            print!("{}", String::from_utf8_lossy(&json));
        }
    }
    Ok(())
}

const TSV_HEADER: &str = "row\tperplexity\tzipf\theaps_beta\theaps_eps\tebeling_eta\tebeling_eps\ttaylor_zeta\ttaylor_eps\tlrc_verdict\tlrc_xi\tlrc_eps\terror";

fn render_tsv(summary: &PipelineSummary) -> String {
    let num = |v: Option<f64>| -> String {
        match v {
            Some(x) => format!("{x:.4}"),
            None => "-".into(),
        }
    };
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for r in &summary.rows {
        let zipf = if r.error.is_none() { "yes" } else { "-" };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.name,
            num(r.perplexity),
            zipf,
            num(r.heaps_beta),
            num(r.heaps_eps),
            num(r.ebeling_eta),
            num(r.ebeling_eps),
            num(r.taylor_zeta),
            num(r.taylor_eps),
            r.lrc_verdict.as_deref().unwrap_or("-"),
            num(r.lrc_xi),
            num(r.lrc_eps),
            r.error.as_deref().unwrap_or("-"),
        );
    }
    out
}
