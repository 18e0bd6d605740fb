//! The `shuffle`, `train`, `generate`, and `score` subcommands.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use textlaws::models::{
    load_model, ngram_generate, ngram_train, perplexity, pitman_yor_generate, save_model,
    simon_generate, PitmanYorParams, SimonParams, SmoothingConfig,
};
use textlaws::textio::shuffle_ngram;

use crate::util::{self, CliError};
use crate::{FormatArg, PreprocessArgs, SmoothingArg};

pub fn shuffle(input: &Path, output: &Path, ngram: usize, seed: u64) -> Result<(), CliError> {
    if ngram < 1 {
        return Err(CliError::Usage("--ngram must be at least 1".into()));
    }
    let no_preprocess = PreprocessArgs {
        min_freq: 1,
        replace_numbers: false,
    };
    let (stream, _) = util::read_corpus(input, &no_preprocess)?;
    if stream.is_empty() {
        return Err(CliError::InsufficientData("input corpus is empty".into()));
    }
    let shuffled = shuffle_ngram(&stream, ngram, seed);
    util::write_bytes(output, shuffled.render_file().as_bytes())
}

#[allow(clippy::too_many_arguments)]
pub fn train(
    input: &Path,
    output: &Path,
    order: usize,
    smoothing: SmoothingArg,
    katz_threshold: u32,
    held_out_fraction: f64,
    lambda: Option<Vec<f64>>,
    preprocess: &PreprocessArgs,
) -> Result<(), CliError> {
    let (stream, _) = util::read_corpus(input, preprocess)?;
    let config = match smoothing {
        SmoothingArg::Mle => SmoothingConfig::Mle,
        SmoothingArg::Interp => SmoothingConfig::Interpolation { weights: lambda },
        SmoothingArg::Katz => SmoothingConfig::KatzBackoff {
            threshold: katz_threshold,
        },
        SmoothingArg::Kn => SmoothingConfig::KneserNey,
    };
    let model = ngram_train(&stream, order, config, held_out_fraction)?;
    if let Some(parent) = output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    let file = File::create(output)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", output.display())))?;
    save_model(&model, BufWriter::new(file))?;
    eprintln!(
        "trained {}-gram ({}) on {} tokens, vocabulary {}",
        order,
        model.smoothing().name(),
        stream.len(),
        stream.vocab().len()
    );
    Ok(())
}

pub fn generate(
    output: &Path,
    length: usize,
    seed: u64,
    model: Option<&Path>,
    simon_a: Option<f64>,
    py_a: Option<f64>,
    py_b: Option<f64>,
) -> Result<(), CliError> {
    let stream = match (model, simon_a, py_a, py_b) {
        (Some(path), None, None, None) => {
            let file = File::open(path)
                .map_err(|e| CliError::Io(format!("opening {}: {e}", path.display())))?;
            let model = load_model(BufReader::new(file))?;
            ngram_generate(&model, length, seed)?
        }
        (None, Some(a), None, None) => simon_generate(SimonParams { a, seed }, length)?,
        (None, None, Some(a), Some(b)) => {
            pitman_yor_generate(PitmanYorParams { a, b, seed }, length)?
        }
        _ => {
            return Err(CliError::Usage(
                "choose one generator: --model, --simon-a, or --py-a/--py-b".into(),
            ))
        }
    };
    util::write_bytes(output, stream.render_file().as_bytes())
}

pub fn score(
    model_path: &Path,
    input: &Path,
    output: Option<&Path>,
    format: FormatArg,
) -> Result<(), CliError> {
    let file = File::open(model_path)
        .map_err(|e| CliError::Io(format!("opening {}: {e}", model_path.display())))?;
    let model = load_model(BufReader::new(file))?;
    let no_preprocess = PreprocessArgs {
        min_freq: 1,
        replace_numbers: false,
    };
    let (stream, _) = util::read_corpus(input, &no_preprocess)?;
    let result = perplexity(&model, &stream)?;
    let rendered = match format {
        FormatArg::Json => {
            let mut s = serde_json::to_string_pretty(&result)
                .map_err(|e| CliError::Internal(format!("serializing result: {e}")))?;
            s.push('\n');
            s
        }
        FormatArg::Tsv => format!(
            "perplexity\tn_tokens\toov_count\tzero_prob_positions\n{}\t{}\t{}\t{}\n",
            result.value, result.n_tokens, result.oov_count, result.zero_prob_positions
        ),
    };
    match output {
        Some(path) => util::write_bytes(path, rendered.as_bytes())?,
        None => {
            std::io::stdout()
                .write_all(rendered.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}
