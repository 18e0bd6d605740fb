//! The `pcfg` subcommand family.

use std::fmt::Write as _;
use std::path::Path;

use textlaws::pcfg::{
    binarize, induce_grammar, induce_grammar_with_unk, nll_length_profile, parse_treebank,
    sample_sentence, viterbi_nll_batch, CkyOptions, ParseOutcome, PcfgGrammar, SampleOutcome,
};

use crate::util::{self, CliError};
use crate::PcfgCommand;

pub fn run(command: PcfgCommand) -> Result<(), CliError> {
    match command {
        PcfgCommand::Induce { input, output, unk } => induce(&input, &output, unk),
        PcfgCommand::Sample {
            grammar,
            output,
            count,
            seed,
            max_depth,
        } => sample(&grammar, &output, count, seed, max_depth),
        PcfgCommand::Score {
            grammar,
            input,
            output,
            max_len,
            unk,
        } => score(&grammar, &input, &output, max_len, unk),
        PcfgCommand::Profile {
            grammar,
            input,
            output,
            chunks,
            min_len,
            max_len,
            per_length,
            seed,
            unk,
        } => profile(
            &grammar, &input, &output, chunks, min_len, max_len, per_length, seed, unk,
        ),
    }
}

fn load_grammar(path: &Path) -> Result<PcfgGrammar, CliError> {
    let bytes = util::read_bytes(path)?;
    Ok(PcfgGrammar::read_text(&bytes[..])?)
}

fn induce(input: &Path, output: &Path, unk: bool) -> Result<(), CliError> {
    let bytes = util::read_bytes(input)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::InputFormat(format!("{}: {e}", input.display())))?;
    let treebank = parse_treebank(text)?;
    let grammar = if unk {
        induce_grammar_with_unk(&treebank)?
    } else {
        induce_grammar(&treebank)?
    };
    let mut out = Vec::new();
    grammar
        .write_text(&mut out)
        .map_err(|e| CliError::Io(format!("serializing grammar: {e}")))?;
    util::write_bytes(output, &out)?;
    eprintln!(
        "induced {} productions from {} trees",
        grammar.productions().len(),
        treebank.trees.len()
    );
    Ok(())
}

fn sample(
    grammar_path: &Path,
    output: &Path,
    count: usize,
    seed: u64,
    max_depth: usize,
) -> Result<(), CliError> {
    let grammar = load_grammar(grammar_path)?;
    let mut out = String::new();
    let mut produced = 0usize;
    let mut next_seed = seed;
    let mut attempts = 0usize;
    while produced < count {
        if attempts > count * 100 + 1000 {
            return Err(CliError::InsufficientData(format!(
                "grammar exceeded the depth cap on nearly every sample ({produced}/{count} produced)"
            )));
        }
        attempts += 1;
        match sample_sentence(&grammar, next_seed, max_depth) {
            SampleOutcome::Sentence { tokens, .. } => {
                let _ = writeln!(out, "{}", tokens.join(" "));
                produced += 1;
            }
            SampleOutcome::DepthExceeded => {}
        }
        next_seed = next_seed.wrapping_add(1);
    }
    util::write_bytes(output, out.as_bytes())
}

fn sentences_from(bytes: &[u8], path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::InputFormat(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect())
}

fn score(
    grammar_path: &Path,
    input: &Path,
    output: &Path,
    max_len: usize,
    unk: bool,
) -> Result<(), CliError> {
    let grammar = binarize(&load_grammar(grammar_path)?);
    let bytes = util::read_bytes(input)?;
    let sentences = sentences_from(&bytes, input)?;
    if sentences.is_empty() {
        return Err(CliError::InsufficientData("no sentences to score".into()));
    }
    let options = CkyOptions {
        max_len,
        oov_to_unk: unk,
    };
    let outcomes = viterbi_nll_batch(&grammar, &sentences, &options);
    let mut out = String::from("# index\tlength\tnll\n");
    for (i, (sentence, outcome)) in sentences.iter().zip(outcomes).enumerate() {
        match outcome {
            Ok(ParseOutcome::Parsed { nll }) => {
                let _ = writeln!(out, "{i}\t{}\t{nll}", sentence.len());
            }
            Ok(ParseOutcome::Unparseable) => {
                let _ = writeln!(out, "{i}\t{}\tunparseable", sentence.len());
            }
            Err(e) => {
                let _ = writeln!(out, "{i}\t{}\tskipped: {e}", sentence.len());
            }
        }
    }
    util::write_bytes(output, out.as_bytes())
}

#[allow(clippy::too_many_arguments)]
fn profile(
    grammar_path: &Path,
    input: &Path,
    output: &Path,
    chunks: bool,
    min_len: usize,
    max_len: usize,
    per_length: usize,
    seed: u64,
    unk: bool,
) -> Result<(), CliError> {
    if min_len < 1 || max_len < min_len {
        return Err(CliError::Usage("invalid --min-len/--max-len range".into()));
    }
    let grammar = binarize(&load_grammar(grammar_path)?);
    let bytes = util::read_bytes(input)?;
    let items: Vec<Vec<String>> = if chunks {
        random_chunks(&bytes, input, min_len, max_len, per_length, seed)?
    } else {
        sentences_from(&bytes, input)?
    };
    if items.is_empty() {
        return Err(CliError::InsufficientData("no items to profile".into()));
    }
    let options = CkyOptions {
        max_len: max_len.max(CkyOptions::default().max_len),
        oov_to_unk: unk,
    };
    let profile = nll_length_profile(&grammar, &items, &options)?;
    let mut out = Vec::new();
    profile
        .write_tsv(&mut out)
        .map_err(|e| CliError::Io(format!("serializing profile: {e}")))?;
    util::write_bytes(output, &out)?;
    match profile.pearson_length_mean {
        Some(r) => println!("pearson_length_mean\t{r}"),
        None => println!("pearson_length_mean\t-"),
    }
    println!("unparseable\t{}", profile.unparseable);
    println!("skipped\t{}", profile.skipped);
    Ok(())
}

/// Consecutive chunks of each length drawn at seeded random offsets from
/// continuous text.
fn random_chunks(
    bytes: &[u8],
    path: &Path,
    min_len: usize,
    max_len: usize,
    per_length: usize,
    seed: u64,
) -> Result<Vec<Vec<String>>, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::InputFormat(format!("{}: {e}", path.display())))?;
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() < max_len {
        return Err(CliError::InsufficientData(format!(
            "text has {} tokens, need at least {max_len}",
            tokens.len()
        )));
    }
    // A splitmix-style index sequence keeps this free of extra deps.
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
    let mut next = move || {
        state ^= state >> 30;
        state = state.wrapping_mul(0xBF58476D1CE4E5B9);
        state ^= state >> 27;
        state = state.wrapping_mul(0x94D049BB133111EB);
        state ^= state >> 31;
        state
    };
    let mut items = Vec::with_capacity((max_len - min_len + 1) * per_length);
    for len in min_len..=max_len {
        for _ in 0..per_length {
            let start = (next() % (tokens.len() - len + 1) as u64) as usize;
            items.push(tokens[start..start + len].iter().map(|s| s.to_string()).collect());
        }
    }
    Ok(items)
}
