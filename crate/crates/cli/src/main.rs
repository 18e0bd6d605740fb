//! textlaws: corpus scaling-law analyses and baseline text generators.

mod analyze;
mod model_cmds;
mod pcfg_cmds;
mod pipeline;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "textlaws",
    version,
    about = "Measure the scaling properties of text and train/generate from baseline language models",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SmoothingArg {
    Mle,
    Interp,
    Katz,
    Kn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
}

/// Analysis parameters shared by `analyze` and `pipeline`.
#[derive(Args, Clone)]
struct AnalysisArgs {
    /// Taylor's law segment length in tokens.
    #[arg(long = "taylor-l", default_value_t = 5620)]
    taylor_l: usize,
    /// Rarity divisor Q for the long-range correlation analysis.
    #[arg(long = "lrc-q", default_value_t = 16)]
    lrc_q: u64,
    /// Log-spaced samples per decade (vocabulary growth and fluctuation
    /// analysis).
    #[arg(long = "samples-per-decade", default_value_t = 10)]
    samples_per_decade: usize,
    /// Skip the character-level fluctuation analysis.
    #[arg(long = "no-ebeling")]
    no_ebeling: bool,
}

/// Preprocessing applied before an operation reads the corpus.
#[derive(Args, Clone)]
struct PreprocessArgs {
    /// Replace words rarer than this with <unk> (1 = keep everything).
    #[arg(long = "min-freq", default_value_t = 1)]
    min_freq: u64,
    /// Replace number-like tokens with N.
    #[arg(long = "replace-numbers")]
    replace_numbers: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run all five scaling analyses and write a report plus point files.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Output prefix: writes <prefix>.report.json and <prefix>.*.tsv.
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        preprocess: PreprocessArgs,
        /// Earlier report to diff exponents against (Q2).
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Also write gnuplot script stubs next to the point files.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Split a corpus into n-token chunks and shuffle them.
    Shuffle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Chunk size in tokens.
        #[arg(long = "ngram", default_value_t = 1)]
        ngram: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Train an n-gram language model and save it.
    Train {
        #[arg(long)]
        input: PathBuf,
        /// Model file to write.
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_enum, default_value = "kn")]
        smoothing: SmoothingArg,
        /// Good-Turing discount threshold for Katz backoff.
        #[arg(long = "katz-threshold", default_value_t = 5)]
        katz_threshold: u32,
        /// Fraction of the stream tail held out for interpolation-weight
        /// estimation.
        #[arg(long = "held-out-fraction", default_value_t = 0.1)]
        held_out_fraction: f64,
        /// Fixed interpolation weights (comma separated, one per order)
        /// instead of held-out estimation.
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
        #[command(flatten)]
        preprocess: PreprocessArgs,
    },
    /// Generate tokens from a saved n-gram model or a Simon/Pitman-Yor
    /// process.
    Generate {
        #[arg(long)]
        output: PathBuf,
        /// Number of tokens to generate.
        #[arg(long, default_value_t = 1_000_000)]
        length: usize,
        /// Generation seed (required: generation must be reproducible).
        #[arg(long)]
        seed: u64,
        /// Saved n-gram model file.
        #[arg(long, conflicts_with_all = ["simon_a", "py_a", "py_b"])]
        model: Option<PathBuf>,
        /// Simon process new-word probability.
        #[arg(long = "simon-a", conflicts_with_all = ["py_a", "py_b"])]
        simon_a: Option<f64>,
        /// Pitman-Yor discount.
        #[arg(long = "py-a", requires = "py_b")]
        py_a: Option<f64>,
        /// Pitman-Yor strength.
        #[arg(long = "py-b", requires = "py_a")]
        py_b: Option<f64>,
    },
    /// Compute the perplexity of text under a saved model.
    Score {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// PCFG operations: induction, sampling, scoring, NLL profiles.
    #[command(subcommand)]
    Pcfg(PcfgCommand),
    /// Reproduce the evaluation table: shuffles, n-gram models, and urn
    /// processes, each analyzed against the corpus.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        /// Output prefix: writes <prefix>.summary.{tsv,json} and per-row
        /// reports under <prefix>.rows/.
        #[arg(long)]
        output: PathBuf,
        /// Base seed; row i uses seed + i.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tokens generated per model row.
        #[arg(long = "gen-tokens", default_value_t = 1_000_000)]
        gen_tokens: usize,
        /// Fraction of the corpus held out for perplexity.
        #[arg(long = "held-out-fraction", default_value_t = 0.1)]
        held_out_fraction: f64,
        /// Simon process new-word probability.
        #[arg(long = "simon-a", default_value_t = 0.1)]
        simon_a: f64,
        /// Pitman-Yor discount.
        #[arg(long = "py-a", default_value_t = 0.8)]
        py_a: f64,
        /// Pitman-Yor strength.
        #[arg(long = "py-b", default_value_t = 1.0)]
        py_b: f64,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        preprocess: PreprocessArgs,
        #[arg(long, value_enum, default_value = "tsv")]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum PcfgCommand {
    /// Induce a grammar from a bracketed treebank.
    Induce {
        #[arg(long)]
        input: PathBuf,
        /// Grammar file to write (lhs<TAB>rhs<TAB>probability lines).
        #[arg(long)]
        output: PathBuf,
        /// Replace hapax terminals with <unk> for OOV scoring.
        #[arg(long)]
        unk: bool,
    },
    /// Sample sentences from a grammar, one per line.
    Sample {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long = "max-depth", default_value_t = 80)]
        max_depth: usize,
    },
    /// Viterbi-score sentences (one per line) under a grammar.
    Score {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// TSV output: index, length, nll | "unparseable".
        #[arg(long)]
        output: PathBuf,
        #[arg(long = "max-len", default_value_t = 50)]
        max_len: usize,
        /// Map out-of-alphabet words to <unk>.
        #[arg(long)]
        unk: bool,
    },
    /// NLL-versus-length profile over sentences or random chunks.
    Profile {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// TSV output of per-length mean/min/max NLL.
        #[arg(long)]
        output: PathBuf,
        /// Treat the input as continuous text and draw random chunks
        /// (otherwise: one sentence per line).
        #[arg(long)]
        chunks: bool,
        #[arg(long = "min-len", default_value_t = 4)]
        min_len: usize,
        #[arg(long = "max-len", default_value_t = 30)]
        max_len: usize,
        /// Chunks drawn per length (chunk mode).
        #[arg(long = "per-length", default_value_t = 50)]
        per_length: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Map out-of-alphabet words to <unk>.
        #[arg(long)]
        unk: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze {
            input,
            output,
            analysis,
            preprocess,
            reference,
            gnuplot,
        } => analyze::run(
            &input,
            &output,
            &analysis,
            &preprocess,
            reference.as_deref(),
            gnuplot,
        ),
        Command::Shuffle {
            input,
            output,
            ngram,
            seed,
        } => model_cmds::shuffle(&input, &output, ngram, seed),
        Command::Train {
            input,
            output,
            order,
            smoothing,
            katz_threshold,
            held_out_fraction,
            lambda,
            preprocess,
        } => model_cmds::train(
            &input,
            &output,
            order,
            smoothing,
            katz_threshold,
            held_out_fraction,
            lambda,
            &preprocess,
        ),
        Command::Generate {
            output,
            length,
            seed,
            model,
            simon_a,
            py_a,
            py_b,
        } => model_cmds::generate(&output, length, seed, model.as_deref(), simon_a, py_a, py_b),
        Command::Score {
            model,
            input,
            output,
            format,
        } => model_cmds::score(&model, &input, output.as_deref(), format),
        Command::Pcfg(command) => pcfg_cmds::run(command),
        Command::Pipeline {
            input,
            output,
            seed,
            gen_tokens,
            held_out_fraction,
            simon_a,
            py_a,
            py_b,
            analysis,
            preprocess,
            format,
        } => pipeline::run(&pipeline::PipelineConfig {
            input,
            output,
            seed,
            gen_tokens,
            held_out_fraction,
            simon_a,
            py_a,
            py_b,
            analysis,
            preprocess,
            format,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("textlaws: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
