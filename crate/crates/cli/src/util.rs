//! Shared CLI plumbing: error-to-exit-code mapping, file IO with path
//! context, report metadata.

use std::fmt;
use std::fs;
use std::path::Path;

use textlaws::models::ModelError;
use textlaws::pcfg::PcfgError;
use textlaws::scaling::{fnv1a64, ReportMeta, ScalingError};
use textlaws::textio::TextError;
use textlaws::TokenStream;

/// Exit codes: 1 general, 2 insufficient data, 3 input format error,
/// 4 internal invariant violation.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    InsufficientData(String),
    InputFormat(String),
    Internal(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Usage(_) => 1,
            CliError::InsufficientData(_) => 2,
            CliError::InputFormat(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m)
            | CliError::InsufficientData(m)
            | CliError::InputFormat(m)
            | CliError::Internal(m)
            | CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<TextError> for CliError {
    fn from(e: TextError) -> Self {
        match e {
            TextError::InvalidUtf8 { .. } => CliError::InputFormat(e.to_string()),
            TextError::EmptyStream => CliError::InsufficientData(e.to_string()),
        }
    }
}

impl From<ScalingError> for CliError {
    fn from(e: ScalingError) -> Self {
        match e {
            ScalingError::InsufficientData { .. }
            | ScalingError::DegenerateVariance
            | ScalingError::DegenerateSeries => CliError::InsufficientData(e.to_string()),
            ScalingError::Fit(_) => CliError::InsufficientData(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::InsufficientData(_) => CliError::InsufficientData(e.to_string()),
            ModelError::InvalidParameter(_) => CliError::Usage(e.to_string()),
            ModelError::VocabularyMismatch { .. } | ModelError::Format(_) => {
                CliError::InputFormat(e.to_string())
            }
            ModelError::Io(io) => CliError::Io(io.to_string()),
        }
    }
}

impl From<PcfgError> for CliError {
    fn from(e: PcfgError) -> Self {
        match e {
            PcfgError::Format { .. }
            | PcfgError::GrammarFile { .. }
            | PcfgError::Vocabulary { .. } => CliError::InputFormat(e.to_string()),
            PcfgError::EmptyTreebank | PcfgError::EmptySentence => {
                CliError::InsufficientData(e.to_string())
            }
            PcfgError::LengthCap { .. } => CliError::Usage(e.to_string()),
            PcfgError::Io(io) => CliError::Io(io.to_string()),
        }
    }
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Read, tokenize, and preprocess a corpus file; also returns the input
/// content hash for report metadata.
pub fn read_corpus(
    path: &Path,
    preprocess: &crate::PreprocessArgs,
) -> Result<(TokenStream, u64), CliError> {
    let bytes = read_bytes(path)?;
    let hash = fnv1a64(&bytes);
    let stream = textlaws::tokenize(&bytes).map_err(|e| {
        CliError::InputFormat(format!("{}: {e}", path.display()))
    })?;
    let stream = if preprocess.min_freq > 1 || preprocess.replace_numbers {
        textlaws::textio::preprocess(&stream, preprocess.min_freq, preprocess.replace_numbers)
    } else {
        stream
    };
    Ok((stream, hash))
}

pub fn meta(input: &Path, hash: u64, seed: Option<u64>) -> ReportMeta {
    ReportMeta {
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        input_path: Some(input.display().to_string()),
        input_hash: Some(format!("{hash:016x}")),
        seed,
        rng: seed.map(|_| "chacha8".to_owned()),
    }
}

/// Append an extension to a path without replacing the existing one.
pub fn with_suffix(prefix: &Path, suffix: &str) -> std::path::PathBuf {
    let mut os = prefix.as_os_str().to_owned();
    os.push(suffix);
    std::path::PathBuf::from(os)
}
