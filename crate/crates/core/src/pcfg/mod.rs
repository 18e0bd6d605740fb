//! PCFG pipeline: treebank reading, grammar induction, CNF binarization,
//! CKY Viterbi scoring, and top-down sentence sampling.

mod cky;
mod grammar;
mod profile;
mod sample;
mod tree;

pub use cky::{viterbi_nll, viterbi_nll_batch, CkyOptions, ParseOutcome};
pub use grammar::{
    binarize, induce_grammar, induce_grammar_with_unk, CnfGrammar, PcfgGrammar, Production,
    Symbol, UNK_TERMINAL,
};
pub use profile::{nll_length_profile, pearson, NllProfile, ProfileRow};
pub use sample::{sample_sentence, SampleOutcome};
pub use tree::{parse_treebank, Tree, Treebank};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PcfgError {
    #[error("treebank format error in tree {tree_index}: {message}")]
    Format { tree_index: usize, message: String },
    #[error("grammar file error on line {line}: {message}")]
    GrammarFile { line: usize, message: String },
    #[error("empty treebank")]
    EmptyTreebank,
    #[error("token {token:?} is outside the terminal alphabet and the grammar has no <unk>")]
    Vocabulary { token: String },
    #[error("sentence of {len} tokens exceeds the configured cap of {cap}")]
    LengthCap { len: usize, cap: usize },
    #[error("cannot parse an empty sentence")]
    EmptySentence,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
