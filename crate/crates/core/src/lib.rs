//! # textlaws
//!
//! A corpus-statistics toolkit for the scaling properties of text.
//!
//! Natural language text exhibits a handful of robust power-law regularities:
//! the rank-frequency distribution of words (Zipf's law), vocabulary growth
//! (Heaps' law), character-count fluctuation growth across window sizes
//! (Ebeling's method), the mean-variance relation of per-segment word counts
//! (Taylor's law), and power-law decay of the autocorrelation of rare-word
//! return intervals (long-range correlation). This crate measures all five
//! over a token stream and fits their exponents by least squares in log-log
//! space, so that text generated by a model can be compared quantitatively
//! against the corpus the model was trained on.
//!
//! The crate also ships the classical baseline generators those comparisons
//! need: the Simon and Pitman-Yor urn processes, n-gram language models with
//! MLE, linear-interpolation, Katz-backoff, and Kneser-Ney smoothing
//! (including perplexity evaluation), and a PCFG pipeline (treebank reading,
//! grammar induction, CNF binarization, CKY Viterbi scoring, and top-down
//! sentence sampling).
//!
//! ## Modules
//!
//! - [`textio`]: tokenization, vocabularies, preprocessing, n-gram chunk
//!   shuffling, token/character stream conversion.
//! - [`powerlaw`]: the shared log-log least-squares fitter.
//! - [`scaling`]: the five analyses and the combined [`scaling::ScalingReport`].
//! - [`models`]: Simon/Pitman-Yor processes, n-gram models, perplexity.
//! - [`pcfg`]: treebank reading, induction, binarization, CKY, sampling.
//!
//! ## Determinism
//!
//! Every randomized operation takes an explicit seed and uses ChaCha8, so
//! outputs are reproducible across platforms. With the `parallel` feature
//! (default) the heavy analyses fan out over rayon, but all reductions are
//! either exact integer sums or folds over order-preserving collected
//! buffers, so results are bit-identical to the sequential build and
//! independent of thread count.

#![forbid(unsafe_code)]

pub mod models;
pub mod pcfg;
pub mod powerlaw;
pub mod scaling;
pub mod textio;

mod parallel;

pub use powerlaw::{fit_power_law, PointSet, PowerLawFit};
pub use textio::{tokenize, CharStream, TokenId, TokenStream, Vocabulary};
