//! Top-down sentence sampling from a PCFG.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grammar::{PcfgGrammar, Symbol};

#[derive(Debug, Clone, PartialEq)]
pub enum SampleOutcome {
    Sentence {
        tokens: Vec<String>,
        /// NLL of the sampled derivation itself (an upper bound on the
        /// sentence's Viterbi NLL).
        derivation_nll: f64,
    },
    /// Expansion exceeded the depth cap; callers resample with a new seed.
    DepthExceeded,
}

/// Expand the start symbol top-down, always rewriting the leftmost
/// nonterminal, choosing productions by their probabilities.
/// Deterministic under the seed.
pub fn sample_sentence(grammar: &PcfgGrammar, seed: u64, max_depth: usize) -> SampleOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tokens: Vec<String> = Vec::new();
    let mut nll = 0.0f64;
    // Leftmost expansion: a stack of (symbol, depth), top = leftmost.
    let mut stack: Vec<(Symbol, usize)> = vec![(Symbol::NonTerminal(grammar.start()), 0)];
    while let Some((symbol, depth)) = stack.pop() {
        match symbol {
            Symbol::Terminal(t) => tokens.push(grammar.terminal_name(t).to_owned()),
            Symbol::NonTerminal(nt) => {
                if depth >= max_depth {
                    return SampleOutcome::DepthExceeded;
                }
                let mut u: f64 = rng.random();
                let mut chosen = None;
                for p in grammar.productions_of(nt) {
                    if u < p.prob {
                        chosen = Some(p);
                        break;
                    }
                    u -= p.prob;
                }
                // Tiny normalization slack can push u past the last rule.
                let Some(p) = chosen.or_else(|| grammar.productions_of(nt).last()) else {
                    // A nonterminal with no productions cannot be expanded.
                    return SampleOutcome::DepthExceeded;
                };
                nll -= p.prob.ln();
                for s in p.rhs.iter().rev() {
                    stack.push((*s, depth + 1));
                }
            }
        }
    }
    SampleOutcome::Sentence {
        tokens,
        derivation_nll: nll,
    }
}
