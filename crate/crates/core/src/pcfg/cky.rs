//! CKY Viterbi scoring.
//!
//! The chart stores max-probability derivations per span in the
//! probability domain; with the default 50-token cap, scores stay far
//! above f64's underflow range, and products of the same rule weights are
//! reproducible regardless of discovery order (max is order-insensitive).

use std::collections::HashMap;

use crate::parallel;

use super::grammar::CnfGrammar;
use super::PcfgError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParseOutcome {
    Parsed { nll: f64 },
    /// No parse exists; a result, not an error.
    Unparseable,
}

impl ParseOutcome {
    pub fn nll(&self) -> Option<f64> {
        match self {
            ParseOutcome::Parsed { nll } => Some(*nll),
            ParseOutcome::Unparseable => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CkyOptions {
    /// Longest sentence accepted (CKY is cubic in length).
    pub max_len: usize,
    /// Map out-of-alphabet tokens to the `<unk>` terminal when the
    /// grammar has one.
    pub oov_to_unk: bool,
}

impl Default for CkyOptions {
    fn default() -> Self {
        CkyOptions {
            max_len: 50,
            oov_to_unk: false,
        }
    }
}

/// Negative log-likelihood (nats) of the best parse.
pub fn viterbi_nll<S: AsRef<str>>(
    grammar: &CnfGrammar,
    sentence: &[S],
    options: &CkyOptions,
) -> Result<ParseOutcome, PcfgError> {
    let n = sentence.len();
    if n == 0 {
        return Err(PcfgError::EmptySentence);
    }
    if n > options.max_len {
        return Err(PcfgError::LengthCap {
            len: n,
            cap: options.max_len,
        });
    }
    let unk = if options.oov_to_unk {
        grammar.terminal_id(super::grammar::UNK_TERMINAL)
    } else {
        None
    };
    let mut terms = Vec::with_capacity(n);
    for w in sentence {
        let w = w.as_ref();
        match grammar.terminal_id(w).or(unk) {
            Some(t) => terms.push(t),
            None => {
                return Err(PcfgError::Vocabulary {
                    token: w.to_owned(),
                })
            }
        }
    }

    // chart[span(i, j)]: best probability per nonterminal over words i..j.
    let cell = |i: usize, j: usize| i * (n + 1) + j;
    let mut chart: Vec<HashMap<u32, f64>> = vec![HashMap::new(); (n + 1) * (n + 1)];
    for (i, &t) in terms.iter().enumerate() {
        let slot = &mut chart[cell(i, i + 1)];
        for &(lhs, p) in &grammar.lex_by_term[t as usize] {
            let e = slot.entry(lhs).or_insert(0.0);
            if p > *e {
                *e = p;
            }
        }
    }
    for width in 2..=n {
        for i in 0..=n - width {
            let j = i + width;
            let mut best: HashMap<u32, f64> = HashMap::new();
            for split in i + 1..j {
                let left = &chart[cell(i, split)];
                let right = &chart[cell(split, j)];
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                for (&l_sym, &l_p) in left {
                    let Some(rules) = grammar.by_left.get(&l_sym) else {
                        continue;
                    };
                    for &(r_sym, lhs, rule_p) in rules {
                        let Some(&r_p) = right.get(&r_sym) else {
                            continue;
                        };
                        let cand = (rule_p * l_p) * r_p;
                        let e = best.entry(lhs).or_insert(0.0);
                        if cand > *e {
                            *e = cand;
                        }
                    }
                }
            }
            chart[cell(i, j)] = best;
        }
    }
    match chart[cell(0, n)].get(&grammar.start()) {
        Some(&p) if p > 0.0 => Ok(ParseOutcome::Parsed { nll: -p.ln() }),
        _ => Ok(ParseOutcome::Unparseable),
    }
}

/// Score many sentences; independent parses run in parallel with the
/// output in input order.
pub fn viterbi_nll_batch(
    grammar: &CnfGrammar,
    sentences: &[Vec<String>],
    options: &CkyOptions,
) -> Vec<Result<ParseOutcome, PcfgError>> {
    parallel::ordered_map(sentences.len(), |i| {
        viterbi_nll(grammar, &sentences[i], options)
    })
}
