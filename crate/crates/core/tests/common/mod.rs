//! Shared test fixtures: synthetic corpora with (or without) the
//! statistical structure of natural text, and a tiny treebank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use textlaws::TokenStream;

/// Cumulative table for Zipfian sampling over `n` items with exponent
/// `alpha`.
pub struct ZipfSampler {
    cumulative: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(n: usize, alpha: f64) -> ZipfSampler {
        let weights: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-alpha)).collect();
        let total: f64 = weights.iter().sum();
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w / total;
                Some(*acc)
            })
            .collect();
        ZipfSampler { cumulative }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.random();
        self.cumulative.partition_point(|&c| c < u)
    }
}

/// Tokens drawn i.i.d. from one Zipfian unigram distribution: Zipf and
/// Heaps hold, but there is no memory of any kind.
pub fn iid_zipf_corpus(n_tokens: usize, vocab: usize, seed: u64) -> TokenStream {
    let sampler = ZipfSampler::new(vocab, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surfaces: Vec<String> = (0..n_tokens)
        .map(|_| format!("w{}", sampler.sample(&mut rng)))
        .collect();
    TokenStream::from_surfaces(&surfaces)
}

/// A corpus with the long-memory structure of natural text, built from
/// three ingredients:
///
/// - sentences over a handful of templates, giving local n-gram syntax;
/// - fixed name collocations (a first name determines its surname), so
///   some frequent words occur only in a single context;
/// - a sticky topic process: each topic owns a Zipfian content lexicon
///   whose size and tail weight differ by topic, and topics persist for
///   thousands of tokens, so rare-word density fluctuates slowly.
///
/// The topic persistence produces Taylor exponents well above 0.5 and
/// positively correlated rare-word return intervals; shuffling in small
/// chunks destroys both.
pub fn naturalish_corpus(n_tokens: usize, seed: u64) -> TokenStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_topics = 20usize;

    let determiners = ["the", "a", "this", "that", "each", "its", "some"];
    let det_dist = ZipfSampler::new(determiners.len(), 1.2);
    let preps = ["of", "in", "on", "with", "from", "under"];
    let prep_dist = ZipfSampler::new(preps.len(), 1.2);
    let auxes = ["is", "was", "has", "had", "will"];
    let aux_dist = ZipfSampler::new(auxes.len(), 1.2);

    // Per-topic lexicon sizes and tail weights vary, so the rare-word
    // density depends on the active topic. Every pool has a long Zipf
    // tail: natural text keeps producing hapax continuations everywhere.
    let topic_nouns: Vec<(usize, f64)> = (0..n_topics)
        .map(|t| (600 + 400 * (t % 7), 0.85 + 0.04 * (t % 9) as f64))
        .collect();
    let noun_dists: Vec<ZipfSampler> = topic_nouns
        .iter()
        .map(|&(n, a)| ZipfSampler::new(n, a))
        .collect();
    let verb_dists: Vec<ZipfSampler> = (0..n_topics)
        .map(|t| ZipfSampler::new(400 + 250 * (t % 5), 1.0))
        .collect();
    let adj_dists: Vec<ZipfSampler> = (0..n_topics)
        .map(|t| ZipfSampler::new(300 + 150 * (t % 4), 1.0))
        .collect();
    // Shared content lexicon mixed into every topic.
    let shared_nouns = ZipfSampler::new(2500, 1.0);
    let name_dist = ZipfSampler::new(180, 1.0);
    // Rare modifiers keep every frequent context supplied with singleton
    // continuations, the way real text does.
    let adverbs = ZipfSampler::new(3000, 1.0);

    let mut tokens: Vec<String> = Vec::with_capacity(n_tokens + 16);
    let mut topic = 0usize;
    while tokens.len() < n_tokens {
        // Sticky topics: expected episode length of a few hundred
        // sentences (thousands of tokens).
        if rng.random::<f64>() < 0.004 {
            topic = rng.random_range(0..n_topics);
        }
        let noun = |rng: &mut ChaCha8Rng, tokens: &mut Vec<String>| {
            if rng.random::<f64>() < 0.25 {
                tokens.push(format!("c{}", shared_nouns.sample(rng)));
            } else {
                tokens.push(format!("n{topic}_{}", noun_dists[topic].sample(rng)));
            }
        };
        let verb = |rng: &mut ChaCha8Rng, tokens: &mut Vec<String>| {
            tokens.push(format!("v{topic}_{}", verb_dists[topic].sample(rng)));
            if rng.random::<f64>() < 0.12 {
                tokens.push(format!("d{}", adverbs.sample(rng)));
            }
        };
        // Noun phrase: usually DET NOUN, sometimes a bare noun. After a
        // preposition the bare-noun rate is higher (open-class objects).
        let np = |rng: &mut ChaCha8Rng, tokens: &mut Vec<String>, bare: f64| {
            if rng.random::<f64>() >= bare {
                tokens.push(determiners[det_dist.sample(rng)].to_owned());
            }
            if rng.random::<f64>() < 0.25 {
                tokens.push(format!("c{}", shared_nouns.sample(rng)));
            } else {
                tokens.push(format!("n{topic}_{}", noun_dists[topic].sample(rng)));
            }
        };
        // Base template lengths are parity-balanced so that chunk
        // shuffles cannot preserve slot alignment.
        match rng.random_range(0..5u32) {
            0 => {
                // DET ADJ NOUN VERB NP
                tokens.push(determiners[det_dist.sample(&mut rng)].to_owned());
                tokens.push(format!("a{topic}_{}", adj_dists[topic].sample(&mut rng)));
                noun(&mut rng, &mut tokens);
                verb(&mut rng, &mut tokens);
                np(&mut rng, &mut tokens, 0.06);
            }
            1 => {
                // NP VERB PREP NP
                np(&mut rng, &mut tokens, 0.06);
                verb(&mut rng, &mut tokens);
                tokens.push(preps[prep_dist.sample(&mut rng)].to_owned());
                np(&mut rng, &mut tokens, 0.2);
            }
            2 => {
                // NAME SURNAME VERB NP: the surname is a function of the
                // first name.
                let p = name_dist.sample(&mut rng);
                tokens.push(format!("fn{p}"));
                tokens.push(format!("ln{p}"));
                verb(&mut rng, &mut tokens);
                np(&mut rng, &mut tokens, 0.06);
            }
            3 => {
                // NP AUX VERB
                np(&mut rng, &mut tokens, 0.06);
                tokens.push(auxes[aux_dist.sample(&mut rng)].to_owned());
                verb(&mut rng, &mut tokens);
            }
            _ => {
                // NP PREP DET ADJ NOUN AUX VERB
                np(&mut rng, &mut tokens, 0.06);
                tokens.push(preps[prep_dist.sample(&mut rng)].to_owned());
                tokens.push(determiners[det_dist.sample(&mut rng)].to_owned());
                tokens.push(format!("a{topic}_{}", adj_dists[topic].sample(&mut rng)));
                noun(&mut rng, &mut tokens);
                tokens.push(auxes[aux_dist.sample(&mut rng)].to_owned());
                verb(&mut rng, &mut tokens);
            }
        }
    }
    tokens.truncate(n_tokens);
    TokenStream::from_surfaces(&tokens)
}

/// A small recursive treebank: enough structure for induced grammars to
/// produce sentences of widely varying lengths.
pub fn toy_treebank_text() -> String {
    let mut out = String::new();
    // Repetition weights the core rules; the recursive PP/SBAR rules give
    // long derivations.
    let trees = [
        "(S (NP (D the) (N dog)) (VP (V saw) (NP (D the) (N cat))))",
        "(S (NP (D the) (N cat)) (VP (V saw) (NP (D a) (N bird))))",
        "(S (NP (D a) (N bird)) (VP (V flew)))",
        "(S (NP (D the) (N dog)) (VP (V ran)))",
        "(S (NP (D the) (N man)) (VP (V saw) (NP (NP (D the) (N dog)) (PP (P with) (NP (D the) (N cat))))))",
        "(S (NP (NP (D the) (N man)) (PP (P in) (NP (D the) (N park)))) (VP (V slept)))",
        "(S (NP (D the) (N cat)) (VP (V thought) (SBAR (C that) (S (NP (D the) (N dog)) (VP (V ran))))))",
        "(S (NP (D the) (N bird)) (VP (V thought) (SBAR (C that) (S (NP (D the) (N man)) (VP (V saw) (NP (D the) (N cat)))))))",
        "(S (NP (D the) (N park)) (VP (V was) (ADJP (J quiet))))",
        "(S (NP (D the) (N man)) (VP (V ran) (PP (P in) (NP (D the) (N park)))))",
    ];
    for (i, t) in trees.iter().enumerate() {
        for _ in 0..(if i < 4 { 3 } else { 1 }) {
            out.push_str(t);
            out.push('\n');
        }
    }
    out
}
