//! Corpus ingestion and token-stream plumbing.
//!
//! Tokens are maximal runs of non-whitespace in UTF-8 input; there is no
//! linguistic tokenization (the standard language-modeling datasets are
//! pre-tokenized). Ids are dense, assigned in first-seen order. All types
//! are immutable after construction and safe to share across threads.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense token id; `id < vocab.len()` always holds within a stream.
pub type TokenId = u32;

/// Surface reserved for rare-word replacement.
pub const UNK: &str = "<unk>";
/// Surface reserved for number replacement.
pub const NUMBER: &str = "N";

#[derive(Debug, Error)]
pub enum TextError {
    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: usize },
    #[error("empty stream")]
    EmptyStream,
}

/// Token surfaces, their dense ids, and their source-corpus frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    id_to_surface: Vec<String>,
    surface_to_id: HashMap<String, TokenId>,
    frequency: Vec<u64>,
}

impl Vocabulary {
    /// Number of distinct types.
    pub fn len(&self) -> usize {
        self.id_to_surface.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_surface.is_empty()
    }

    pub fn surface(&self, id: TokenId) -> &str {
        &self.id_to_surface[id as usize]
    }

    pub fn id(&self, surface: &str) -> Option<TokenId> {
        self.surface_to_id.get(surface).copied()
    }

    pub fn frequency(&self, id: TokenId) -> u64 {
        self.frequency[id as usize]
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.id_to_surface.iter().map(String::as_str)
    }

    /// Assemble a vocabulary from parallel surface/frequency vectors.
    /// Surfaces must be distinct. Panics on length mismatch or duplicates.
    pub(crate) fn from_raw_parts(id_to_surface: Vec<String>, frequency: Vec<u64>) -> Vocabulary {
        assert_eq!(id_to_surface.len(), frequency.len());
        let surface_to_id: HashMap<String, TokenId> = id_to_surface
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as TokenId))
            .collect();
        assert_eq!(surface_to_id.len(), id_to_surface.len(), "duplicate surface");
        Vocabulary {
            id_to_surface,
            surface_to_id,
            frequency,
        }
    }
}

#[derive(Default)]
struct VocabBuilder {
    id_to_surface: Vec<String>,
    surface_to_id: HashMap<String, TokenId>,
    frequency: Vec<u64>,
}

impl VocabBuilder {
    fn intern(&mut self, surface: &str) -> TokenId {
        if let Some(&id) = self.surface_to_id.get(surface) {
            self.frequency[id as usize] += 1;
            return id;
        }
        let id = self.id_to_surface.len() as TokenId;
        self.id_to_surface.push(surface.to_owned());
        self.surface_to_id.insert(surface.to_owned(), id);
        self.frequency.push(1);
        id
    }

    fn finish(self) -> Vocabulary {
        Vocabulary {
            id_to_surface: self.id_to_surface,
            surface_to_id: self.surface_to_id,
            frequency: self.frequency,
        }
    }
}

/// A sequence of token ids over a shared [`Vocabulary`].
#[derive(Debug, Clone)]
pub struct TokenStream {
    tokens: Vec<TokenId>,
    vocab: Arc<Vocabulary>,
}

impl TokenStream {
    /// Build a stream from an iterator of surfaces, interning in first-seen
    /// order.
    pub fn from_surfaces<I, S>(surfaces: I) -> TokenStream
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = VocabBuilder::default();
        let tokens = surfaces
            .into_iter()
            .map(|s| builder.intern(s.as_ref()))
            .collect();
        TokenStream {
            tokens,
            vocab: Arc::new(builder.finish()),
        }
    }

    /// Assemble a stream from parts already known to be consistent.
    /// Panics if an id is out of range.
    pub fn from_parts(tokens: Vec<TokenId>, vocab: Arc<Vocabulary>) -> TokenStream {
        let v = vocab.len() as u32;
        assert!(tokens.iter().all(|&t| t < v), "token id out of range");
        TokenStream { tokens, vocab }
    }

    /// Token count N.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[TokenId] {
        &self.tokens
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn vocab_arc(&self) -> Arc<Vocabulary> {
        Arc::clone(&self.vocab)
    }

    pub fn surface_at(&self, position: usize) -> &str {
        self.vocab.surface(self.tokens[position])
    }

    /// A sub-stream sharing this stream's vocabulary. Vocabulary
    /// frequencies still describe the parent corpus; operations that need
    /// slice-local counts (preprocessing, the analyses, model training)
    /// recount from the tokens.
    pub fn slice(&self, range: std::ops::Range<usize>) -> TokenStream {
        TokenStream {
            tokens: self.tokens[range].to_vec(),
            vocab: Arc::clone(&self.vocab),
        }
    }

    /// Render as text: surfaces joined by single spaces, no trailing
    /// separator. Re-tokenizing the result reproduces the id sequence.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, &t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.vocab.surface(t));
        }
        out
    }

    /// Render in the token-file format: single-space separated, one
    /// trailing newline. Empty streams render as an empty file.
    pub fn render_file(&self) -> String {
        if self.tokens.is_empty() {
            return String::new();
        }
        let mut out = self.render();
        out.push('\n');
        out
    }
}

/// Decode UTF-8 and split on whitespace into a [`TokenStream`].
pub fn tokenize(raw: &[u8]) -> Result<TokenStream, TextError> {
    let text = std::str::from_utf8(raw).map_err(|e| TextError::InvalidUtf8 {
        offset: e.valid_up_to(),
    })?;
    Ok(TokenStream::from_surfaces(text.split_whitespace()))
}

/// The number rule used by [`preprocess`]: all characters are digits,
/// periods, or commas, and the token starts with a digit or with a single
/// period/comma followed by a digit (`3`, `3.5`, `1,000`, `.5` match;
/// `.,`, `N`, `3a` do not).
pub fn is_number_token(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !s.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') {
        return false;
    }
    if first.is_ascii_digit() {
        return true;
    }
    matches!(chars.next(), Some(c) if c.is_ascii_digit())
}

/// Replace infrequent words with `<unk>` and (optionally) numbers with `N`.
///
/// Numbers are replaced first, regardless of their frequency; remaining
/// tokens whose frequency in `stream` is below `min_freq` become `<unk>`.
/// The reserved surfaces themselves are never replaced, which makes the
/// operation idempotent. Stream length is unchanged; the returned stream
/// gets a fresh vocabulary over the surviving surfaces.
pub fn preprocess(stream: &TokenStream, min_freq: u64, replace_numbers: bool) -> TokenStream {
    let mut counts = vec![0u64; stream.vocab.len()];
    for &t in &stream.tokens {
        counts[t as usize] += 1;
    }
    let mut builder = VocabBuilder::default();
    let tokens = stream
        .tokens
        .iter()
        .map(|&t| {
            let surface = stream.vocab.surface(t);
            let replaced = if surface == UNK || surface == NUMBER {
                surface
            } else if replace_numbers && is_number_token(surface) {
                NUMBER
            } else if counts[t as usize] < min_freq {
                UNK
            } else {
                surface
            };
            builder.intern(replaced)
        })
        .collect();
    TokenStream {
        tokens,
        vocab: Arc::new(builder.finish()),
    }
}

/// Split the stream into consecutive chunks of `n` tokens (a final partial
/// chunk is kept as its own chunk), permute the chunks uniformly at random
/// from `seed`, and concatenate. Within-chunk order is preserved, so the
/// token multiset and length are unchanged.
pub fn shuffle_ngram(stream: &TokenStream, n: usize, seed: u64) -> TokenStream {
    assert!(n >= 1, "chunk size must be >= 1");
    let len = stream.tokens.len();
    let n_chunks = len.div_ceil(n);
    let mut order: Vec<usize> = (0..n_chunks).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut tokens = Vec::with_capacity(len);
    for chunk in order {
        let start = chunk * n;
        let end = (start + n).min(len);
        tokens.extend_from_slice(&stream.tokens[start..end]);
    }
    TokenStream {
        tokens,
        vocab: Arc::clone(&stream.vocab),
    }
}

/// A character sequence with its alphabet, for character-level fluctuation
/// analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharStream {
    chars: Vec<char>,
    alphabet: Vec<char>,
}

impl CharStream {
    pub fn from_text(text: &str) -> CharStream {
        let chars: Vec<char> = text.chars().collect();
        let mut alphabet = chars.clone();
        alphabet.sort_unstable();
        alphabet.dedup();
        CharStream { chars, alphabet }
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    /// Distinct characters, sorted.
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }
}

/// Concatenate token surfaces joined by one space. Meta-tokens such as
/// `<unk>` are treated as literal surfaces.
pub fn to_char_stream(stream: &TokenStream) -> Result<CharStream, TextError> {
    if stream.is_empty() {
        return Err(TextError::EmptyStream);
    }
    let mut text = String::new();
    for (i, &t) in stream.tokens.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        let _ = write!(text, "{}", stream.vocab.surface(t));
    }
    Ok(CharStream::from_text(&text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn counts_by_surface(stream: &TokenStream) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for &t in stream.tokens() {
            *m.entry(stream.vocab().surface(t).to_owned()).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn tokenize_first_seen_ids() {
        let s = tokenize(b"a b a").unwrap();
        assert_eq!(s.tokens(), &[0, 1, 0]);
        assert_eq!(s.vocab().len(), 2);
        assert_eq!(s.len(), 3);
        assert_eq!(s.vocab().frequency(0), 2);
    }

    #[test]
    fn tokenize_empty() {
        let s = tokenize(b"").unwrap();
        assert_eq!(s.len(), 0);
        assert_eq!(s.vocab().len(), 0);
    }

    #[test]
    fn tokenize_whitespace_kinds() {
        // Three tokens no matter how the gaps are written.
        for text in ["x  y\n z", "x\ty\nz", "  x y z  "] {
            let s = tokenize(text.as_bytes()).unwrap();
            assert_eq!(s.len(), 3, "{text:?}");
        }
    }

    #[test]
    fn tokenize_bad_utf8_offset() {
        let bytes = b"ok \xff rest";
        match tokenize(bytes) {
            Err(TextError::InvalidUtf8 { offset: 3 }) => {}
            other => panic!("expected utf8 error at byte 3, got {other:?}"),
        }
    }

    #[test]
    fn number_rule() {
        for yes in ["3", "3.5", "1,000", ".5", ",5", "12.", "0"] {
            assert!(is_number_token(yes), "{yes:?} should match");
        }
        for no in ["", ".", ",", "..", ".,", "a3", "3a", "N", "<unk>", "-3"] {
            assert!(!is_number_token(no), "{no:?} should not match");
        }
    }

    #[test]
    fn preprocess_noop_when_all_frequent() {
        let s = tokenize(b"a b a b").unwrap();
        let p = preprocess(&s, 2, false);
        assert_eq!(p.tokens(), s.tokens());
        assert_eq!(p.render(), s.render());
    }

    #[test]
    fn preprocess_single_rare_token() {
        let s = tokenize(b"a a b").unwrap();
        let p = preprocess(&s, 2, false);
        assert_eq!(p.render(), "a a <unk>");
        assert_eq!(p.vocab().len(), 2);
    }

    #[test]
    fn preprocess_numbers() {
        let s = tokenize(b"cost 3.5 million").unwrap();
        let p = preprocess(&s, 1, true);
        assert_eq!(p.render(), "cost N million");
    }

    #[test]
    fn preprocess_reserved_tokens_survive() {
        let s = tokenize(b"<unk> N rare").unwrap();
        let p = preprocess(&s, 2, true);
        assert_eq!(p.render(), "<unk> N <unk>");
    }

    #[test]
    fn shuffle_whole_text_is_identity() {
        let s = tokenize(b"a b c d e").unwrap();
        for seed in 0..5 {
            let out = shuffle_ngram(&s, s.len(), seed);
            assert_eq!(out.tokens(), s.tokens());
        }
    }

    #[test]
    fn shuffle_known_permutation() {
        // Find a seed whose chunk permutation is (1, 2, 0) using the same
        // reference RNG, then check chunk order by hand.
        let s = tokenize(b"A B C D E F G H I").unwrap();
        let seed = (0..1000u64)
            .find(|&seed| {
                let mut order = vec![0usize, 1, 2];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                order.shuffle(&mut rng);
                order == [1, 2, 0]
            })
            .expect("some small seed yields permutation (1,2,0)");
        let out = shuffle_ngram(&s, 3, seed);
        assert_eq!(out.render(), "D E F G H I A B C");
    }

    #[test]
    fn shuffle_partial_final_chunk_kept() {
        let s = tokenize(b"a b c d e").unwrap();
        let out = shuffle_ngram(&s, 2, 7);
        assert_eq!(out.len(), 5);
        assert_eq!(counts_by_surface(&out), counts_by_surface(&s));
    }

    #[test]
    fn char_stream_examples() {
        let ab = TokenStream::from_surfaces(["ab", "c"]);
        assert_eq!(to_char_stream(&ab).unwrap().len(), 4);

        let single = TokenStream::from_surfaces(["xyz"]);
        let cs = to_char_stream(&single).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(!cs.chars().contains(&' '));

        let meta = TokenStream::from_surfaces(["<unk>", "N"]);
        assert_eq!(to_char_stream(&meta).unwrap().len(), 7);

        let empty = TokenStream::from_surfaces(Vec::<&str>::new());
        assert!(matches!(to_char_stream(&empty), Err(TextError::EmptyStream)));
    }

    #[test]
    fn char_stream_alphabet_covers_all() {
        let s = TokenStream::from_surfaces(["abc", "cba"]);
        let cs = to_char_stream(&s).unwrap();
        assert_eq!(cs.alphabet(), &[' ', 'a', 'b', 'c']);
    }

    proptest! {
        #[test]
        fn shuffle_preserves_multiset_and_is_deterministic(
            words in proptest::collection::vec("[a-e]{1,2}", 1..60),
            n in 1usize..12,
            seed in any::<u64>(),
        ) {
            let s = TokenStream::from_surfaces(&words);
            let a = shuffle_ngram(&s, n, seed);
            let b = shuffle_ngram(&s, n, seed);
            prop_assert_eq!(a.tokens(), b.tokens());
            prop_assert_eq!(a.len(), s.len());
            prop_assert_eq!(counts_by_surface(&a), counts_by_surface(&s));
        }

        #[test]
        fn preprocess_keeps_length_and_is_idempotent(
            words in proptest::collection::vec("[a-c0-9]{1,3}", 0..60),
            min_freq in 1u64..4,
            replace_numbers in any::<bool>(),
        ) {
            let s = TokenStream::from_surfaces(&words);
            let once = preprocess(&s, min_freq, replace_numbers);
            prop_assert_eq!(once.len(), s.len());
            let twice = preprocess(&once, min_freq, replace_numbers);
            prop_assert_eq!(once.render(), twice.render());
        }

        #[test]
        fn render_tokenize_round_trip(words in proptest::collection::vec("[a-z]{1,4}", 0..50)) {
            let s = TokenStream::from_surfaces(&words);
            let back = tokenize(s.render().as_bytes()).unwrap();
            prop_assert_eq!(back.tokens(), s.tokens());
            prop_assert_eq!(back.vocab().len(), s.vocab().len());
        }
    }
}
