//! Weighted context-free grammars: induction from a treebank, the
//! tab-separated text format, and CNF binarization for CKY.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::tree::{Tree, Treebank};
use super::PcfgError;

pub const UNK_TERMINAL: &str = "<unk>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    NonTerminal(u32),
    Terminal(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Production {
    pub lhs: u32,
    pub rhs: Vec<Symbol>,
    pub prob: f64,
}

/// A probabilistic context-free grammar. Production probabilities are
/// relative frequencies, so they sum to one per left-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct PcfgGrammar {
    nonterminals: Vec<String>,
    terminals: Vec<String>,
    productions: Vec<Production>,
    start: u32,
    /// Production indices per lhs, in induction order.
    by_lhs: Vec<Vec<usize>>,
}

impl PcfgGrammar {
    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn nonterminal_name(&self, id: u32) -> &str {
        &self.nonterminals[id as usize]
    }

    pub fn terminal_name(&self, id: u32) -> &str {
        &self.terminals[id as usize]
    }

    pub fn n_nonterminals(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, lhs: u32) -> impl Iterator<Item = &Production> {
        self.by_lhs[lhs as usize]
            .iter()
            .map(|&i| &self.productions[i])
    }

    pub fn terminal_id(&self, surface: &str) -> Option<u32> {
        self.terminals
            .iter()
            .position(|t| t == surface)
            .map(|i| i as u32)
    }

    /// Max |Σ probs − 1| over left-hand sides with productions.
    pub fn normalization_defect(&self) -> f64 {
        self.by_lhs
            .iter()
            .filter(|idxs| !idxs.is_empty())
            .map(|idxs| {
                let sum: f64 = idxs.iter().map(|&i| self.productions[i].prob).sum();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// One production per line: `lhs<TAB>rhs tokens<TAB>probability`.
    /// The first line's lhs is the start symbol.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for p in &self.productions {
            let rhs: Vec<&str> = p
                .rhs
                .iter()
                .map(|s| match s {
                    Symbol::NonTerminal(id) => self.nonterminal_name(*id),
                    Symbol::Terminal(id) => self.terminal_name(*id),
                })
                .collect();
            writeln!(
                w,
                "{}\t{}\t{}",
                self.nonterminal_name(p.lhs),
                rhs.join(" "),
                p.prob
            )?;
        }
        Ok(())
    }

    /// Parse the text format; symbols appearing as a lhs are nonterminals,
    /// everything else is terminal. The first line's lhs is the start.
    pub fn read_text<R: BufRead>(reader: R) -> Result<PcfgGrammar, PcfgError> {
        let mut raw: Vec<(String, Vec<String>, f64)> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parse_err = |message: &str| PcfgError::GrammarFile {
                line: idx + 1,
                message: message.to_owned(),
            };
            let fields: Vec<&str> = trimmed.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse_err("expected lhs<TAB>rhs<TAB>probability"));
            }
            let prob: f64 = fields[2]
                .trim()
                .parse()
                .map_err(|_| parse_err("bad probability"))?;
            if !prob.is_finite() || prob <= 0.0 {
                return Err(parse_err("probability must be positive and finite"));
            }
            let rhs: Vec<String> = fields[1].split_whitespace().map(str::to_owned).collect();
            if rhs.is_empty() {
                return Err(parse_err("empty right-hand side"));
            }
            raw.push((fields[0].trim().to_owned(), rhs, prob));
        }
        if raw.is_empty() {
            return Err(PcfgError::GrammarFile {
                line: 0,
                message: "no productions".into(),
            });
        }
        let mut builder = GrammarBuilder::default();
        for (lhs, _, _) in &raw {
            builder.nonterminal(lhs);
        }
        for (lhs, rhs, prob) in &raw {
            let lhs = builder.nonterminal(lhs);
            let rhs = rhs
                .iter()
                .map(|s| {
                    if builder.nt_ids.contains_key(s.as_str()) {
                        Symbol::NonTerminal(builder.nonterminal(s))
                    } else {
                        Symbol::Terminal(builder.terminal(s))
                    }
                })
                .collect();
            builder.push(lhs, rhs, *prob);
        }
        Ok(builder.finish(0))
    }
}

#[derive(Default)]
struct GrammarBuilder {
    nonterminals: Vec<String>,
    nt_ids: HashMap<String, u32>,
    terminals: Vec<String>,
    t_ids: HashMap<String, u32>,
    productions: Vec<Production>,
}

impl GrammarBuilder {
    fn nonterminal(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.nt_ids.get(name) {
            return id;
        }
        let id = self.nonterminals.len() as u32;
        self.nonterminals.push(name.to_owned());
        self.nt_ids.insert(name.to_owned(), id);
        id
    }

    fn terminal(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.t_ids.get(name) {
            return id;
        }
        let id = self.terminals.len() as u32;
        self.terminals.push(name.to_owned());
        self.t_ids.insert(name.to_owned(), id);
        id
    }

    fn push(&mut self, lhs: u32, rhs: Vec<Symbol>, prob: f64) {
        self.productions.push(Production { lhs, rhs, prob });
    }

    fn finish(self, start: u32) -> PcfgGrammar {
        let mut by_lhs = vec![Vec::new(); self.nonterminals.len()];
        for (i, p) in self.productions.iter().enumerate() {
            by_lhs[p.lhs as usize].push(i);
        }
        PcfgGrammar {
            nonterminals: self.nonterminals,
            terminals: self.terminals,
            productions: self.productions,
            start,
            by_lhs,
        }
    }
}

/// Relative-frequency grammar induction. The start symbol is the shared
/// root label, or a fresh super-root over the observed roots when trees
/// disagree.
pub fn induce_grammar(treebank: &Treebank) -> Result<PcfgGrammar, PcfgError> {
    induce(treebank, false)
}

/// Like [`induce_grammar`], but terminals occurring exactly once in the
/// treebank are replaced by `<unk>` first, giving the grammar an
/// unknown-word emission for scoring text with out-of-vocabulary tokens.
pub fn induce_grammar_with_unk(treebank: &Treebank) -> Result<PcfgGrammar, PcfgError> {
    induce(treebank, true)
}

fn induce(treebank: &Treebank, hapax_to_unk: bool) -> Result<PcfgGrammar, PcfgError> {
    if treebank.trees.is_empty() {
        return Err(PcfgError::EmptyTreebank);
    }
    let mut word_freq: HashMap<&str, u64> = HashMap::new();
    if hapax_to_unk {
        for tree in &treebank.trees {
            for leaf in tree.leaves() {
                *word_freq.entry(leaf).or_insert(0) += 1;
            }
        }
    }
    let map_word = |w: &str| -> String {
        if hapax_to_unk && word_freq.get(w).copied().unwrap_or(0) <= 1 {
            UNK_TERMINAL.to_owned()
        } else {
            w.to_owned()
        }
    };

    let mut builder = GrammarBuilder::default();
    let mut counts: HashMap<(u32, Vec<Symbol>), u64> = HashMap::new();
    let mut order: Vec<(u32, Vec<Symbol>)> = Vec::new();
    let mut root_counts: Vec<(u32, u64)> = Vec::new();

    for (tree_index, tree) in treebank.trees.iter().enumerate() {
        let root = match tree {
            Tree::Node { label, .. } => builder.nonterminal(label),
            Tree::Leaf { .. } => {
                return Err(PcfgError::Format {
                    tree_index,
                    message: "tree root is a bare terminal".into(),
                })
            }
        };
        match root_counts.iter_mut().find(|(r, _)| *r == root) {
            Some((_, c)) => *c += 1,
            None => root_counts.push((root, 1)),
        }
        collect_productions(tree, &mut builder, &mut counts, &mut order, &map_word);
    }

    let mut productions: Vec<(u32, Vec<Symbol>, u64)> = order
        .into_iter()
        .map(|key| {
            let count = counts[&key];
            (key.0, key.1, count)
        })
        .collect();

    let start = if root_counts.len() == 1 {
        root_counts[0].0
    } else {
        let mut name = "TOP".to_owned();
        while builder.nt_ids.contains_key(&name) {
            name.push('\'');
        }
        let top = builder.nonterminal(&name);
        let mut rooted: Vec<(u32, Vec<Symbol>, u64)> = root_counts
            .iter()
            .map(|&(root, c)| (top, vec![Symbol::NonTerminal(root)], c))
            .collect();
        rooted.append(&mut productions);
        productions = rooted;
        top
    };

    let mut lhs_totals: HashMap<u32, u64> = HashMap::new();
    for (lhs, _, c) in &productions {
        *lhs_totals.entry(*lhs).or_insert(0) += c;
    }
    for (lhs, rhs, count) in productions {
        let prob = count as f64 / lhs_totals[&lhs] as f64;
        builder.push(lhs, rhs, prob);
    }
    Ok(builder.finish(start))
}

fn collect_productions(
    tree: &Tree,
    builder: &mut GrammarBuilder,
    counts: &mut HashMap<(u32, Vec<Symbol>), u64>,
    order: &mut Vec<(u32, Vec<Symbol>)>,
    map_word: &dyn Fn(&str) -> String,
) {
    if let Tree::Node { label, children } = tree {
        let lhs = builder.nonterminal(label);
        let rhs: Vec<Symbol> = children
            .iter()
            .map(|c| match c {
                Tree::Leaf { word } => Symbol::Terminal(builder.terminal(&map_word(word))),
                Tree::Node { label, .. } => Symbol::NonTerminal(builder.nonterminal(label)),
            })
            .collect();
        let key = (lhs, rhs);
        match counts.get_mut(&key) {
            Some(c) => *c += 1,
            None => {
                counts.insert(key.clone(), 1);
                order.push(key);
            }
        }
        for c in children {
            collect_productions(c, builder, counts, order, map_word);
        }
    }
}

/// A grammar in Chomsky normal form, the input to CKY. Produced by
/// [`binarize`]; rule weights preserve every Viterbi parse score of the
/// source grammar but are not per-lhs normalized (collapsing unary chains
/// keeps only the best chain between any two symbols).
#[derive(Debug, Clone, PartialEq)]
pub struct CnfGrammar {
    pub(super) nonterminals: Vec<String>,
    pub(super) terminals: Vec<String>,
    pub(super) start: u32,
    /// (lhs, left child, right child, probability), sorted.
    pub(super) binary: Vec<(u32, u32, u32, f64)>,
    /// (lhs, terminal, probability), sorted.
    pub(super) lexical: Vec<(u32, u32, f64)>,
    /// Lexical rules per terminal id.
    pub(super) lex_by_term: Vec<Vec<(u32, f64)>>,
    /// Binary rules grouped by left child: left -> [(right, lhs, prob)].
    pub(super) by_left: HashMap<u32, Vec<(u32, u32, f64)>>,
}

impl CnfGrammar {
    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn terminal_id(&self, surface: &str) -> Option<u32> {
        self.terminals
            .iter()
            .position(|t| t == surface)
            .map(|i| i as u32)
    }

    pub fn n_rules(&self) -> usize {
        self.binary.len() + self.lexical.len()
    }
}

/// Right-factored CNF binarization with unary-chain collapsing.
///
/// Terminals inside multi-symbol right-hand sides get fresh prob-1
/// preterminals (`T|word`); A → X₁ X₂ … X_m becomes A → X₁ A|X₂.…X_m with
/// prob-1 chain rules (intermediates shared across rules with the same
/// tail); unary rules over nonterminals are collapsed by a max-product
/// closure composed onto the non-unary rules, so every original
/// derivation keeps exactly its probability and CKY needs no unary pass.
pub fn binarize(grammar: &PcfgGrammar) -> CnfGrammar {
    let mut nonterminals = grammar.nonterminals.clone();
    let mut nt_ids: HashMap<String, u32> = nonterminals
        .iter()
        .enumerate()
        .map(|(s, i)| (i.clone(), s as u32))
        .collect();

    let mut binary: Vec<(u32, u32, u32, f64)> = Vec::new();
    let mut lexical: Vec<(u32, u32, f64)> = Vec::new();
    let mut unary: Vec<(u32, u32, f64)> = Vec::new();
    let mut term_wrappers: HashMap<u32, u32> = HashMap::new();
    // Suffix intermediates already emitted, by name.
    let mut suffix_done: HashMap<String, u32> = HashMap::new();

    for p in grammar.productions() {
        if p.rhs.len() == 1 {
            match p.rhs[0] {
                Symbol::Terminal(t) => lexical.push((p.lhs, t, p.prob)),
                Symbol::NonTerminal(nt) => unary.push((p.lhs, nt, p.prob)),
            }
            continue;
        }
        // Wrap in-line terminals.
        let rhs: Vec<u32> = p
            .rhs
            .iter()
            .map(|s| match s {
                Symbol::NonTerminal(nt) => *nt,
                Symbol::Terminal(t) => *term_wrappers.entry(*t).or_insert_with(|| {
                    let name = format!("T|{}", grammar.terminal_name(*t));
                    let id = intern(&mut nonterminals, &mut nt_ids, &name);
                    lexical.push((id, *t, 1.0));
                    id
                }),
            })
            .collect();
        if rhs.len() == 2 {
            binary.push((p.lhs, rhs[0], rhs[1], p.prob));
        } else {
            let base = grammar.nonterminal_name(p.lhs).to_owned();
            let tail = suffix_symbol(
                &base,
                &rhs[1..],
                &mut nonterminals,
                &mut nt_ids,
                &mut suffix_done,
                &mut binary,
            );
            binary.push((p.lhs, rhs[0], tail, p.prob));
        }
    }

    // Max-product closure of the unary rules.
    let mut closure: HashMap<(u32, u32), f64> = HashMap::new();
    for &(a, b, p) in &unary {
        let w = closure.entry((a, b)).or_insert(0.0);
        if p > *w {
            *w = p;
        }
    }
    loop {
        let snapshot: Vec<((u32, u32), f64)> = closure.iter().map(|(&k, &v)| (k, v)).collect();
        let mut changed = false;
        for &((a, b), w1) in &snapshot {
            for &((b2, c), w2) in &snapshot {
                if b2 != b || a == c {
                    continue;
                }
                let cand = w1 * w2;
                let entry = closure.entry((a, c)).or_insert(0.0);
                if cand > *entry {
                    *entry = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Compose closure pairs onto the non-unary base rules, keeping the
    // best weight per rule shape.
    let mut bin_best: HashMap<(u32, u32, u32), f64> = HashMap::new();
    for &(lhs, l, r, p) in &binary {
        let e = bin_best.entry((lhs, l, r)).or_insert(0.0);
        if p > *e {
            *e = p;
        }
    }
    let mut lex_best: HashMap<(u32, u32), f64> = HashMap::new();
    for &(lhs, t, p) in &lexical {
        let e = lex_best.entry((lhs, t)).or_insert(0.0);
        if p > *e {
            *e = p;
        }
    }
    let base_binary = binary.clone();
    let base_lexical = lexical.clone();
    for (&(a, b), &w) in &closure {
        if a == b {
            continue;
        }
        for &(lhs, l, r, p) in &base_binary {
            if lhs != b {
                continue;
            }
            let cand = w * p;
            let e = bin_best.entry((a, l, r)).or_insert(0.0);
            if cand > *e {
                *e = cand;
            }
        }
        for &(lhs, t, p) in &base_lexical {
            if lhs != b {
                continue;
            }
            let cand = w * p;
            let e = lex_best.entry((a, t)).or_insert(0.0);
            if cand > *e {
                *e = cand;
            }
        }
    }

    let mut binary: Vec<(u32, u32, u32, f64)> = bin_best
        .into_iter()
        .map(|((lhs, l, r), p)| (lhs, l, r, p))
        .collect();
    binary.sort_unstable_by_key(|&(lhs, l, r, _)| (lhs, l, r));
    let mut lexical: Vec<(u32, u32, f64)> = lex_best
        .into_iter()
        .map(|((lhs, t), p)| (lhs, t, p))
        .collect();
    lexical.sort_unstable_by_key(|&(lhs, t, _)| (lhs, t));

    let mut lex_by_term: Vec<Vec<(u32, f64)>> = vec![Vec::new(); grammar.terminals.len()];
    for &(lhs, t, p) in &lexical {
        lex_by_term[t as usize].push((lhs, p));
    }
    let mut by_left: HashMap<u32, Vec<(u32, u32, f64)>> = HashMap::new();
    for &(lhs, l, r, p) in &binary {
        by_left.entry(l).or_default().push((r, lhs, p));
    }

    CnfGrammar {
        nonterminals,
        terminals: grammar.terminals.clone(),
        start: grammar.start,
        binary,
        lexical,
        lex_by_term,
        by_left,
    }
}

fn intern(nonterminals: &mut Vec<String>, nt_ids: &mut HashMap<String, u32>, name: &str) -> u32 {
    if let Some(&id) = nt_ids.get(name) {
        return id;
    }
    let id = nonterminals.len() as u32;
    nonterminals.push(name.to_owned());
    nt_ids.insert(name.to_owned(), id);
    id
}

/// Nonterminal deriving `suffix` (≥ 2 symbols) through prob-1 chain rules,
/// memoized by name so rules sharing a tail share intermediates.
fn suffix_symbol(
    base: &str,
    suffix: &[u32],
    nonterminals: &mut Vec<String>,
    nt_ids: &mut HashMap<String, u32>,
    suffix_done: &mut HashMap<String, u32>,
    binary: &mut Vec<(u32, u32, u32, f64)>,
) -> u32 {
    let labels: Vec<&str> = suffix
        .iter()
        .map(|&id| nonterminals[id as usize].as_str())
        .collect();
    let name = format!("{base}|{}", labels.join("."));
    if let Some(&id) = suffix_done.get(&name) {
        return id;
    }
    let id = intern(nonterminals, nt_ids, &name);
    suffix_done.insert(name, id);
    if suffix.len() == 2 {
        binary.push((id, suffix[0], suffix[1], 1.0));
    } else {
        let tail = suffix_symbol(base, &suffix[1..], nonterminals, nt_ids, suffix_done, binary);
        binary.push((id, suffix[0], tail, 1.0));
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcfg::parse_treebank;

    #[test]
    fn single_tree_probabilities() {
        let tb = parse_treebank("(S (A a) (B b))").unwrap();
        let g = induce_grammar(&tb).unwrap();
        assert_eq!(g.normalization_defect(), 0.0);
        for p in g.productions() {
            assert_eq!(p.prob, 1.0);
        }
        assert_eq!(g.nonterminal_name(g.start()), "S");
    }

    #[test]
    fn relative_frequency_counting() {
        // S -> A B occurs twice, S -> A once.
        let tb = parse_treebank("(S (A a) (B b)) (S (A a) (B b)) (S (A a))").unwrap();
        let g = induce_grammar(&tb).unwrap();
        let s = g.start();
        let probs: Vec<f64> = g.productions_of(s).map(|p| p.prob).collect();
        assert_eq!(probs.len(), 2);
        assert!((probs[0] - 2.0 / 3.0).abs() <= 1e-12);
        assert!((probs[1] - 1.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn super_root_when_roots_disagree() {
        let tb = parse_treebank("(S (A a)) (X (B b)) (S (A a))").unwrap();
        let g = induce_grammar(&tb).unwrap();
        assert_eq!(g.nonterminal_name(g.start()), "TOP");
        let probs: Vec<f64> = g.productions_of(g.start()).map(|p| p.prob).collect();
        assert!((probs[0] - 2.0 / 3.0).abs() <= 1e-12);
        assert!((probs[1] - 1.0 / 3.0).abs() <= 1e-12);
        assert_eq!(g.normalization_defect(), 0.0);
    }

    #[test]
    fn hapax_replacement() {
        let tb = parse_treebank("(S (A dog) (B ran)) (S (A dog) (B slept))").unwrap();
        let g = induce_grammar_with_unk(&tb).unwrap();
        // "dog" occurs twice and survives; "ran"/"slept" are hapax.
        assert!(g.terminal_id("dog").is_some());
        assert!(g.terminal_id("ran").is_none());
        assert!(g.terminal_id(UNK_TERMINAL).is_some());
        assert_eq!(g.normalization_defect(), 0.0);
    }

    #[test]
    fn text_format_round_trip() {
        let tb =
            parse_treebank("(S (NP (D the) (N dog)) (VP (V ran))) (S (NP (D the) (N cat)) (VP (V ran)))")
                .unwrap();
        let g = induce_grammar(&tb).unwrap();
        let mut text = Vec::new();
        g.write_text(&mut text).unwrap();
        let back = PcfgGrammar::read_text(&text[..]).unwrap();
        assert_eq!(back.nonterminal_name(back.start()), "S");
        assert_eq!(back.productions().len(), g.productions().len());
        let mut text2 = Vec::new();
        back.write_text(&mut text2).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn binarize_factoring_example() {
        // A -> B C D (p) becomes A -> B A|C.D (p), A|C.D -> C D (1).
        let text = "A\tB C D\t0.5\nA\tB\t0.5\nB\tb\t1\nC\tc\t1\nD\td\t1\n";
        let g = PcfgGrammar::read_text(text.as_bytes()).unwrap();
        let cnf = binarize(&g);
        let mid = cnf
            .nonterminals
            .iter()
            .position(|n| n == "A|C.D")
            .expect("intermediate created") as u32;
        assert!(cnf
            .binary
            .iter()
            .any(|&(lhs, l, r, p)| lhs == 0 && l == 1 && r == mid && p == 0.5));
        assert!(cnf
            .binary
            .iter()
            .any(|&(lhs, _, _, p)| lhs == mid && p == 1.0));
        // The unary A -> B (0.5) composes with B -> b (1).
        let b_term = cnf.terminal_id("b").unwrap();
        assert!(cnf
            .lexical
            .iter()
            .any(|&(lhs, t, p)| lhs == 0 && t == b_term && p == 0.5));
    }

    #[test]
    fn binarize_already_binary_is_isomorphic() {
        let text = "S\tA B\t1\nA\ta\t1\nB\tb\t1\n";
        let g = PcfgGrammar::read_text(text.as_bytes()).unwrap();
        let cnf = binarize(&g);
        assert_eq!(cnf.binary.len(), 1);
        assert_eq!(cnf.lexical.len(), 2);
        assert_eq!(cnf.binary[0].3, 1.0);
    }

    #[test]
    fn unary_chain_closure_multiplies() {
        // S -> A (0.5), A -> B (0.5), B -> b (1): closed S -> b (0.25).
        let text = "S\tA\t0.5\nS\tX Y\t0.5\nA\tB\t0.5\nA\tX Y\t0.5\nB\tb\t1\nX\tx\t1\nY\ty\t1\n";
        let g = PcfgGrammar::read_text(text.as_bytes()).unwrap();
        let cnf = binarize(&g);
        let b_term = cnf.terminal_id("b").unwrap();
        let s_rules: Vec<f64> = cnf
            .lexical
            .iter()
            .filter(|&&(lhs, t, _)| lhs == g.start() && t == b_term)
            .map(|&(_, _, p)| p)
            .collect();
        assert_eq!(s_rules, vec![0.25]);
    }
}
