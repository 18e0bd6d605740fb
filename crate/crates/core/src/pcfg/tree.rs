//! Penn-style bracketed tree reading and normalization.

use super::PcfgError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Node { label: String, children: Vec<Tree> },
    Leaf { word: String },
}

impl Tree {
    pub fn label(&self) -> &str {
        match self {
            Tree::Node { label, .. } => label,
            Tree::Leaf { word } => word,
        }
    }

    /// Terminal words left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Tree::Leaf { word } => out.push(word),
            Tree::Node { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Treebank {
    pub trees: Vec<Tree>,
}

/// Parse one or more bracketed trees.
///
/// PTB conventions are normalized away: an unlabeled outer wrapper
/// `( (S ...) )` is unwrapped, `-NONE-` subtrees (empty elements) are
/// deleted, and function tags are stripped by truncating labels at the
/// first `-` or `=` (labels that start with `-`, like `-LRB-`, are kept
/// whole). Terminal words are never altered.
pub fn parse_treebank(text: &str) -> Result<Treebank, PcfgError> {
    let tokens = lex(text);
    let mut pos = 0usize;
    let mut trees = Vec::new();
    while pos < tokens.len() {
        let tree_index = trees.len();
        let raw = parse_tree(&tokens, &mut pos, tree_index)?;
        if let Some(tree) = normalize(raw) {
            trees.push(tree);
        }
    }
    if trees.is_empty() {
        return Err(PcfgError::EmptyTreebank);
    }
    Ok(Treebank { trees })
}

#[derive(Debug, PartialEq, Eq)]
enum Lexeme {
    Open,
    Close,
    Atom(String),
}

fn lex(text: &str) -> Vec<Lexeme> {
    let mut out = Vec::new();
    let mut atom = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !atom.is_empty() {
                    out.push(Lexeme::Atom(std::mem::take(&mut atom)));
                }
                out.push(if c == '(' { Lexeme::Open } else { Lexeme::Close });
            }
            c if c.is_whitespace() => {
                if !atom.is_empty() {
                    out.push(Lexeme::Atom(std::mem::take(&mut atom)));
                }
            }
            c => atom.push(c),
        }
    }
    if !atom.is_empty() {
        out.push(Lexeme::Atom(atom));
    }
    out
}

fn parse_tree(tokens: &[Lexeme], pos: &mut usize, tree_index: usize) -> Result<Tree, PcfgError> {
    let err = |message: &str| PcfgError::Format {
        tree_index,
        message: message.to_owned(),
    };
    match tokens.get(*pos) {
        Some(Lexeme::Open) => {
            *pos += 1;
            let label = match tokens.get(*pos) {
                Some(Lexeme::Atom(a)) => {
                    *pos += 1;
                    Some(a.clone())
                }
                _ => None,
            };
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Lexeme::Close) => {
                        *pos += 1;
                        break;
                    }
                    Some(Lexeme::Open) => children.push(parse_tree(tokens, pos, tree_index)?),
                    Some(Lexeme::Atom(word)) => {
                        children.push(Tree::Leaf { word: word.clone() });
                        *pos += 1;
                    }
                    None => return Err(err("unbalanced parentheses")),
                }
            }
            match label {
                Some(label) => {
                    if children.is_empty() {
                        return Err(err(&format!("node {label:?} has no children")));
                    }
                    Ok(Tree::Node { label, children })
                }
                // Unlabeled wrapper: unwrap a single child.
                None if children.len() == 1 => Ok(children.pop().unwrap()),
                None => Err(err("unlabeled node with multiple children")),
            }
        }
        Some(Lexeme::Atom(_)) => Err(err("expected '(' at top level")),
        _ => Err(err("unexpected end of input")),
    }
}

fn strip_label(label: &str) -> String {
    if label.starts_with('-') {
        return label.to_owned();
    }
    match label.find(['-', '=']) {
        Some(i) => label[..i].to_owned(),
        None => label.to_owned(),
    }
}

/// Delete -NONE- subtrees, strip function tags, drop emptied nodes.
fn normalize(tree: Tree) -> Option<Tree> {
    match tree {
        Tree::Leaf { word } => Some(Tree::Leaf { word }),
        Tree::Node { label, children } => {
            if label == "-NONE-" {
                return None;
            }
            let children: Vec<Tree> = children.into_iter().filter_map(normalize).collect();
            if children.is_empty() {
                return None;
            }
            Some(Tree::Node {
                label: strip_label(&label),
                children,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tree() {
        let tb = parse_treebank("(S (A a) (B b))").unwrap();
        assert_eq!(tb.trees.len(), 1);
        assert_eq!(tb.trees[0].leaves(), vec!["a", "b"]);
    }

    #[test]
    fn wrapper_and_multiple_trees() {
        let tb = parse_treebank("( (S (A a)) )\n( (S (B b)) )").unwrap();
        assert_eq!(tb.trees.len(), 2);
        assert_eq!(tb.trees[0].label(), "S");
    }

    #[test]
    fn function_tags_stripped_and_none_deleted() {
        let tb = parse_treebank(
            "(S (NP-SBJ-1 (NN dog)) (VP=2 (VB ran) (NP (-NONE- *T*))) (-LRB- lrb))",
        )
        .unwrap();
        let tree = &tb.trees[0];
        match tree {
            Tree::Node { children, .. } => {
                assert_eq!(children[0].label(), "NP");
                assert_eq!(children[1].label(), "VP");
                // The NP dominating only -NONE- disappears entirely.
                match &children[1] {
                    Tree::Node { children, .. } => assert_eq!(children.len(), 1),
                    _ => panic!(),
                }
                assert_eq!(children[2].label(), "-LRB-");
            }
            _ => panic!(),
        }
        assert_eq!(tree.leaves(), vec!["dog", "ran", "lrb"]);
    }

    #[test]
    fn format_errors_carry_tree_index() {
        match parse_treebank("(S (A a)) (S (B") {
            Err(PcfgError::Format { tree_index: 1, .. }) => {}
            other => panic!("expected format error in tree 1, got {other:?}"),
        }
        assert!(matches!(parse_treebank(""), Err(PcfgError::EmptyTreebank)));
        assert!(matches!(
            parse_treebank("(S ())"),
            Err(PcfgError::Format { .. })
        ));
    }
}
