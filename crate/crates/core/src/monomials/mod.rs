//! Tree monomials of free operads.
//!
//! A [`Tree`] is a planar rooted tree whose internal nodes carry generator
//! ids and whose leaves carry labels. Planar (non-symmetric) monomials are
//! stored with leaves numbered `1..n` from left to right, so both kinds share
//! one representation and one set of algorithms; only validation and the
//! notion of admissible relabelling differ between [`Mode::Planar`] and
//! [`Mode::Shuffle`].
//!
//! Shuffle monomials satisfy the shuffle-tree condition: leaf labels are a
//! permutation of `1..n` and at every internal node the minimal leaf labels
//! of the child subtrees increase from left to right. In particular the
//! subtree holding the smallest label is always the leftmost one.

mod compose;
mod divisibility;
mod enumerate;
mod order;
pub(crate) mod parse;
mod regular;

pub use compose::{compose, compose_planar, compose_shuffle, shuffle_compositions, ComposeError};
pub use divisibility::{divides, first_occurrence, occurrence_at, occurrences, substitute, Occurrence};
pub use enumerate::{enumerate_free, enumerate_free_par, planar_shapes, replanarizations, shuffle_labelings};
pub(crate) use enumerate::{compositions, distribute};
pub use order::{MonomialOrder, OrderError, PathKey, PathWord};
pub use parse::{parse_monomial, ParseError};
pub use regular::{
    is_shuffle_regular, is_symmetric_regular, regular_closure, shuffle_regularity_witness,
    symmetric_regularity_witness, Regularity,
};

use std::fmt;

/// Child-index path from the root; the root itself is the empty path.
pub type Path = Vec<usize>;

pub type GenId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Planar,
    Shuffle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Planar => "planar",
            Mode::Shuffle => "shuffle",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "planar" => Ok(Mode::Planar),
            "shuffle" => Ok(Mode::Shuffle),
            other => Err(format!("unknown mode '{other}' (expected planar or shuffle)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSignature {
    pub name: String,
    pub arity: usize,
}

impl GeneratorSignature {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self { name: name.into(), arity }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("duplicate generator name '{0}'")]
    Duplicate(String),
    #[error("generator '{0}' has arity {1}; arities must be at least 2 (the identity is implicit)")]
    BadArity(String, usize),
    #[error("'{0}' is not a valid generator name")]
    BadName(String),
    #[error("no generators declared")]
    Empty,
}

/// The generators of a free operad together with the monomial kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    mode: Mode,
    gens: Vec<GeneratorSignature>,
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Alphabet {
    pub fn new(mode: Mode, gens: Vec<GeneratorSignature>) -> Result<Self, AlphabetError> {
        if gens.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, g) in gens.iter().enumerate() {
            if !valid_identifier(&g.name) {
                return Err(AlphabetError::BadName(g.name.clone()));
            }
            if g.arity < 2 {
                return Err(AlphabetError::BadArity(g.name.clone(), g.arity));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(AlphabetError::Duplicate(g.name.clone()));
            }
        }
        Ok(Self { mode, gens })
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs(mode: Mode, pairs: &[(&str, usize)]) -> Result<Self, AlphabetError> {
        Self::new(mode, pairs.iter().map(|&(n, a)| GeneratorSignature::new(n, a)).collect())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn generators(&self) -> &[GeneratorSignature] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.gens.len()).map(|i| i as GenId)
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as GenId)
    }

    pub fn arity(&self, g: GenId) -> usize {
        self.gens[g as usize].arity
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.gens[g as usize].name
    }

    pub fn max_arity(&self) -> usize {
        self.gens.iter().map(|g| g.arity).max().unwrap_or(2)
    }

    /// Same generators, other monomial kind.
    pub fn with_mode(&self, mode: Mode) -> Self {
        Self { mode, gens: self.gens.clone() }
    }

    /// Canonical s-expression. Planar leaves print as `-`.
    pub fn format(&self, t: &Tree) -> String {
        let mut out = String::new();
        self.write_tree(t, &mut out);
        out
    }

    fn write_tree(&self, t: &Tree, out: &mut String) {
        match t {
            Tree::Leaf(l) => match self.mode {
                Mode::Planar => out.push('-'),
                Mode::Shuffle => out.push_str(&l.to_string()),
            },
            Tree::Node(g, cs) => {
                out.push('(');
                out.push_str(self.name(*g));
                for c in cs {
                    out.push(' ');
                    self.write_tree(c, out);
                }
                out.push(')');
            }
        }
    }

    /// Checks generator ids, arities and the leaf labelling for this mode.
    pub fn validate(&self, t: &Tree) -> Result<(), ParseError> {
        self.check_arities(t)?;
        let labels = t.leaf_labels();
        let n = labels.len() as u32;
        match self.mode {
            Mode::Planar => {
                if labels.iter().enumerate().any(|(i, &l)| l != i as u32 + 1) {
                    return Err(ParseError::Leaves("planar leaves must be numbered 1..n left to right".into()));
                }
            }
            Mode::Shuffle => {
                let mut seen = vec![false; labels.len()];
                for &l in &labels {
                    if l == 0 || l > n {
                        return Err(ParseError::Leaves(format!("leaf label {l} outside 1..{n}")));
                    }
                    if std::mem::replace(&mut seen[(l - 1) as usize], true) {
                        return Err(ParseError::Leaves(format!("leaf label {l} repeated")));
                    }
                }
                if let Some(path) = t.shuffle_violation() {
                    let node = t.subtree(&path).map(|s| self.format(s)).unwrap_or_default();
                    return Err(ParseError::ShuffleViolation { node });
                }
            }
        }
        Ok(())
    }

    fn check_arities(&self, t: &Tree) -> Result<(), ParseError> {
        if let Tree::Node(g, cs) = t {
            let Some(sig) = self.gens.get(*g as usize) else {
                return Err(ParseError::UnknownGenerator(format!("#{g}")));
            };
            if sig.arity != cs.len() {
                return Err(ParseError::ArityMismatch {
                    name: sig.name.clone(),
                    expected: sig.arity,
                    found: cs.len(),
                });
            }
            for c in cs {
                self.check_arities(c)?;
            }
        }
        Ok(())
    }
}

/// A tree monomial. `Leaf(1)` on its own is the identity monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(u32),
    Node(GenId, Vec<Tree>),
}

impl Tree {
    pub fn identity() -> Tree {
        Tree::Leaf(1)
    }

    /// `g(1, 2, ..., k)`.
    pub fn corolla(g: GenId, arity: usize) -> Tree {
        Tree::Node(g, (1..=arity as u32).map(Tree::Leaf).collect())
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(_, cs) => cs.iter().map(Tree::arity).sum(),
        }
    }

    /// Number of internal nodes.
    pub fn weight(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, cs) => 1 + cs.iter().map(Tree::weight).sum::<usize>(),
        }
    }

    /// Depth counted in internal nodes: 0 for the identity, 1 for a corolla.
    pub fn depth(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(_, cs) => 1 + cs.iter().map(Tree::depth).max().unwrap_or(0),
        }
    }

    pub fn root_generator(&self) -> Option<GenId> {
        match self {
            Tree::Leaf(_) => None,
            Tree::Node(g, _) => Some(*g),
        }
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Leaf(_) => &[],
            Tree::Node(_, cs) => cs,
        }
    }

    pub fn leaf_labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Tree::Leaf(l) => out.push(*l),
            Tree::Node(_, cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn min_leaf(&self) -> u32 {
        match self {
            Tree::Leaf(l) => *l,
            Tree::Node(_, cs) => cs.iter().map(Tree::min_leaf).min().unwrap_or(u32::MAX),
        }
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&Tree> {
        let mut t = self;
        for &i in path {
            t = t.children().get(i)?;
        }
        Some(t)
    }

    /// Paths of internal nodes in preorder.
    pub fn node_paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((t, p)) = stack.pop() {
            if let Tree::Node(_, cs) = t {
                for (i, c) in cs.iter().enumerate().rev() {
                    let mut q = p.clone();
                    q.push(i);
                    stack.push((c, q));
                }
                out.push(p);
            }
        }
        out
    }

    /// Returns a copy with the subtree at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Tree) -> Option<Tree> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => match self {
                Tree::Leaf(_) => None,
                Tree::Node(g, cs) => {
                    let child = cs.get(i)?.replace_at(rest, new)?;
                    let mut cs = cs.clone();
                    cs[i] = child;
                    Some(Tree::Node(*g, cs))
                }
            },
        }
    }

    pub fn map_labels(&self, f: &impl Fn(u32) -> u32) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(f(*l)),
            Tree::Node(g, cs) => Tree::Node(*g, cs.iter().map(|c| c.map_labels(f)).collect()),
        }
    }

    /// Same tree with leaves renumbered `1..n` left to right.
    pub fn planar_shape(&self) -> Tree {
        let mut next = 0;
        self.renumber(&mut next)
    }

    fn renumber(&self, next: &mut u32) -> Tree {
        match self {
            Tree::Leaf(_) => {
                *next += 1;
                Tree::Leaf(*next)
            }
            Tree::Node(g, cs) => Tree::Node(*g, cs.iter().map(|c| c.renumber(next)).collect()),
        }
    }

    /// Replaces every leaf label by its rank among all leaf labels.
    pub fn compress_labels(&self) -> Tree {
        let mut labels = self.leaf_labels();
        labels.sort_unstable();
        self.map_labels(&|l| labels.binary_search(&l).map(|i| i as u32 + 1).unwrap_or(l))
    }

    /// Assigns the labels of `labels` (listed left to right) to the leaves.
    pub fn with_leaf_labels(&self, labels: &[u32]) -> Tree {
        let mut it = labels.iter().copied();
        self.assign(&mut it)
    }

    fn assign(&self, it: &mut impl Iterator<Item = u32>) -> Tree {
        match self {
            Tree::Leaf(l) => Tree::Leaf(it.next().unwrap_or(*l)),
            Tree::Node(g, cs) => Tree::Node(*g, cs.iter().map(|c| c.assign(it)).collect()),
        }
    }

    /// Keeps internal nodes at depth `< depth`; deeper subtrees become leaves.
    /// The result carries planar (positional) leaf numbers.
    pub fn truncate(&self, depth: usize) -> Tree {
        fn go(t: &Tree, depth: usize) -> Tree {
            match t {
                Tree::Node(g, cs) if depth > 0 => Tree::Node(*g, cs.iter().map(|c| go(c, depth - 1)).collect()),
                _ => Tree::Leaf(0),
            }
        }
        go(self, depth).planar_shape()
    }

    pub fn is_planar_numbered(&self) -> bool {
        self.leaf_labels().iter().enumerate().all(|(i, &l)| l == i as u32 + 1)
    }

    /// True iff the leaves are labelled by a permutation of `1..n` and every
    /// node's child subtrees have increasing minimal labels.
    pub fn is_shuffle(&self) -> bool {
        let mut labels = self.leaf_labels();
        labels.sort_unstable();
        labels.iter().enumerate().all(|(i, &l)| l == i as u32 + 1) && self.shuffle_violation().is_none()
    }

    /// Path of the first node (preorder) whose child minima are not increasing.
    pub fn shuffle_violation(&self) -> Option<Path> {
        fn go(t: &Tree, path: &mut Path) -> Result<u32, Path> {
            match t {
                Tree::Leaf(l) => Ok(*l),
                Tree::Node(_, cs) => {
                    let mut mins = Vec::with_capacity(cs.len());
                    for (i, c) in cs.iter().enumerate() {
                        path.push(i);
                        let m = go(c, path);
                        path.pop();
                        mins.push(m?);
                    }
                    if mins.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(path.clone());
                    }
                    Ok(mins[0])
                }
            }
        }
        go(self, &mut Vec::new()).err()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::from_pairs(Mode::Shuffle, &[("f", 2), ("g", 3)]).unwrap()
    }

    #[test]
    fn alphabet_rejects_unary_and_duplicates() {
        assert!(matches!(
            Alphabet::from_pairs(Mode::Planar, &[("u", 1)]),
            Err(AlphabetError::BadArity(_, 1))
        ));
        assert!(matches!(
            Alphabet::from_pairs(Mode::Planar, &[("m", 2), ("m", 3)]),
            Err(AlphabetError::Duplicate(_))
        ));
        assert!(Alphabet::from_pairs(Mode::Planar, &[("9x", 2)]).is_err());
    }

    #[test]
    fn arity_weight_depth() {
        let a = abc();
        let t = parse_monomial("(g (f (f 1 3) (g 2 (f 4 9) (g 5 6 11))) 7 (f 8 10))", &a).unwrap();
        assert_eq!(t.arity(), 11);
        assert_eq!(t.weight(), 7);
        assert_eq!(t.depth(), 4);
        assert!(t.is_shuffle());
        assert_eq!(t.node_paths().len(), 7);
    }

    #[test]
    fn truncation_keeps_top_levels() {
        let a = abc();
        let t = parse_monomial("(f (f 1 2) (g 3 (f 4 5) 6))", &a).unwrap();
        assert_eq!(t.truncate(0), Tree::Leaf(1));
        assert_eq!(a.with_mode(Mode::Planar).format(&t.truncate(1)), "(f - -)");
        assert_eq!(a.with_mode(Mode::Planar).format(&t.truncate(2)), "(f (f - -) (g - - -))");
        assert_eq!(t.truncate(5), t.planar_shape());
    }

    #[test]
    fn shuffle_violation_points_at_node() {
        let t = Tree::Node(0, vec![Tree::Leaf(2), Tree::Leaf(1)]);
        assert!(!t.is_shuffle());
        assert_eq!(t.shuffle_violation(), Some(vec![]));
        let g = Tree::Node(1, vec![Tree::Leaf(1), Tree::Leaf(3), Tree::Leaf(2)]);
        assert!(!g.is_shuffle());
    }
}
