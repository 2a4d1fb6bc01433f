//! Path-lexicographic ordering of tree monomials.
//!
//! Each leaf label `i` is assigned the word of `(generator rank, child
//! index)` letters read along the path from the root to that leaf. Words are
//! compared degree-first (longer is greater), then lexicographically; the
//! monomials are compared by the sequence of words for leaves `1, 2, ..., n`.
//! Because the child indices are part of the letters, the words determine
//! the labelled tree, so ties happen only on equality. Grafting a common
//! context onto two monomials either prefixes all affected words by the same
//! word or extends them by the same suffix, which preserves the comparison.

use std::cmp::Ordering;

use super::{Alphabet, GenId, Tree};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord(pub Vec<(u32, u32)>);

impl Ord for PathWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PathWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathKey(pub Vec<PathWord>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("cannot compare monomials of arities {0} and {1}")]
    ArityMismatch(usize, usize),
    #[error("precedence mentions unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("precedence lists generator '{0}' twice")]
    Repeated(String),
}

/// Path-lex order with a generator precedence. Generators listed earlier in
/// the precedence are larger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    rank: Vec<u32>,
}

impl MonomialOrder {
    /// Declaration order: the first declared generator is the largest.
    pub fn default_for(alphabet: &Alphabet) -> Self {
        let n = alphabet.len() as u32;
        Self { rank: (0..n).map(|i| n - i).collect() }
    }

    /// Builds an order from a precedence list (largest first). Generators not
    /// mentioned rank below all mentioned ones, in declaration order.
    pub fn with_precedence(alphabet: &Alphabet, precedence: &[&str]) -> Result<Self, OrderError> {
        let mut listed: Vec<GenId> = Vec::new();
        for name in precedence {
            let g = alphabet.lookup(name).ok_or_else(|| OrderError::UnknownGenerator(name.to_string()))?;
            if listed.contains(&g) {
                return Err(OrderError::Repeated(name.to_string()));
            }
            listed.push(g);
        }
        let rest: Vec<GenId> = alphabet.ids().filter(|g| !listed.contains(g)).collect();
        listed.extend(rest);
        let n = listed.len() as u32;
        let mut rank = vec![0; n as usize];
        for (pos, g) in listed.iter().enumerate() {
            rank[*g as usize] = n - pos as u32;
        }
        Ok(Self { rank })
    }

    /// Generator names from largest to smallest.
    pub fn precedence<'a>(&self, alphabet: &'a Alphabet) -> Vec<&'a str> {
        let mut ids: Vec<GenId> = alphabet.ids().collect();
        ids.sort_by_key(|g| std::cmp::Reverse(self.rank[*g as usize]));
        ids.into_iter().map(|g| alphabet.name(g)).collect()
    }

    pub fn key(&self, t: &Tree) -> PathKey {
        let n = t.arity();
        let mut words: Vec<(u32, PathWord)> = Vec::with_capacity(n);
        let mut stack = Vec::new();
        self.walk(t, &mut stack, &mut words);
        words.sort_by_key(|(l, _)| *l);
        PathKey(words.into_iter().map(|(_, w)| w).collect())
    }

    fn walk(&self, t: &Tree, stack: &mut Vec<(u32, u32)>, out: &mut Vec<(u32, PathWord)>) {
        match t {
            Tree::Leaf(l) => out.push((*l, PathWord(stack.clone()))),
            Tree::Node(g, cs) => {
                let r = self.rank.get(*g as usize).copied().unwrap_or(0);
                for (i, c) in cs.iter().enumerate() {
                    stack.push((r, i as u32));
                    self.walk(c, stack, out);
                    stack.pop();
                }
            }
        }
    }

    pub fn compare(&self, a: &Tree, b: &Tree) -> Result<Ordering, OrderError> {
        let (x, y) = (a.arity(), b.arity());
        if x != y {
            return Err(OrderError::ArityMismatch(x, y));
        }
        Ok(self.key(a).cmp(&self.key(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{parse_monomial, Mode};

    #[test]
    fn left_comb_leads_associativity() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let o = MonomialOrder::default_for(&a);
        let l = parse_monomial("(m (m - -) -)", &a).unwrap();
        let r = parse_monomial("(m - (m - -))", &a).unwrap();
        assert_eq!(o.compare(&l, &r).unwrap(), Ordering::Greater);
        assert_eq!(o.compare(&l, &l).unwrap(), Ordering::Equal);
        assert!(o.compare(&l, &Tree::identity()).is_err());
    }

    #[test]
    fn precedence_flips_generator_comparison() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("a", 2), ("b", 2)]).unwrap();
        let x = parse_monomial("(a 1 2)", &a).unwrap();
        let y = parse_monomial("(b 1 2)", &a).unwrap();
        let o1 = MonomialOrder::default_for(&a);
        let o2 = MonomialOrder::with_precedence(&a, &["b"]).unwrap();
        assert_eq!(o1.compare(&x, &y).unwrap(), Ordering::Greater);
        assert_eq!(o2.compare(&x, &y).unwrap(), Ordering::Less);
        assert_eq!(o2.precedence(&a), vec!["b", "a"]);
        assert!(MonomialOrder::with_precedence(&a, &["c"]).is_err());
        assert!(MonomialOrder::with_precedence(&a, &["a", "a"]).is_err());
    }
}
