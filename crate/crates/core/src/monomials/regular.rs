//! Closure of monomial sets under leaf relabelling and replanarization.

use std::collections::BTreeSet;

use super::{replanarizations, shuffle_labelings, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regularity {
    /// Neither closed under relabelling nor under replanarization.
    None,
    /// Contains every shuffle relabelling of each member's planar shape.
    Shuffle,
    /// Additionally contains the relabellings of every other planar
    /// representation of each member.
    Symmetric,
}

impl Regularity {
    pub fn of(set: &[Tree]) -> Self {
        if is_symmetric_regular(set) {
            Regularity::Symmetric
        } else if is_shuffle_regular(set) {
            Regularity::Shuffle
        } else {
            Regularity::None
        }
    }
}

/// A member of `set` and a relabelling of it that is missing from `set`.
pub fn shuffle_regularity_witness(set: &[Tree]) -> Option<(Tree, Tree)> {
    let have: BTreeSet<&Tree> = set.iter().collect();
    for m in set {
        for t in shuffle_labelings(&m.planar_shape()) {
            if !have.contains(&t) {
                return Some((m.clone(), t));
            }
        }
    }
    None
}

/// A member of `set` and a relabelled replanarization missing from `set`.
pub fn symmetric_regularity_witness(set: &[Tree]) -> Option<(Tree, Tree)> {
    let have: BTreeSet<&Tree> = set.iter().collect();
    for m in set {
        for shape in replanarizations(m) {
            for t in shuffle_labelings(&shape) {
                if !have.contains(&t) {
                    return Some((m.clone(), t));
                }
            }
        }
    }
    None
}

pub fn is_shuffle_regular(set: &[Tree]) -> bool {
    shuffle_regularity_witness(set).is_none()
}

pub fn is_symmetric_regular(set: &[Tree]) -> bool {
    symmetric_regularity_witness(set).is_none()
}

/// Smallest superset of `set` with the requested regularity, sorted.
/// `Regularity::None` returns the set itself, sorted and deduplicated.
pub fn regular_closure(set: &[Tree], flavor: Regularity) -> Vec<Tree> {
    let mut out: BTreeSet<Tree> = set.iter().cloned().collect();
    for m in set {
        let shapes = match flavor {
            Regularity::None => continue,
            Regularity::Shuffle => vec![m.planar_shape()],
            Regularity::Symmetric => replanarizations(m),
        };
        for shape in shapes {
            out.extend(shuffle_labelings(&shape));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{parse_monomial, Alphabet, Mode};

    fn n_operad() -> (Alphabet, Vec<Tree>) {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("mu", 2), ("alpha", 2)]).unwrap();
        let m: Vec<Tree> = [
            "(mu (alpha 1 2) (alpha 3 4))",
            "(mu (alpha 1 3) (alpha 2 4))",
            "(mu (alpha 1 4) (alpha 2 3))",
            "(alpha (alpha 1 2) (alpha 3 4))",
            "(alpha (alpha 1 3) (alpha 2 4))",
            "(alpha (alpha 1 4) (alpha 2 3))",
        ]
        .iter()
        .map(|s| parse_monomial(s, &a).unwrap())
        .collect();
        (a, m)
    }

    #[test]
    fn six_monomials_are_regular_both_ways() {
        let (_, m) = n_operad();
        assert!(is_shuffle_regular(&m));
        assert!(is_symmetric_regular(&m));
        assert_eq!(Regularity::of(&m), Regularity::Symmetric);
        assert!(!is_shuffle_regular(&m[..5]));
    }

    #[test]
    fn single_left_comb_is_not_shuffle_regular() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let m = parse_monomial("(m (m 1 2) 3)", &a).unwrap();
        let (_, missing) = shuffle_regularity_witness(std::slice::from_ref(&m)).unwrap();
        assert_eq!(a.format(&missing), "(m (m 1 3) 2)");
        let closed = regular_closure(std::slice::from_ref(&m), Regularity::Shuffle);
        assert_eq!(closed.len(), 2);
        assert!(is_shuffle_regular(&closed));
        assert!(!is_symmetric_regular(&closed));
        let sym = regular_closure(&[m], Regularity::Symmetric);
        assert_eq!(sym.len(), 3);
        assert!(is_symmetric_regular(&sym));
    }

    #[test]
    fn empty_set_is_regular() {
        assert!(is_shuffle_regular(&[]));
        assert!(is_symmetric_regular(&[]));
        assert!(regular_closure(&[], Regularity::Symmetric).is_empty());
    }
}
