//! Occurrences of one monomial inside another, and substitution into them.
//!
//! An occurrence of `q` in `p` is a connected set of internal nodes of `p`,
//! rooted at some anchor, with the same generators and the same planar shape
//! as `q`. Each edge leaving that set (towards a leaf or towards the rest of
//! the tree) is a free edge and carries the minimal leaf label reachable
//! through it. The occurrence is valid when these induced labels, compressed
//! to `1..k`, reproduce the leaf labels of `q`. For planar monomials the
//! induced labels are automatically increasing, so only the shape matters.

use super::{Path, Tree};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub anchor: Path,
    /// Absolute paths of the matched internal nodes, preorder.
    pub nodes: Vec<Path>,
    /// Absolute paths of the subtrees hanging from the free edges, in the
    /// left-to-right leaf order of the divisor.
    pub free_edges: Vec<Path>,
}

impl Occurrence {
    /// Labels induced on the free edges (minimal reachable leaf), in divisor
    /// leaf order.
    pub fn induced_labels(&self, host: &Tree) -> Vec<u32> {
        self.free_edges.iter().map(|p| host.subtree(p).map(Tree::min_leaf).unwrap_or(0)).collect()
    }
}

fn match_shape(q: &Tree, p: &Tree, path: &mut Path, nodes: &mut Vec<Path>, free: &mut Vec<Path>) -> bool {
    match (q, p) {
        (Tree::Leaf(_), _) => {
            free.push(path.clone());
            true
        }
        (Tree::Node(g, qs), Tree::Node(h, ps)) if g == h && qs.len() == ps.len() => {
            nodes.push(path.clone());
            for (i, (qc, pc)) in qs.iter().zip(ps).enumerate() {
                path.push(i);
                let ok = match_shape(qc, pc, path, nodes, free);
                path.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        _ => false,
    }
}

fn order_isomorphic(a: &[u32], b: &[u32]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] < a[j]) == (b[i] < b[j])))
}

/// The occurrence of `q` in `p` rooted at `anchor`, if there is one.
pub fn occurrence_at(q: &Tree, p: &Tree, anchor: &[usize]) -> Option<Occurrence> {
    let sub = p.subtree(anchor)?;
    if q.is_identity() || sub.root_generator() != q.root_generator() {
        return None;
    }
    let mut path = anchor.to_vec();
    let mut nodes = Vec::new();
    let mut free = Vec::new();
    if !match_shape(q, sub, &mut path, &mut nodes, &mut free) {
        return None;
    }
    let occ = Occurrence { anchor: anchor.to_vec(), nodes, free_edges: free };
    order_isomorphic(&q.leaf_labels(), &occ.induced_labels(p)).then_some(occ)
}

/// All occurrences of `q` in `p`, ordered by anchor in preorder. The identity
/// monomial has no occurrences.
pub fn occurrences(q: &Tree, p: &Tree) -> Vec<Occurrence> {
    if q.is_identity() {
        return Vec::new();
    }
    p.node_paths().into_iter().filter_map(|anchor| occurrence_at(q, p, &anchor)).collect()
}

/// The first occurrence in preorder, without collecting the rest.
pub fn first_occurrence(q: &Tree, p: &Tree) -> Option<Occurrence> {
    if q.is_identity() || q.weight() > p.weight() || q.arity() > p.arity() {
        return None;
    }
    p.node_paths().into_iter().find_map(|anchor| occurrence_at(q, p, &anchor))
}

pub fn divides(q: &Tree, p: &Tree) -> bool {
    first_occurrence(q, p).is_some()
}

/// Replaces the region of `host` covered by `shape` at `anchor` with
/// `replacement`. The subtree hanging from the free edge with the `j`-th
/// smallest induced label is grafted onto the leaf of `replacement`
/// labelled `j`. Returns `None` if `shape` does not fit at `anchor` or the
/// arities disagree.
pub fn substitute(host: &Tree, anchor: &[usize], shape: &Tree, replacement: &Tree) -> Option<Tree> {
    let sub = host.subtree(anchor)?;
    let mut hanging = Vec::new();
    collect_hanging(shape, sub, &mut hanging)?;
    if hanging.len() != replacement.arity() {
        return None;
    }
    let mut ranked: Vec<(u32, &Tree)> = hanging.iter().map(|t| (t.min_leaf(), *t)).collect();
    ranked.sort_by_key(|&(m, _)| m);
    let by_label: Vec<&Tree> = ranked.into_iter().map(|(_, t)| t).collect();
    let new_sub = plant(replacement, &by_label)?;
    host.replace_at(anchor, new_sub)
}

fn collect_hanging<'a>(shape: &Tree, t: &'a Tree, out: &mut Vec<&'a Tree>) -> Option<()> {
    match (shape, t) {
        (Tree::Leaf(_), _) => {
            out.push(t);
            Some(())
        }
        (Tree::Node(_, ss), Tree::Node(_, ts)) if ss.len() == ts.len() => {
            for (s, c) in ss.iter().zip(ts) {
                collect_hanging(s, c, out)?;
            }
            Some(())
        }
        _ => None,
    }
}

fn plant(t: &Tree, by_label: &[&Tree]) -> Option<Tree> {
    match t {
        Tree::Leaf(l) => by_label.get((*l as usize).checked_sub(1)?).map(|s| (*s).clone()),
        Tree::Node(g, cs) => Some(Tree::Node(*g, cs.iter().map(|c| plant(c, by_label)).collect::<Option<_>>()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{parse_monomial, Alphabet, Mode};

    fn fig() -> (Alphabet, Tree) {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("f", 2), ("g", 3)]).unwrap();
        let p = parse_monomial("(g (f (f 1 3) (g 2 (f 4 9) (g 5 6 11))) 7 (f 8 10))", &a).unwrap();
        (a, p)
    }

    #[test]
    fn figure_divisor_found_once() {
        let (a, p) = fig();
        let q = parse_monomial("(f 1 (g 2 3 4))", &a).unwrap();
        let occ = occurrences(&q, &p);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].anchor, vec![0]);
        assert_eq!(occ[0].induced_labels(&p), vec![1, 2, 4, 5]);
        assert!(divides(&q, &p));
    }

    #[test]
    fn label_pattern_matters_in_shuffle_mode() {
        let (a, p) = fig();
        // same shape as the divisor above, different leaf order
        let q = parse_monomial("(f 1 (g 2 4 3))", &a);
        // (g 2 4 3) is not a shuffle monomial at all; use a valid one instead
        assert!(q.is_err());
        let q2 = parse_monomial("(f (f 1 3) 2)", &a).unwrap();
        // f(f(1,3),g(...)) induces 1,3,2 -> pattern (1 3 2): matches
        assert!(divides(&q2, &p));
        let q3 = parse_monomial("(f (f 1 2) 3)", &a).unwrap();
        assert!(!divides(&q3, &p));
    }

    #[test]
    fn self_division_and_planar_shapes() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let left = parse_monomial("(m (m - -) -)", &a).unwrap();
        let right = parse_monomial("(m - (m - -))", &a).unwrap();
        assert_eq!(occurrences(&left, &left).len(), 1);
        assert!(!divides(&left, &right));
        assert!(!divides(&right, &left));
        let four = parse_monomial("(m (m (m - -) -) -)", &a).unwrap();
        assert_eq!(occurrences(&left, &four).len(), 2);
    }

    #[test]
    fn substitution_rewires_free_edges_by_label() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let host = parse_monomial("(m (m 1 3) (m 2 4))", &a).unwrap();
        // replace the top m(m(-,-),-) region by m(1, m(2, 3))
        let shape = parse_monomial("(m (m 1 2) 3)", &a).unwrap();
        let repl = parse_monomial("(m 1 (m 2 3))", &a).unwrap();
        let out = substitute(&host, &[], &shape.planar_shape(), &repl).unwrap();
        // free edges: leaf 1, leaf 3, subtree m(2,4) with min 2 -> ranks 1,3,2
        assert_eq!(a.format(&out), "(m 1 (m (m 2 4) 3))");
        assert!(out.is_shuffle());
    }
}
