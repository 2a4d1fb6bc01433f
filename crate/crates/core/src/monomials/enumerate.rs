//! Enumeration of free-operad monomials.

use std::collections::BTreeSet;

use super::compose::combinations;
use super::{Alphabet, GenId, Mode, MonomialOrder, Tree};

/// Ordered compositions of `total` into `parts` positive integers.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn go(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            cur.push(first);
            go(left - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    go(total, parts, &mut cur, &mut out);
    out
}

/// Cartesian product of the given choice lists.
pub(crate) fn cartesian<T: Clone>(lists: &[&[T]]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list.iter() {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn shapes_rooted_at(alphabet: &Alphabet, g: GenId, n: usize, table: &[Vec<Tree>]) -> Vec<Tree> {
    let k = alphabet.arity(g);
    let mut out = Vec::new();
    if n < k {
        return out;
    }
    for comp in compositions(n, k) {
        let lists: Vec<&[Tree]> = comp.iter().map(|&a| table[a].as_slice()).collect();
        for children in cartesian(&lists) {
            out.push(Tree::Node(g, children).planar_shape());
        }
    }
    out
}

fn shape_table(alphabet: &Alphabet, n: usize) -> Vec<Vec<Tree>> {
    let mut table: Vec<Vec<Tree>> = vec![Vec::new(), vec![Tree::identity()]];
    for m in 2..=n {
        let mut level = Vec::new();
        for g in alphabet.ids() {
            level.extend(shapes_rooted_at(alphabet, g, m, &table));
        }
        table.push(level);
    }
    table
}

/// All planar trees of arity `n` over the alphabet, leaves numbered
/// positionally.
pub fn planar_shapes(alphabet: &Alphabet, n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    shape_table(alphabet, n).swap_remove(n)
}

/// All shuffle labellings of a planar shape.
pub fn shuffle_labelings(shape: &Tree) -> Vec<Tree> {
    let labels: Vec<u32> = (1..=shape.arity() as u32).collect();
    label_with(shape, &labels)
}

fn label_with(t: &Tree, labels: &[u32]) -> Vec<Tree> {
    match t {
        Tree::Leaf(_) => vec![Tree::Leaf(labels[0])],
        Tree::Node(g, cs) => {
            let sizes: Vec<usize> = cs.iter().map(Tree::arity).collect();
            let mut out = Vec::new();
            for blocks in distribute(labels, &sizes) {
                let per_child: Vec<Vec<Tree>> = cs.iter().zip(&blocks).map(|(c, b)| label_with(c, b)).collect();
                let lists: Vec<&[Tree]> = per_child.iter().map(Vec::as_slice).collect();
                for children in cartesian(&lists) {
                    out.push(Tree::Node(*g, children));
                }
            }
            out
        }
    }
}

/// Splits a sorted label list into blocks of the given sizes such that each
/// block contains the smallest label not used by earlier blocks.
pub(crate) fn distribute(labels: &[u32], sizes: &[usize]) -> Vec<Vec<Vec<u32>>> {
    let Some((&first, rest_sizes)) = sizes.split_first() else {
        return if labels.is_empty() { vec![Vec::new()] } else { Vec::new() };
    };
    let Some((&min, pool)) = labels.split_first() else { return Vec::new() };
    let mut out = Vec::new();
    for extra in combinations(pool, first - 1) {
        let mut block = vec![min];
        block.extend(&extra);
        let remaining: Vec<u32> = pool.iter().copied().filter(|l| !extra.contains(l)).collect();
        for mut tail in distribute(&remaining, rest_sizes) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

fn sort_canonical(alphabet: &Alphabet, trees: &mut [Tree]) {
    let order = MonomialOrder::default_for(alphabet);
    trees.sort_by_cached_key(|t| (t.weight(), order.key(t)));
}

/// Every monomial of arity `n` of the free operad, exactly once, sorted by
/// weight then path-lex (declaration precedence).
pub fn enumerate_free(alphabet: &Alphabet, n: usize) -> Vec<Tree> {
    let mut out = match alphabet.mode() {
        Mode::Planar => planar_shapes(alphabet, n),
        Mode::Shuffle => planar_shapes(alphabet, n).iter().flat_map(shuffle_labelings).collect(),
    };
    sort_canonical(alphabet, &mut out);
    out
}

/// Same result as [`enumerate_free`], computed with one worker per root
/// generator.
pub fn enumerate_free_par(alphabet: &Alphabet, n: usize) -> Vec<Tree> {
    if n <= 1 {
        return enumerate_free(alphabet, n);
    }
    let table = shape_table(alphabet, n - 1);
    let mut parts: Vec<Vec<Tree>> = std::thread::scope(|s| {
        let handles: Vec<_> = alphabet
            .ids()
            .map(|g| {
                let table = &table;
                s.spawn(move || {
                    let shapes = shapes_rooted_at(alphabet, g, n, table);
                    match alphabet.mode() {
                        Mode::Planar => shapes,
                        Mode::Shuffle => shapes.iter().flat_map(shuffle_labelings).collect(),
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
    });
    let mut out: Vec<Tree> = parts.iter_mut().flat_map(std::mem::take).collect();
    sort_canonical(alphabet, &mut out);
    out
}

/// Every planar shape obtained by reordering children at any nodes.
pub fn replanarizations(shape: &Tree) -> Vec<Tree> {
    fn go(t: &Tree) -> BTreeSet<Tree> {
        match t {
            Tree::Leaf(_) => BTreeSet::from([Tree::Leaf(0)]),
            Tree::Node(g, cs) => {
                let options: Vec<Vec<Tree>> = cs.iter().map(|c| go(c).into_iter().collect()).collect();
                let mut out = BTreeSet::new();
                for perm in permutations(cs.len()) {
                    let lists: Vec<&[Tree]> = perm.iter().map(|&i| options[i].as_slice()).collect();
                    for children in cartesian(&lists) {
                        out.insert(Tree::Node(*g, children));
                    }
                }
                out
            }
        }
    }
    go(shape).into_iter().map(|t| t.planar_shape()).collect::<BTreeSet<_>>().into_iter().collect()
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts_for_one_planar_binary_generator() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_free(&a, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132]);
        assert_eq!(enumerate_free(&a, 1), vec![Tree::identity()]);
    }

    #[test]
    fn shuffle_arity_three_with_two_generators() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("a", 2), ("b", 2)]).unwrap();
        let all = enumerate_free(&a, 3);
        assert_eq!(all.len(), 12);
        assert!(all.iter().all(Tree::is_shuffle));
        // oracle: every labelling of every planar shape, filtered by is_shuffle
        let mut brute = 0;
        for shape in planar_shapes(&a, 3) {
            for p in permutations(3) {
                let labels: Vec<u32> = p.iter().map(|&i| i as u32 + 1).collect();
                if shape.with_leaf_labels(&labels).is_shuffle() {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 12);
    }

    #[test]
    fn ternary_generator_shuffle_labelings_match_brute_force() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2), ("t", 3)]).unwrap();
        for n in 1..=5 {
            let fast = enumerate_free(&a, n).len();
            let mut brute = 0;
            for shape in planar_shapes(&a, n) {
                for p in permutations(n) {
                    let labels: Vec<u32> = p.iter().map(|&i| i as u32 + 1).collect();
                    if shape.with_leaf_labels(&labels).is_shuffle() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(fast, brute, "arity {n}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("a", 2), ("b", 2), ("t", 3)]).unwrap();
        for n in 1..=5 {
            assert_eq!(enumerate_free(&a, n), enumerate_free_par(&a, n));
        }
    }

    #[test]
    fn double_factorial_for_one_shuffle_binary_generator() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_free(&a, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 105, 945]);
    }

    #[test]
    fn replanarizations_of_a_comb() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let left = crate::monomials::parse_monomial("(m (m - -) -)", &a).unwrap();
        let r = replanarizations(&left);
        assert_eq!(r.len(), 2);
    }
}
