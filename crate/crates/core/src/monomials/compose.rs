//! Partial compositions `outer ∘ᵢ inner`.

use super::{Mode, Tree};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("slot {slot} out of range for a monomial of arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("relabelling {0:?} does not define a shuffle composition")]
    BadRelabel(Vec<u32>),
}

/// Planar composition: the `slot`-th leaf (1-based, left to right) of `outer`
/// is replaced by `inner`.
pub fn compose_planar(outer: &Tree, slot: usize, inner: &Tree) -> Result<Tree, ComposeError> {
    let arity = outer.arity();
    if slot == 0 || slot > arity {
        return Err(ComposeError::SlotOutOfRange { slot, arity });
    }
    let shape = outer.planar_shape();
    Ok(graft(&shape, slot as u32, &inner.planar_shape()).planar_shape())
}

fn graft(t: &Tree, label: u32, inner: &Tree) -> Tree {
    match t {
        Tree::Leaf(l) if *l == label => inner.clone(),
        Tree::Leaf(l) => Tree::Leaf(*l),
        Tree::Node(g, cs) => Tree::Node(*g, cs.iter().map(|c| graft(c, label, inner)).collect()),
    }
}

/// Shuffle composition: `inner` is inserted at the leaf labelled `slot` and
/// its labels are mapped monotonically onto `inner_labels`; the remaining
/// labels of `outer` are mapped monotonically onto the complement.
///
/// `inner_labels` must be a strictly increasing list of `inner.arity()`
/// labels from `1..=a+b-1` whose minimum is `slot`.
pub fn compose_shuffle(outer: &Tree, slot: u32, inner: &Tree, inner_labels: &[u32]) -> Result<Tree, ComposeError> {
    let a = outer.arity();
    let b = inner.arity();
    let n = (a + b - 1) as u32;
    if slot == 0 || slot as usize > a {
        return Err(ComposeError::SlotOutOfRange { slot: slot as usize, arity: a });
    }
    let bad = || ComposeError::BadRelabel(inner_labels.to_vec());
    if inner_labels.len() != b
        || inner_labels.first() != Some(&slot)
        || inner_labels.windows(2).any(|w| w[0] >= w[1])
        || inner_labels.last().is_some_and(|&l| l > n)
    {
        return Err(bad());
    }
    let complement: Vec<u32> = (1..=n).filter(|l| inner_labels.binary_search(l).is_err()).collect();
    let outer_map = |l: u32| if l < slot { complement[(l - 1) as usize] } else { complement[(l - 2) as usize] };
    let inner_mapped = inner.map_labels(&|l| inner_labels[(l - 1) as usize]);
    let outer_mapped = relabel_except(outer, slot, &outer_map);
    let result = graft(&outer_mapped, 0, &inner_mapped);
    if !result.is_shuffle() {
        return Err(bad());
    }
    Ok(result)
}

fn relabel_except(t: &Tree, slot: u32, f: &impl Fn(u32) -> u32) -> Tree {
    match t {
        Tree::Leaf(l) if *l == slot => Tree::Leaf(0),
        Tree::Leaf(l) => Tree::Leaf(f(*l)),
        Tree::Node(g, cs) => Tree::Node(*g, cs.iter().map(|c| relabel_except(c, slot, f)).collect()),
    }
}

/// Mode-dispatching composition. In planar mode `slot` is a leaf position
/// and `relabel` is ignored; in shuffle mode `slot` is a leaf label and
/// `relabel` lists the labels the inner monomial receives.
pub fn compose(mode: Mode, outer: &Tree, slot: usize, inner: &Tree, relabel: &[u32]) -> Result<Tree, ComposeError> {
    match mode {
        Mode::Planar => compose_planar(outer, slot, inner),
        Mode::Shuffle => compose_shuffle(outer, slot as u32, inner, relabel),
    }
}

/// Every shuffle composition of `inner` into the leaf labelled `slot`.
pub fn shuffle_compositions(outer: &Tree, slot: u32, inner: &Tree) -> Vec<Tree> {
    let a = outer.arity() as u32;
    let b = inner.arity();
    if slot == 0 || slot > a {
        return Vec::new();
    }
    let n = a + b as u32 - 1;
    let pool: Vec<u32> = (slot + 1..=n).collect();
    let mut out = Vec::new();
    for rest in combinations(&pool, b - 1) {
        let mut labels = vec![slot];
        labels.extend(rest);
        if let Ok(t) = compose_shuffle(outer, slot, inner, &labels) {
            out.push(t);
        }
    }
    out
}

pub(crate) fn combinations(pool: &[u32], k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(pool: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            go(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(pool, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{parse_monomial, Alphabet};

    #[test]
    fn identity_law() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let m = parse_monomial("(m 1 2)", &a).unwrap();
        assert_eq!(compose_shuffle(&Tree::identity(), 1, &m, &[1, 2]).unwrap(), m);
        assert_eq!(compose_planar(&Tree::identity(), 1, &m).unwrap(), m);
        assert_eq!(compose_planar(&m, 2, &Tree::identity()).unwrap(), m);
    }

    #[test]
    fn planar_left_insertion() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let m = parse_monomial("(m - -)", &a).unwrap();
        let t = compose_planar(&m, 1, &m).unwrap();
        assert_eq!(a.format(&t), "(m (m - -) -)");
        assert!(matches!(compose_planar(&m, 3, &m), Err(ComposeError::SlotOutOfRange { .. })));
    }

    #[test]
    fn shuffle_compositions_at_arity_three() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let m = parse_monomial("(m 1 2)", &a).unwrap();
        let mut got: Vec<String> = shuffle_compositions(&m, 1, &m).iter().map(|t| a.format(t)).collect();
        got.sort();
        assert_eq!(got, vec!["(m (m 1 2) 3)", "(m (m 1 3) 2)"]);
        // brute force: every relabelling of the planar composite, filtered by is_shuffle
        let planar = compose_planar(&m, 1, &m).unwrap();
        let mut brute = Vec::new();
        for p in [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]] {
            let t = planar.with_leaf_labels(&p);
            let inner = t.subtree(&[0]).unwrap().compress_labels();
            if t.is_shuffle() && inner == m {
                brute.push(a.format(&t));
            }
        }
        brute.sort();
        assert_eq!(got, brute);
        assert_eq!(shuffle_compositions(&m, 2, &m).len(), 1);
    }

    #[test]
    fn bad_relabel_rejected() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let m = parse_monomial("(m 1 2)", &a).unwrap();
        assert!(matches!(compose_shuffle(&m, 2, &m, &[1, 2]), Err(ComposeError::BadRelabel(_))));
        assert!(matches!(compose_shuffle(&m, 1, &m, &[1, 4]), Err(ComposeError::BadRelabel(_))));
    }
}
