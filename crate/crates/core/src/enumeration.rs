//! Dimensions of monomial operads: counts of tree monomials that avoid a
//! forbidden set of divisors.
//!
//! Planar counting is a transfer system over truncated subtree profiles: a
//! relation of depth `L` can only be seen at a node through the top `L`
//! levels below it, so counting by the depth `L - 1` profile of each child is
//! exact. Shuffle counting materialises the surviving trees level by level
//! (the induced labels of an occurrence depend on whole subtrees) and only
//! tests root-anchored occurrences, since every child already survived.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::groebner::{buchberger, GroebnerConfig, GroebnerError, GroebnerResult};
use crate::monomials::{compositions, distribute, occurrence_at, Alphabet, GenId, Mode, Tree};
use crate::presentation::Presentation;

/// Default limit on candidate trees (or profile combinations) examined.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimTag {
    /// The count is the dimension of the operad.
    Exact,
    /// Exact, certified by a basis truncated at a higher arity.
    CertifiedBelowCap,
    /// Counted against a truncated basis at or above its cap: the true
    /// dimension is at most this.
    UpperBound,
}

impl fmt::Display for DimTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimTag::Exact => "exact",
            DimTag::CertifiedBelowCap => "certified-below-cap",
            DimTag::UpperBound => "upper-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimEntry {
    pub arity: usize,
    pub dim: BigUint,
    pub tag: DimTag,
}

/// Dimensions for arities `1..=n`, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimTable {
    pub entries: Vec<DimEntry>,
}

impl DimTable {
    pub fn max_arity(&self) -> usize {
        self.entries.last().map_or(0, |e| e.arity)
    }

    pub fn dim(&self, arity: usize) -> Option<&BigUint> {
        self.entries.iter().find(|e| e.arity == arity).map(|e| &e.dim)
    }

    /// Dimensions indexed by arity, with a zero at arity 0.
    pub fn dims_from_zero(&self) -> Vec<BigUint> {
        std::iter::once(BigUint::zero()).chain(self.entries.iter().map(|e| e.dim.clone())).collect()
    }

    pub fn to_tsv(&self) -> String {
        let rows = self.entries.iter().map(|e| format!("{}\t{}\t{}\n", e.arity, e.dim, e.tag));
        std::iter::once("arity\tdim\ttag\n".to_string()).chain(rows).collect()
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum EnumerationError {
    #[error("presentation is not monomial")]
    NotMonomial,
    #[error("node budget {budget} exhausted at arity {arity}; completed arities are kept")]
    Budget { budget: u64, arity: usize, completed: DimTable },
    #[error(transparent)]
    Groebner(Box<GroebnerError>),
}

struct Forbidden {
    by_root: BTreeMap<GenId, Vec<Tree>>,
    depth: usize,
}

impl Forbidden {
    fn new(monomials: &[Tree]) -> Self {
        let mut by_root: BTreeMap<GenId, Vec<Tree>> = BTreeMap::new();
        for m in monomials {
            if let Some(g) = m.root_generator() {
                by_root.entry(g).or_default().push(m.clone());
            }
        }
        Self { by_root, depth: monomials.iter().map(Tree::depth).max().unwrap_or(0) }
    }

    fn hits_root(&self, g: GenId, t: &Tree) -> bool {
        self.by_root.get(&g).is_some_and(|ms| ms.iter().any(|m| occurrence_at(m, t, &[]).is_some()))
    }
}

/// Steps an odometer over `lens`; false once it wraps around.
fn advance(idx: &mut [usize], lens: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < lens[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Exact counts of monomials avoiding `forbidden`, arities `1..=n_max`.
/// On budget exhaustion the error carries the completed arities.
pub fn count_avoiding(alphabet: &Alphabet, forbidden: &[Tree], n_max: usize, budget: u64) -> Result<DimTable, EnumerationError> {
    let f = Forbidden::new(forbidden);
    match alphabet.mode() {
        Mode::Planar => count_planar(alphabet, &f, n_max, budget),
        Mode::Shuffle => count_shuffle(alphabet, &f, n_max, budget),
    }
}

/// [`count_avoiding`] on the relations of a monomial presentation.
pub fn normal_dims(p: &Presentation, n_max: usize, budget: u64) -> Result<DimTable, EnumerationError> {
    if !p.is_monomial() {
        return Err(EnumerationError::NotMonomial);
    }
    count_avoiding(p.alphabet(), &p.relation_monomials(), n_max, budget)
}

fn exact_table(counts: Vec<BigUint>) -> DimTable {
    let entries = counts
        .into_iter()
        .enumerate()
        .map(|(i, dim)| DimEntry { arity: i + 1, dim, tag: DimTag::Exact })
        .collect();
    DimTable { entries }
}

fn count_planar(alphabet: &Alphabet, f: &Forbidden, n_max: usize, budget: u64) -> Result<DimTable, EnumerationError> {
    let depth = f.depth.max(1);
    // profiles[n]: depth (L-1) truncation -> number of surviving trees of arity n
    let mut profiles: Vec<BTreeMap<Tree, BigUint>> = vec![BTreeMap::new(); n_max + 1];
    let mut counts = Vec::new();
    let mut used = 0u64;
    for n in 1..=n_max {
        let mut level: BTreeMap<Tree, BigUint> = BTreeMap::new();
        if n == 1 {
            level.insert(Tree::identity(), BigUint::one());
        }
        for g in alphabet.ids() {
            let a = alphabet.arity(g);
            if a > n {
                continue;
            }
            for sizes in compositions(n, a) {
                let lists: Vec<Vec<(&Tree, &BigUint)>> = sizes.iter().map(|&s| profiles[s].iter().collect()).collect();
                let lens: Vec<usize> = lists.iter().map(Vec::len).collect();
                if lens.contains(&0) {
                    continue;
                }
                let mut idx = vec![0; a];
                loop {
                    used += 1;
                    if used > budget {
                        return Err(EnumerationError::Budget { budget, arity: n, completed: exact_table(counts) });
                    }
                    let children: Vec<Tree> = idx.iter().zip(&lists).map(|(&i, l)| l[i].0.clone()).collect();
                    let top = Tree::Node(g, children).planar_shape();
                    if !f.hits_root(g, &top) {
                        let mult = idx.iter().zip(&lists).fold(BigUint::one(), |acc, (&i, l)| acc * l[i].1);
                        *level.entry(top.truncate(depth - 1)).or_default() += mult;
                    }
                    if !advance(&mut idx, &lens) {
                        break;
                    }
                }
            }
        }
        counts.push(level.values().sum());
        profiles[n] = level;
    }
    Ok(exact_table(counts))
}

fn count_shuffle(alphabet: &Alphabet, f: &Forbidden, n_max: usize, budget: u64) -> Result<DimTable, EnumerationError> {
    let mut survivors: Vec<Vec<Tree>> = vec![Vec::new(); n_max + 1];
    let mut counts = Vec::new();
    let used = AtomicU64::new(0);
    for n in 1..=n_max {
        if n == 1 {
            survivors[1] = vec![Tree::identity()];
            counts.push(BigUint::one());
            continue;
        }
        let keep = n < n_max;
        let gens: Vec<GenId> = alphabet.ids().filter(|&g| alphabet.arity(g) <= n).collect();
        let results: Vec<Option<(u64, Vec<Tree>)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = gens
                .iter()
                .map(|&g| {
                    let survivors = &survivors;
                    let used = &used;
                    scope.spawn(move || shuffle_level(alphabet, f, survivors, g, n, keep, used, budget))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("enumeration worker panicked")).collect()
        });
        let mut total = 0u64;
        let mut level = Vec::new();
        for r in results {
            let Some((c, trees)) = r else {
                return Err(EnumerationError::Budget { budget, arity: n, completed: exact_table(counts) });
            };
            total += c;
            level.extend(trees);
        }
        counts.push(BigUint::from(total));
        survivors[n] = level;
    }
    Ok(exact_table(counts))
}

#[allow(clippy::too_many_arguments)]
fn shuffle_level(
    alphabet: &Alphabet,
    f: &Forbidden,
    survivors: &[Vec<Tree>],
    g: GenId,
    n: usize,
    keep: bool,
    used: &AtomicU64,
    budget: u64,
) -> Option<(u64, Vec<Tree>)> {
    let a = alphabet.arity(g);
    let labels: Vec<u32> = (1..=n as u32).collect();
    let mut count = 0u64;
    let mut out = Vec::new();
    for sizes in compositions(n, a) {
        let lens: Vec<usize> = sizes.iter().map(|&s| survivors[s].len()).collect();
        if lens.contains(&0) {
            continue;
        }
        for blocks in distribute(&labels, &sizes) {
            let mut idx = vec![0; a];
            loop {
                if used.fetch_add(1, Ordering::Relaxed) >= budget {
                    return None;
                }
                let children: Vec<Tree> = idx
                    .iter()
                    .zip(&sizes)
                    .zip(&blocks)
                    .map(|((&i, &s), b)| survivors[s][i].map_labels(&|l| b[l as usize - 1]))
                    .collect();
                let t = Tree::Node(g, children);
                if !f.hits_root(g, &t) {
                    count += 1;
                    if keep {
                        out.push(t);
                    }
                }
                if !advance(&mut idx, &lens) {
                    break;
                }
            }
        }
    }
    Some((count, out))
}

/// Dimensions of the quotient by an arbitrary presentation, counted against
/// the leading monomials of a Gröbner basis truncated at `cap`.
///
/// Tags: `exact` when the basis is finite (no overlap was cut off);
/// otherwise `certified-below-cap` for arities below the cap and
/// `upper-bound` from the cap on.
pub fn dims_of_quotient(
    p: &Presentation,
    n_max: usize,
    config: &GroebnerConfig,
    node_budget: u64,
) -> Result<(DimTable, GroebnerResult), EnumerationError> {
    let gb = buchberger(p, config).map_err(|e| EnumerationError::Groebner(Box::new(e)))?;
    let table = dims_from_basis(&gb, n_max, node_budget)?;
    Ok((table, gb))
}

/// Counts against the leading monomials of `gb` and tags the result.
pub fn dims_from_basis(gb: &GroebnerResult, n_max: usize, node_budget: u64) -> Result<DimTable, EnumerationError> {
    let lms = gb.leading_terms();
    let retag = |mut t: DimTable| {
        for e in &mut t.entries {
            e.tag = if gb.finite {
                DimTag::Exact
            } else if e.arity < gb.arity_cap {
                DimTag::CertifiedBelowCap
            } else {
                DimTag::UpperBound
            };
        }
        t
    };
    match count_avoiding(&gb.alphabet, &lms, n_max, node_budget) {
        Ok(t) => Ok(retag(t)),
        Err(EnumerationError::Budget { budget, arity, completed }) => {
            Err(EnumerationError::Budget { budget, arity, completed: retag(completed) })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{divides, enumerate_free, parse_monomial};

    fn dims(t: &DimTable) -> Vec<u64> {
        t.entries.iter().map(|e| u64::try_from(&e.dim).unwrap()).collect()
    }

    /// Oracle: filter the full free enumeration by divisibility.
    fn brute(alphabet: &Alphabet, forbidden: &[Tree], n_max: usize) -> Vec<u64> {
        (1..=n_max)
            .map(|n| enumerate_free(alphabet, n).iter().filter(|t| !forbidden.iter().any(|m| divides(m, t))).count() as u64)
            .collect()
    }

    #[test]
    fn planar_left_comb_forbidden_gives_ones() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let m = parse_monomial("(m (m - -) -)", &a).unwrap();
        let t = count_avoiding(&a, &[m], 10, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(dims(&t), vec![1; 10]);
        assert!(t.entries.iter().all(|e| e.tag == DimTag::Exact));
    }

    #[test]
    fn planar_free_is_catalan() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let t = count_avoiding(&a, &[], 10, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(dims(&t), [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]);
    }

    #[test]
    fn planar_profiles_match_brute_force() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2), ("t", 3)]).unwrap();
        let sets = [
            vec!["(m (m - -) (m - -))"],
            vec!["(m - (t - - -))", "(t (m - -) - -)"],
            vec!["(m (m (m - -) -) -)", "(t - (m - -) -)"],
        ];
        for set in sets {
            let ms: Vec<Tree> = set.iter().map(|s| parse_monomial(s, &a).unwrap()).collect();
            let t = count_avoiding(&a, &ms, 6, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(dims(&t), brute(&a, &ms, 6), "{set:?}");
        }
    }

    #[test]
    fn shuffle_matches_brute_force() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2), ("w", 2)]).unwrap();
        let sets = [
            vec!["(m (m 1 2) 3)", "(w 1 (m 2 3))"],
            vec!["(m (w 1 3) (m 2 4))"],
            vec!["(m (m 1 3) 2)", "(m 1 (w 2 3))", "(w (m 1 2) 3)"],
        ];
        for set in sets {
            let ms: Vec<Tree> = set.iter().map(|s| parse_monomial(s, &a).unwrap()).collect();
            let t = count_avoiding(&a, &ms, 5, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(dims(&t), brute(&a, &ms, 5), "{set:?}");
        }
    }

    #[test]
    fn shuffle_free_binary_is_double_factorial() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        let t = count_avoiding(&a, &[], 7, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(dims(&t), [1, 1, 3, 15, 105, 945, 10395]);
    }

    #[test]
    fn budget_keeps_completed_arities() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap();
        match count_avoiding(&a, &[], 9, 200) {
            Err(EnumerationError::Budget { completed, arity, .. }) => {
                assert_eq!(completed.max_arity() + 1, arity);
                assert_eq!(dims(&completed)[..3], [1, 1, 3]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tsv_export() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let t = count_avoiding(&a, &[], 3, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(t.to_tsv(), "arity\tdim\ttag\n1\t1\texact\n2\t1\texact\n3\t2\texact\n");
    }
}
