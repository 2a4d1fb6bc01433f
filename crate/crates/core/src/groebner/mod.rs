//! Reduction, overlaps and truncated Buchberger completion.
//!
//! Leading terms are taken with respect to a path-lex [`MonomialOrder`].
//! Overlaps are processed in the normal strategy (smallest arity first,
//! then smallest common multiple); overlaps whose arity exceeds the cap are
//! dropped, and the result records whether that happened.

mod overlap;
mod trail;

pub use overlap::{overlap_monomials, Overlap, SElement};
pub use trail::{Trail, TrailKey};

use std::collections::BTreeMap;

use num_traits::One;

use crate::element::OperadElement;
use crate::monomials::{first_occurrence, Alphabet, MonomialOrder, PathKey, Tree};
use crate::presentation::Presentation;
use crate::rational::Rational;

use trail::lift;

pub const DEFAULT_CAP: usize = 8;
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroebnerError {
    #[error("arity cap {cap} is below the largest relation arity {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("reduction budget of {budget} steps exhausted at arity {arity}; the partial basis is still a valid subset of a Groebner basis")]
    Budget { budget: usize, arity: usize, partial: Box<GroebnerResult> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Selection {
    /// Smallest arity first, then smallest common multiple.
    #[default]
    Normal,
    /// Largest arity first; only useful to test that the result does not
    /// depend on the strategy.
    Reverse,
}

#[derive(Clone, Debug)]
pub struct GroebnerConfig {
    pub cap: usize,
    /// Maximal number of single reduction steps.
    pub budget: usize,
    pub keep_trail: bool,
    pub selection: Selection,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        Self { cap: DEFAULT_CAP, budget: DEFAULT_BUDGET, keep_trail: false, selection: Selection::Normal }
    }
}

impl GroebnerConfig {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerResult {
    pub alphabet: Alphabet,
    pub precedence: Vec<String>,
    /// Monic, inter-reduced, sorted by arity then leading monomial.
    pub basis: Vec<OperadElement>,
    /// One trail per basis element when requested.
    pub trails: Option<Vec<Trail>>,
    pub arity_cap: usize,
    /// Every overlap of arity at most the cap reduced to zero and no basis
    /// element has arity at or above the cap.
    pub complete_below_cap: bool,
    /// No overlap was dropped because of the cap, so the basis is a finite
    /// Groebner basis of the whole ideal.
    pub finite: bool,
}

impl GroebnerResult {
    pub fn order(&self) -> MonomialOrder {
        let names: Vec<&str> = self.precedence.iter().map(String::as_str).collect();
        MonomialOrder::with_precedence(&self.alphabet, &names).expect("precedence checked by the presentation")
    }

    pub fn leading_terms(&self) -> Vec<Tree> {
        let order = self.order();
        self.basis.iter().filter_map(|b| b.leading(&order).map(|(t, _)| t.clone())).collect()
    }

    /// Basis in element syntax, one per line.
    pub fn export(&self) -> String {
        let order = self.order();
        self.basis.iter().map(|b| b.format(&self.alphabet, &order) + "\n").collect()
    }

    /// Re-evaluates every trail from the input relations.
    pub fn verify_trails(&self, relations: &[OperadElement]) -> Option<bool> {
        let trails = self.trails.as_ref()?;
        Some(trails.iter().zip(&self.basis).all(|(t, b)| t.evaluate(relations).as_ref() == Some(b)))
    }
}

/// The monomial presentation on the leading terms of a basis.
pub fn leading_monomials(g: &GroebnerResult) -> Presentation {
    let p = Presentation::monomial(g.alphabet.clone(), g.leading_terms());
    p.with_precedence(g.precedence.clone()).expect("same alphabet")
}

#[derive(Clone, Debug)]
struct Entry {
    element: OperadElement,
    lm: Tree,
    lm_shape: Tree,
    trail: Option<Trail>,
}

impl Entry {
    fn new(element: OperadElement, trail: Option<Trail>, order: &MonomialOrder) -> Option<Self> {
        let (lm, lc) = element.leading(order)?;
        let inv = lc.recip();
        let lm = lm.clone();
        let element = element.scaled(&inv);
        let trail = trail.map(|mut t| {
            t.scale(&inv);
            t
        });
        Some(Self { lm_shape: lm.planar_shape(), lm, element, trail })
    }
}

struct Reducer<'a> {
    order: &'a MonomialOrder,
    steps: usize,
    budget: usize,
}

impl Reducer<'_> {
    /// Full normal form of `f` modulo the leading terms of `basis`, skipping
    /// the entry at index `skip`. Returns `None` when the budget runs out.
    fn reduce(
        &mut self,
        f: &OperadElement,
        mut trail: Option<Trail>,
        basis: &[Entry],
        skip: Option<usize>,
    ) -> Option<(OperadElement, Option<Trail>)> {
        let order = self.order;
        let mut pending: BTreeMap<PathKey, (Tree, Rational)> = BTreeMap::new();
        let push = |pending: &mut BTreeMap<PathKey, (Tree, Rational)>, t: Tree, c: Rational| {
            let key = order.key(&t);
            match pending.entry(key) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert((t, c));
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    o.get_mut().1 += c;
                    if num_traits::Zero::is_zero(&o.get().1) {
                        o.remove();
                    }
                }
            }
        };
        for (t, c) in f.terms() {
            push(&mut pending, t.clone(), c.clone());
        }
        let mut normal = OperadElement::zero();
        while let Some((_, (t, c))) = pending.pop_last() {
            let hit = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != skip)
                .find_map(|(_, b)| first_occurrence(&b.lm, &t).map(|occ| (b, occ)));
            let Some((b, occ)) = hit else {
                normal.add_term(t, c);
                continue;
            };
            self.steps += 1;
            if self.steps > self.budget {
                return None;
            }
            let lifted = lift(&b.element, &t, &occ.anchor, &b.lm_shape).expect("occurrence fits");
            for (s, d) in lifted.terms() {
                if *s != t {
                    push(&mut pending, s.clone(), -(d * &c));
                }
            }
            if let (Some(tr), Some(bt)) = (trail.as_mut(), b.trail.as_ref()) {
                let l = bt.lifted(&t, &occ.anchor, &b.lm_shape).expect("occurrence fits");
                tr.add_scaled(&l, &-c.clone());
            }
        }
        Some((normal, trail))
    }
}

/// Normal form of `f` modulo the leading terms of `basis` (each element is
/// made monic first). Terminates because every step replaces a monomial by
/// strictly smaller ones.
pub fn reduce(f: &OperadElement, basis: &[OperadElement], order: &MonomialOrder) -> OperadElement {
    let entries: Vec<Entry> = basis.iter().filter_map(|b| Entry::new(b.clone(), None, order)).collect();
    let mut r = Reducer { order, steps: 0, budget: usize::MAX };
    r.reduce(f, None, &entries, None).expect("unbounded budget").0
}

/// S-elements of every overlap of the leading terms of `f` and `g` with
/// arity at most `cap`.
pub fn overlaps(f: &OperadElement, g: &OperadElement, order: &MonomialOrder, mode: crate::monomials::Mode, cap: usize) -> Vec<SElement> {
    let (Some(ef), Some(eg)) = (Entry::new(f.clone(), None, order), Entry::new(g.clone(), None, order)) else {
        return Vec::new();
    };
    let same = ef.element == eg.element;
    overlap_monomials(mode, &ef.lm, &eg.lm, cap, same)
        .into_iter()
        .filter_map(|o| {
            let element = overlap::s_element(&ef.element, &ef.lm, &eg.element, &eg.lm, &o)?;
            Some(SElement { overlap: o, element })
        })
        .collect()
}

struct Pending {
    i: usize,
    j: usize,
    overlap: Overlap,
}

/// Truncated Buchberger completion of the presentation's relations.
pub fn buchberger(p: &Presentation, config: &GroebnerConfig) -> Result<GroebnerResult, GroebnerError> {
    let order = p.order();
    let mode = p.mode();
    let cap = config.cap;
    let needed = p.max_relation_arity();
    if cap < needed {
        return Err(GroebnerError::CapTooSmall { cap, needed });
    }
    let mut reducer = Reducer { order: &order, steps: 0, budget: config.budget };
    let mut basis: Vec<Entry> = Vec::new();
    let mut queue: BTreeMap<(usize, PathKey, usize), Pending> = BTreeMap::new();
    let mut seq = 0usize;
    let mut exceeded = false;

    let finish = |basis: Vec<Entry>, complete: bool, finite: bool| -> GroebnerResult {
        finalize(p, &order, basis, cap, complete, finite, config.keep_trail)
    };

    let mut inputs: Vec<(usize, &OperadElement)> = p.relations().iter().enumerate().collect();
    inputs.sort_by_cached_key(|(_, r)| {
        let lm = r.leading(&order).map(|(t, _)| order.key(t));
        (r.arity(), lm)
    });
    let mut work: Vec<(OperadElement, Option<Trail>)> = inputs
        .into_iter()
        .map(|(i, r)| (r.clone(), config.keep_trail.then(|| Trail::of_relation(i, r))))
        .collect();
    work.reverse();

    loop {
        let (candidate, trail, arity) = if let Some((e, t)) = work.pop() {
            let a = e.arity().unwrap_or(1);
            (e, t, a)
        } else if let Some(((arity, _, _), pend)) = match config.selection {
            Selection::Normal => queue.pop_first(),
            Selection::Reverse => queue.pop_last(),
        } {
            let (bi, bj) = (&basis[pend.i], &basis[pend.j]);
            let s = overlap::s_element(&bi.element, &bi.lm, &bj.element, &bj.lm, &pend.overlap).expect("overlap fits");
            let trail = match (&bi.trail, &bj.trail) {
                (Some(ti), Some(tj)) => {
                    let o = &pend.overlap;
                    let mut t = ti.lifted(&o.lcm, &o.anchor_f, &bi.lm_shape).expect("overlap fits");
                    let tj = tj.lifted(&o.lcm, &o.anchor_g, &bj.lm_shape).expect("overlap fits");
                    t.add_scaled(&tj, &-Rational::one());
                    Some(t)
                }
                _ => None,
            };
            (s, trail, arity)
        } else {
            break;
        };
        let Some((r, trail)) = reducer.reduce(&candidate, trail, &basis, None) else {
            let partial = finish(basis, false, false);
            return Err(GroebnerError::Budget { budget: config.budget, arity, partial: Box::new(partial) });
        };
        let Some(entry) = Entry::new(r, trail, &order) else { continue };
        let k = basis.len();
        basis.push(entry);
        for i in 0..=k {
            let (f, g) = (&basis[i], &basis[k]);
            if overlap::may_exceed(&f.lm, &g.lm, cap) {
                exceeded = true;
            }
            for o in overlap_monomials(mode, &f.lm, &g.lm, cap, i == k) {
                let key = (o.lcm.arity(), order.key(&o.lcm), seq);
                seq += 1;
                queue.insert(key, Pending { i, j: k, overlap: o });
            }
        }
    }
    Ok(finish(basis, true, !exceeded))
}

fn finalize(
    p: &Presentation,
    order: &MonomialOrder,
    basis: Vec<Entry>,
    cap: usize,
    overlaps_done: bool,
    finite: bool,
    keep_trail: bool,
) -> GroebnerResult {
    // minimal: drop entries whose leading term is divisible by another's
    let mut kept: Vec<Entry> = Vec::new();
    for (i, e) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, f)| {
            j != i && crate::monomials::divides(&f.lm, &e.lm) && (f.lm != e.lm || j < i)
        });
        if !redundant {
            kept.push(e.clone());
        }
    }
    // inter-reduce tails
    let mut reducer = Reducer { order, steps: 0, budget: usize::MAX };
    for i in 0..kept.len() {
        let (r, t) = reducer.reduce(&kept[i].element, kept[i].trail.clone(), &kept, Some(i)).expect("unbounded budget");
        kept[i] = Entry::new(r, t, order).expect("leading term is irreducible");
    }
    kept.sort_by_cached_key(|e| (e.lm.arity(), order.key(&e.lm)));
    let complete = overlaps_done && kept.iter().all(|e| e.lm.arity() < cap);
    GroebnerResult {
        alphabet: p.alphabet().clone(),
        precedence: p.precedence().to_vec(),
        trails: keep_trail.then(|| kept.iter().map(|e| e.trail.clone().unwrap_or_default()).collect()),
        basis: kept.into_iter().map(|e| e.element).collect(),
        arity_cap: cap,
        complete_below_cap: complete,
        finite: finite && overlaps_done,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::parse_element;
    use crate::monomials::{parse_monomial, Mode};
    use crate::presentation::parse_presentation;

    fn ass() -> Presentation {
        parse_presentation("mode: planar\ngenerators: m:2\nrelations:\n(m (m - -) -) - (m - (m - -))\n").unwrap()
    }

    #[test]
    fn associativity_is_its_own_basis() {
        let p = ass();
        let mut cfg = GroebnerConfig::with_cap(6);
        cfg.keep_trail = true;
        let g = buchberger(&p, &cfg).unwrap();
        assert_eq!(g.basis.len(), 1);
        assert!(g.complete_below_cap);
        assert!(g.finite);
        assert_eq!(g.verify_trails(p.relations()), Some(true));
        let lm = leading_monomials(&g);
        assert_eq!(lm.relation_monomials(), vec![parse_monomial("(m (m - -) -)", p.alphabet()).unwrap()]);
    }

    #[test]
    fn reduce_rewrites_left_combs() {
        let p = ass();
        let a = p.alphabet();
        let order = p.order();
        let f = parse_element("(m (m (m - -) -) -)", a).unwrap();
        let r = reduce(&f, p.relations(), &order);
        assert_eq!(r.format(a, &order), "(m - (m - (m - -)))");
        assert_eq!(reduce(&r, p.relations(), &order), r);
        assert!(reduce(&p.relations()[0], p.relations(), &order).is_zero());
        assert_eq!(reduce(&f, &[], &order), f);
    }

    #[test]
    fn single_arity_four_overlap_reduces_to_zero() {
        let p = ass();
        let order = p.order();
        let r = &p.relations()[0];
        let s = overlaps(r, r, &order, Mode::Planar, 4);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].overlap.lcm.arity(), 4);
        assert!(reduce(&s[0].element, p.relations(), &order).is_zero());
        assert!(overlaps(r, r, &order, Mode::Planar, 3).is_empty());
    }

    #[test]
    fn monomial_input_is_already_complete() {
        let p = parse_presentation(
            "mode: shuffle\ngenerators: m:2\nrelations:\n(m (m 1 2) 3)\n(m (m 1 3) 2)\n(m (m (m 1 2) 3) 4)\n",
        )
        .unwrap();
        let g = buchberger(&p, &GroebnerConfig::with_cap(5)).unwrap();
        assert_eq!(g.basis.len(), 2);
        assert!(g.basis.iter().all(OperadElement::is_monomial));
        let s = overlaps(&g.basis[0], &g.basis[0], &g.order(), Mode::Shuffle, 5);
        assert!(s.iter().all(|s| s.element.is_zero()));
    }

    #[test]
    fn disjoint_generators_have_no_overlaps() {
        let a = Alphabet::from_pairs(Mode::Shuffle, &[("a", 2), ("b", 2)]).unwrap();
        let order = MonomialOrder::default_for(&a);
        let f = parse_element("(a (a 1 2) 3)", &a).unwrap();
        let g = parse_element("(b (b 1 2) 3)", &a).unwrap();
        assert!(overlaps(&f, &g, &order, Mode::Shuffle, 8).is_empty());
    }

    #[test]
    fn cap_below_relation_arity_is_rejected() {
        assert!(matches!(buchberger(&ass(), &GroebnerConfig::with_cap(2)), Err(GroebnerError::CapTooSmall { .. })));
    }

    #[test]
    fn budget_exhaustion_returns_partial_basis() {
        let mut cfg = GroebnerConfig::with_cap(6);
        cfg.budget = 0;
        let p = parse_presentation(
            "mode: planar\ngenerators: m:2\nrelations:\n(m (m - -) -) - (m - (m - -))\n(m - (m - (m - -))) - (m (m - -) (m - -))\n",
        )
        .unwrap();
        match buchberger(&p, &cfg) {
            Err(GroebnerError::Budget { partial, .. }) => assert!(!partial.complete_below_cap),
            other => panic!("unexpected {other:?}"),
        }
    }
}
