//! Substitution trails: certificates that an element lies in the ideal.
//!
//! A trail is a finite sum `Σ c · lift(r_i, host, anchor, shape)`, where the
//! lift replaces the region of `host` covered by `shape` at `anchor` by each
//! monomial of the input relation `r_i` in turn (see
//! [`crate::monomials::substitute`]). Lifting a lift into a further context
//! is again a lift, so trails compose without reference to intermediate
//! basis elements.

use std::collections::BTreeMap;

use num_traits::One;

use crate::element::OperadElement;
use crate::monomials::{substitute, Path, Tree};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrailKey {
    pub relation: usize,
    pub host: Tree,
    pub anchor: Path,
    pub shape: Tree,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trail {
    terms: BTreeMap<TrailKey, Rational>,
}

/// `Σ c_t · substitute(host, anchor, shape, t)` over the terms of `e`.
pub(crate) fn lift(e: &OperadElement, host: &Tree, anchor: &[usize], shape: &Tree) -> Option<OperadElement> {
    let mut out = OperadElement::zero();
    for (t, c) in e.terms() {
        out.add_term(substitute(host, anchor, shape, t)?, c.clone());
    }
    Some(out)
}

impl Trail {
    /// The trail of relation `index` itself.
    pub fn of_relation(index: usize, relation: &OperadElement) -> Self {
        let mut trail = Self::default();
        if let Some(t) = relation.monomials().next() {
            let key = TrailKey { relation: index, host: t.clone(), anchor: Vec::new(), shape: t.planar_shape() };
            trail.terms.insert(key, Rational::one());
        }
        trail
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TrailKey, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn add_scaled(&mut self, other: &Trail, c: &Rational) {
        for (k, d) in &other.terms {
            let v = self.terms.entry(k.clone()).or_default();
            *v += d * c;
            if num_traits::Zero::is_zero(v) {
                self.terms.remove(k);
            }
        }
    }

    pub(crate) fn scale(&mut self, c: &Rational) {
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    /// The trail of the element lifted into `host` at `anchor`, where `shape`
    /// covers a region whose arity equals the element's arity.
    pub(crate) fn lifted(&self, host: &Tree, anchor: &[usize], shape: &Tree) -> Option<Trail> {
        let mut out = Trail::default();
        for (k, c) in &self.terms {
            let new_host = substitute(host, anchor, shape, &k.host)?;
            let mut new_anchor = anchor.to_vec();
            new_anchor.extend(&k.anchor);
            let key = TrailKey { relation: k.relation, host: new_host, anchor: new_anchor, shape: k.shape.clone() };
            let v = out.terms.entry(key).or_default();
            *v += c;
        }
        out.terms.retain(|_, v| !num_traits::Zero::is_zero(v));
        Some(out)
    }

    /// Re-expands the trail into an element of the free operad.
    pub fn evaluate(&self, relations: &[OperadElement]) -> Option<OperadElement> {
        let mut out = OperadElement::zero();
        for (k, c) in &self.terms {
            let r = relations.get(k.relation)?;
            out.add_scaled(&lift(r, &k.host, &k.anchor, &k.shape)?, c);
        }
        Some(out)
    }
}
