//! Linear combinations of tree monomials with exact rational coefficients.
//!
//! Text form: `coef * tree ± coef * tree ...`, where `coef` is an integer or
//! `p/q` and may be omitted (meaning 1). A lone `0` is the zero element.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::monomials::{parse::finish_tree, parse::Cursor, Alphabet, MonomialOrder, ParseError, Tree};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ElementError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("monomials of different arities ({0} and {1}) in one element")]
    MixedArity(usize, usize),
    #[error("bad coefficient '{0}'")]
    Coefficient(String),
}

/// An arity-homogeneous element of the free operad. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperadElement {
    terms: BTreeMap<Tree, Rational>,
}

impl OperadElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(t: Tree) -> Self {
        Self::term(t, Rational::one())
    }

    pub fn term(t: Tree, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(t, c);
        e
    }

    /// Sums the given terms, rejecting mixed arities.
    pub fn from_terms(terms: impl IntoIterator<Item = (Tree, Rational)>) -> Result<Self, ElementError> {
        let mut e = Self::zero();
        for (t, c) in terms {
            if let Some(a) = e.arity() {
                if a != t.arity() {
                    return Err(ElementError::MixedArity(a, t.arity()));
                }
            }
            e.add_term(t, c);
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Arity of the monomials, `None` for zero.
    pub fn arity(&self) -> Option<usize> {
        self.terms.keys().next().map(Tree::arity)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tree, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Tree> {
        self.terms.keys()
    }

    pub fn coeff(&self, t: &Tree) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * t`; the caller keeps the element homogeneous.
    pub fn add_term(&mut self, t: Tree, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &OperadElement, c: &Rational) {
        for (t, d) in &other.terms {
            self.add_term(t.clone(), d * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut e = Self::zero();
        e.add_scaled(self, c);
        e
    }

    pub fn sub(&self, other: &OperadElement) -> Self {
        let mut e = self.clone();
        e.add_scaled(other, &-Rational::one());
        e
    }

    pub fn map_monomials(&self, mut f: impl FnMut(&Tree) -> Tree) -> Self {
        let mut e = Self::zero();
        for (t, c) in &self.terms {
            e.add_term(f(t), c.clone());
        }
        e
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Tree, &Rational)> {
        self.terms.iter().max_by_key(|(t, _)| order.key(t))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading(order) {
            Some((_, c)) => self.scaled(&c.recip()),
            None => Self::zero(),
        }
    }

    /// Terms from largest to smallest in `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Tree, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_cached_key(|(t, _)| std::cmp::Reverse(order.key(t)));
        v
    }

    pub fn format(&self, alphabet: &Alphabet, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (t, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push_str(" * ");
            }
            out.push_str(&alphabet.format(t));
        }
        out
    }
}

pub fn parse_element(text: &str, alphabet: &Alphabet) -> Result<OperadElement, ElementError> {
    let mut cur = Cursor::new(text);
    if cur.rest().trim() == "0" {
        return Ok(OperadElement::zero());
    }
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        match cur.peek() {
            Some('+') if !first => {
                cur.bump();
            }
            Some('-') if matches!(cur.rest()[1..].trim_start().chars().next(), Some(c) if c.is_ascii_digit() || c == '(') => {
                cur.bump();
                sign = -sign;
            }
            None => return Err(cur.error("expected a term").into()),
            _ if !first => return Err(cur.error("expected '+' or '-' between terms").into()),
            _ => {}
        }
        let coef = read_coefficient(&mut cur)?;
        let raw = cur.tree(alphabet, 0)?;
        let t = finish_tree(raw, alphabet)?;
        terms.push((t, sign * coef));
        first = false;
        if cur.at_end() {
            break;
        }
    }
    OperadElement::from_terms(terms)
}

/// Reads an optional `coef *` prefix. A bare number not followed by `*` is
/// a shuffle leaf (the identity monomial).
fn read_coefficient(cur: &mut Cursor<'_>) -> Result<Rational, ElementError> {
    cur.skip_ws();
    let rest = cur.rest();
    let Some(stop) = rest.find(['(', '*']) else { return Ok(Rational::one()) };
    if rest.as_bytes()[stop] == b'(' {
        return Ok(Rational::one());
    }
    let head = &rest[..stop];
    let c = match parse_rational(head) {
        Some(c) => c,
        // the '*' belongs to a later term
        None if head.trim_start().get(1..).is_some_and(|h| h.contains(['+', '-'])) => return Ok(Rational::one()),
        None => return Err(ElementError::Coefficient(head.trim().to_string())),
    };
    if c.is_zero() {
        return Err(ElementError::Coefficient(head.trim().to_string()));
    }
    cur.advance(stop + 1);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{parse_monomial, Mode};
    use crate::rational::rat;

    fn shuffle() -> Alphabet {
        Alphabet::from_pairs(Mode::Shuffle, &[("a", 2), ("b", 2)]).unwrap()
    }

    #[test]
    fn parse_and_format_round_trip() {
        let a = shuffle();
        let o = MonomialOrder::default_for(&a);
        let e = parse_element("(b (a 1 2) 3) + (b 1 (a 2 3)) - (b (a 1 3) 2)", &a).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.arity(), Some(3));
        let text = e.format(&a, &o);
        assert_eq!(parse_element(&text, &a).unwrap(), e);
        let f = parse_element("-3/2 * (a 1 2) + 2*(b 1 2)", &a).unwrap();
        assert_eq!(f.coeff(&parse_monomial("(a 1 2)", &a).unwrap()), rat(-3, 2));
        assert_eq!(parse_element(&f.format(&a, &o), &a).unwrap(), f);
    }

    #[test]
    fn cancellation_and_zero() {
        let a = shuffle();
        let e = parse_element("(a 1 2) - (a 1 2)", &a).unwrap();
        assert!(e.is_zero());
        assert!(parse_element("0", &a).unwrap().is_zero());
        assert_eq!(OperadElement::zero().format(&a, &MonomialOrder::default_for(&a)), "0");
    }

    #[test]
    fn errors() {
        let a = shuffle();
        assert!(matches!(parse_element("(a 1 2) + (a (a 1 2) 3)", &a), Err(ElementError::MixedArity(2, 3))));
        assert!(matches!(parse_element("x * (a 1 2)", &a), Err(ElementError::Coefficient(_))));
        assert!(matches!(parse_element("0 * (a 1 2)", &a), Err(ElementError::Coefficient(_))));
        assert!(parse_element("(a 1 2) (b 1 2)", &a).is_err());
        assert!(parse_element("(a 1 2) +", &a).is_err());
        assert!(parse_element("", &a).is_err());
    }

    #[test]
    fn leading_term_and_monic() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let o = MonomialOrder::default_for(&a);
        let e = parse_element("2 * (m - (m - -)) - 4 * (m (m - -) -)", &a).unwrap();
        let (lm, lc) = e.leading(&o).unwrap();
        assert_eq!(a.format(lm), "(m (m - -) -)");
        assert_eq!(*lc, rat(-4, 1));
        assert_eq!(e.monic(&o).format(&a, &o), "(m (m - -) -) - 1/2 * (m - (m - -))");
    }
}
