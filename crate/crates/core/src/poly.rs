//! Exact polynomials over the rationals: dense univariate ([`UPoly`]) with
//! Sturm-sequence root isolation, and sparse multivariate ([`MPoly`]) with
//! exact division and Sylvester resultants.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, a)| a * int(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().cloned().unwrap_or_default() / &lead;
            for (i, b) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * b;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors, monic.
    pub fn square_free(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while let Some(last) = seq.last().filter(|p| !p.is_zero()) {
            let prev = &seq[seq.len() - 2];
            let r = prev.div_rem(last).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()));
        }
        seq.retain(|p| !p.is_zero());
        seq
    }

    fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
        let signs: Vec<bool> = seq.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        let seq = self.square_free().sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// Bound on the absolute value of every root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let lead = self.lead().abs();
        let n = self.coeffs.len().saturating_sub(1);
        let m = self.coeffs[..n].iter().map(|c| c.abs() / &lead).max().unwrap_or_default();
        m + Rational::one()
    }

    /// A rational bracket `[lo, hi]` of width at most `width` around the
    /// smallest positive real root, found by Sturm-certified bisection.
    /// `p(lo)` and `p(hi)` have opposite signs, or one of them is zero.
    pub fn smallest_positive_root(&self, width: &Rational) -> Option<(Rational, Rational)> {
        let sf = self.square_free();
        sf.degree().filter(|d| *d > 0)?;
        if sf.eval(&Rational::zero()).is_zero() {
            // a root at zero does not count; divide it out
            let (q, _) = sf.div_rem(&UPoly::x());
            return q.smallest_positive_root(width);
        }
        let seq = sf.sturm_sequence();
        let count = |a: &Rational, b: &Rational| Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b));
        let zero = Rational::zero();
        let mut hi = sf.root_bound();
        if count(&zero, &hi) == 0 {
            return None;
        }
        let mut lo = zero;
        // shrink until the interval holds exactly one root and is narrow
        loop {
            let mid = (&lo + &hi) / int(2);
            if count(&lo, &mid) > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if &hi - &lo <= *width && count(&lo, &hi) == 1 {
                return Some((lo, hi));
            }
        }
    }

    pub fn format(&self, var: &str) -> String {
        let terms: Vec<(Rational, Vec<u32>)> =
            self.coeffs.iter().enumerate().map(|(i, c)| (c.clone(), vec![i as u32])).collect();
        format_terms(terms.into_iter().rev(), &[var])
    }
}

/// Sparse polynomial in a fixed number of variables; exponent vectors are
/// ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e.clone()).or_default();
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        let mut p = MPoly::zero(self.nvars);
        for (e, d) in &self.terms {
            p.add_term(e.clone(), d * c);
        }
        p
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut p = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                let g: Vec<u32> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                p.add_term(g, c * d);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Total degree in the given variables only.
    pub fn degree_in_vars(&self, vars: &[usize]) -> u32 {
        self.terms.keys().map(|e| vars.iter().map(|&v| e[v]).sum()).max().unwrap_or(0)
    }

    pub fn mentions(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// Coefficients as a polynomial in variable `i`, lowest degree first.
    pub fn coeffs_in(&self, i: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(self.nvars); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = std::mem::replace(&mut f[i], 0) as usize;
            out[k].add_term(f, c.clone());
        }
        out
    }

    /// Replaces variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &MPoly) -> MPoly {
        let cs = self.coeffs_in(i);
        let mut acc = MPoly::zero(self.nvars);
        for c in cs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Moves variable `i` to position `map[i]` of a ring with `nvars`
    /// variables.
    pub fn remap(&self, map: &[usize], nvars: usize) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            p.add_term(f, c.clone());
        }
        p
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize)))
            .sum()
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// `self / d` when the division is exact, `None` otherwise.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        let (de, dc) = d.leading()?;
        let (de, dc) = (de.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((e, c)) = r.leading() {
            if e.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let g: Vec<u32> = e.iter().zip(&de).map(|(a, b)| a - b).collect();
            let t = MPoly::monomial(g, c / &dc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Resultant with respect to variable `i`, as the Sylvester determinant.
    pub fn resultant(&self, o: &MPoly, i: usize) -> MPoly {
        let a = self.coeffs_in(i);
        let b = o.coeffs_in(i);
        let (m, n) = (a.len() - 1, b.len() - 1);
        if m == 0 && n == 0 {
            return MPoly::one(self.nvars);
        }
        let size = m + n;
        let zero = MPoly::zero(self.nvars);
        let mut rows = vec![vec![zero; size]; size];
        for r in 0..n {
            for (k, c) in a.iter().rev().enumerate() {
                rows[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in b.iter().rev().enumerate() {
                rows[n + r][r + k] = c.clone();
            }
        }
        determinant(rows)
    }

    /// Scales to coprime integer coefficients; the sign makes the lowest
    /// power of `z_var` in the top coefficient of `main_var` positive.
    pub fn normalized(&self, main_var: usize, z_var: usize) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let p = self.scale(&Rational::from_integer(den));
        let g = p.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        let mut p = p.scale(&Rational::from_integer(g).recip());
        let top = p.coeffs_in(main_var).pop().unwrap_or_else(|| MPoly::zero(self.nvars));
        let low = top.terms.iter().min_by_key(|(e, _)| e[z_var]).map(|(_, c)| c.is_negative());
        if low == Some(true) {
            p = p.scale(&-Rational::one());
        }
        p
    }

    pub fn format(&self, names: &[&str]) -> String {
        let mut terms: Vec<(Rational, Vec<u32>)> = self.terms.iter().map(|(e, c)| (c.clone(), e.clone())).collect();
        // by total degree, then by the last variable first
        let key = |e: &[u32]| (e.iter().sum::<u32>(), e.iter().rev().copied().collect::<Vec<u32>>());
        terms.sort_by_key(|t| std::cmp::Reverse(key(&t.1)));
        format_terms(terms.into_iter(), names)
    }
}

/// Fraction-free (Bareiss) determinant; every division is exact.
pub fn determinant(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    let nvars = m.first().and_then(|r| r.first()).map(MPoly::nvars).unwrap_or(0);
    if n == 0 {
        return MPoly::one(nvars);
    }
    let mut negate = false;
    let mut prev = MPoly::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return MPoly::zero(nvars) };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.scale(&-Rational::one())
    } else {
        d
    }
}

fn format_terms(terms: impl Iterator<Item = (Rational, Vec<u32>)>, names: &[&str]) -> String {
    let mut out = String::new();
    for (c, e) in terms {
        if c.is_zero() {
            continue;
        }
        let mono: Vec<String> = e
            .iter()
            .zip(names)
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
            .collect();
        let abs = c.abs();
        let body = match (mono.is_empty(), abs.is_one()) {
            (true, _) => abs.to_string(),
            (false, true) => mono.join("*"),
            (false, false) => format!("{abs}*{}", mono.join("*")),
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let p = up(&[-1, 0, 1]); // z^2 - 1
        let q = up(&[1, 1]); // z + 1
        let (d, r) = p.div_rem(&q);
        assert_eq!(d, up(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(p.gcd(&up(&[1, 2, 1])), q);
        assert_eq!(up(&[0, 0, 1, 1]).square_free(), up(&[0, 1, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        let p = up(&[6, -6, 1]); // z^2 - 6z + 6, roots 3 +- sqrt 3
        assert_eq!(p.count_roots(&int(0), &int(10)), 2);
        assert_eq!(p.count_roots(&int(0), &int(2)), 1);
        let (lo, hi) = p.smallest_positive_root(&rat(1, 1_000_000_000_000)).unwrap();
        assert!(&hi - &lo <= rat(1, 1_000_000_000_000));
        // 3 - sqrt 3 in [lo, hi]  <=>  (3 - hi)^2 <= 3 <= (3 - lo)^2
        let three = int(3);
        assert!((&three - &hi) * (&three - &hi) <= three);
        assert!((&three - &lo) * (&three - &lo) >= three);
        assert!(up(&[1, 0, 1]).smallest_positive_root(&rat(1, 100)).is_none());
    }

    #[test]
    fn resultant_eliminates_a_variable() {
        // x - y = 0 and x^2 - 2 = 0 in variables (x, y): Res_x = y^2 - 2
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let f = x.sub(&y);
        let g = x.mul(&x).sub(&MPoly::constant(2, int(2)));
        let r = f.resultant(&g, 0).normalized(1, 0);
        assert_eq!(r.format(&["x", "y"]), "y^2 - 2");
    }

    #[test]
    fn exact_division() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let a = x.add(&y);
        let b = x.sub(&y);
        let p = a.mul(&b);
        assert_eq!(p.exact_div(&a), Some(b.clone()));
        assert_eq!(p.add(&MPoly::one(2)).exact_div(&a), None);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let c = |v: i64| MPoly::constant(1, int(v));
        let m = vec![vec![c(2), c(0), c(1)], vec![c(1), c(3), c(2)], vec![c(1), c(1), c(1)]];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(determinant(m).is_zero());
        let m = vec![vec![c(0), c(1)], vec![c(1), c(0)]];
        assert_eq!(determinant(m), c(-1));
    }
}
