//! Exact truncated power series.
//!
//! A series of order `N` knows its coefficients of degree `0..=N`; every
//! operation reports the order up to which its result is provably exact.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::poly::{MPoly, UPoly};
use crate::rational::{factorial_rat, from_biguint, int, parse_rational, Rational};

pub const DEFAULT_ORDER: usize = 12;

/// Coefficients beyond the fitted parameters that a guess must reproduce.
pub const GUESS_SPARE: usize = 4;
pub const GUESS_MAX_DEN_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Ordinary: the coefficient of `z^n` is `dim P(n)`.
    Ogf,
    /// Exponential: the coefficient of `z^n` is `dim P(n) / n!`.
    Egf,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Ogf => "ogf",
            Flavor::Egf => "egf",
        })
    }
}

impl FromStr for Flavor {
    type Err = SeriesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ogf" => Ok(Flavor::Ogf),
            "egf" => Ok(Flavor::Egf),
            other => Err(SeriesError::Parse(format!("unknown flavor '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("flavor mismatch: {0} vs {1}")]
    FlavorMismatch(Flavor, Flavor),
    #[error("composition needs an inner series without constant term")]
    NonzeroConstant,
    #[error("series has no compositional inverse (zero linear coefficient or nonzero constant)")]
    NotInvertible,
    #[error("series with zero constant term has no reciprocal")]
    NoReciprocal,
    #[error("truncation order {have} is below the required {needed}")]
    InsufficientOrder { needed: usize, have: usize },
    #[error("wrong number of series for the equation: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    flavor: Flavor,
}

impl PowerSeries {
    /// Coefficients `c_0..=c_N`; missing trailing ones are zero.
    pub fn new(flavor: Flavor, order: usize, coeffs: Vec<Rational>) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs, flavor }
    }

    pub fn zero(flavor: Flavor, order: usize) -> Self {
        Self::new(flavor, order, Vec::new())
    }

    pub fn constant(flavor: Flavor, order: usize, c: Rational) -> Self {
        Self::new(flavor, order, vec![c])
    }

    /// The series `z`.
    pub fn z(flavor: Flavor, order: usize) -> Self {
        Self::new(flavor, order, vec![Rational::zero(), Rational::one()])
    }

    pub fn from_poly(flavor: Flavor, order: usize, p: &UPoly) -> Self {
        let mut c = p.coeffs().to_vec();
        c.truncate(order + 1);
        Self::new(flavor, order, c)
    }

    /// The generating series of a dimension sequence indexed by arity.
    pub fn from_dims(flavor: Flavor, dims: &[BigUint]) -> Self {
        let order = dims.len().saturating_sub(1);
        let coeffs = dims
            .iter()
            .enumerate()
            .map(|(n, d)| match flavor {
                Flavor::Ogf => from_biguint(d),
                Flavor::Egf => from_biguint(d) / factorial_rat(n),
            })
            .collect();
        Self::new(flavor, order, coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    /// The dimensions encoded by the series, `None` where a coefficient is
    /// not a non-negative integer after conversion.
    pub fn dims(&self) -> Vec<Option<BigUint>> {
        self.convert(Flavor::Ogf)
            .coeffs
            .iter()
            .map(|c| if c.is_integer() && !c.is_negative() { c.to_integer().to_biguint() } else { None })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order.min(self.order()) + 1);
        Self { coeffs: c, flavor: self.flavor }
    }

    fn same_flavor(&self, o: &Self) -> Result<(), SeriesError> {
        if self.flavor == o.flavor {
            Ok(())
        } else {
            Err(SeriesError::FlavorMismatch(self.flavor, o.flavor))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.same_flavor(o)?;
        let n = self.order().min(o.order());
        Ok(Self::new(self.flavor, n, (0..=n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect()))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect(), flavor: self.flavor }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.same_flavor(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(self.flavor, n, out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.flavor, self.order(), Rational::one());
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// `1 / self`; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::NoReciprocal);
        }
        let inv = c0.recip();
        let n = self.order();
        let mut out: Vec<Rational> = vec![inv.clone()];
        for k in 1..=n {
            let s: Rational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-s * &inv);
        }
        Ok(Self::new(self.flavor, n, out))
    }

    /// `self(g)`; `g` must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        self.same_flavor(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::zero(self.flavor, n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul_unchecked(&g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Known to one degree less than the input.
    pub fn derive(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(self.flavor, 0).truncate(0);
        }
        let c = (1..=n).map(|k| &self.coeffs[k] * int(k as i64)).collect();
        Self::new(self.flavor, n - 1, c)
    }

    /// Antiderivative with zero constant term; known to one degree more.
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut c = vec![Rational::zero()];
        c.extend(self.coeffs.iter().enumerate().map(|(k, a)| a / int(k as i64 + 1)));
        Self::new(self.flavor, n + 1, c)
    }

    /// `C(f, g)(z) = ∫_0^z f'(w) g(w) dw`.
    pub fn c_operation(&self, g: &Self) -> Result<Self, SeriesError> {
        self.same_flavor(g)?;
        let n = self.order().min(g.order() + 1);
        if n == 0 {
            return Ok(Self::zero(self.flavor, 0));
        }
        let prod = self.derive().truncate(n - 1).mul_unchecked(&g.truncate(n - 1));
        Ok(prod.integrate())
    }

    /// The compositional inverse `g` with `self(g) = z`, to order
    /// `min(order, self.order())`, by the iteration `y <- y + (z - f(y)) / a`
    /// where `a = f'(0)`.
    pub fn lagrange_inverse(&self, order: usize) -> Result<Self, SeriesError> {
        let n = order.min(self.order());
        let a = self.coeff(1);
        if !self.coeffs[0].is_zero() || a.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let f = self.truncate(n);
        let inv_a = a.recip();
        let z = Self::z(self.flavor, n);
        let mut y = z.scale(&inv_a);
        // each round fixes at least one more coefficient
        for _ in 1..n {
            let err = z.sub(&f.compose(&y)?)?;
            if err.coeffs.iter().all(Zero::is_zero) {
                break;
            }
            y = y.add(&err.scale(&inv_a))?;
        }
        Ok(y)
    }

    /// Reinterprets the same dimensions under another flavor.
    pub fn convert(&self, target: Flavor) -> Self {
        let coeffs = match (self.flavor, target) {
            (a, b) if a == b => self.coeffs.clone(),
            (Flavor::Egf, Flavor::Ogf) => {
                self.coeffs.iter().enumerate().map(|(n, c)| c * factorial_rat(n)).collect()
            }
            _ => self.coeffs.iter().enumerate().map(|(n, c)| c / factorial_rat(n)).collect(),
        };
        Self { coeffs, flavor: target }
    }

    /// Rational function `P/Q` with `Q(0) = 1` reproducing every known
    /// coefficient, minimal in the denominator degree and then in the
    /// numerator degree, with at least [`GUESS_SPARE`] coefficients beyond
    /// the fitted parameters. Always a guess.
    pub fn guess_rational(&self) -> Option<RationalGuess> {
        let n = self.order();
        let s = |i: isize| if i < 0 { Rational::zero() } else { self.coeffs[i as usize].clone() };
        for d in 0..=GUESS_MAX_DEN_DEGREE {
            for p in 0..=n {
                let Some(spare) = (n - p.min(n)).checked_sub(d).filter(|sp| *sp >= GUESS_SPARE) else { break };
                // s_k + sum_j q_j s_{k-j} = 0 for k in p+1..=n
                let rows: Vec<Vec<Rational>> =
                    (p + 1..=n).map(|k| (1..=d).map(|j| s(k as isize - j as isize)).collect()).collect();
                let rhs: Vec<Rational> = (p + 1..=n).map(|k| -s(k as isize)).collect();
                let Some(q) = linalg::solve(&rows, &rhs, d) else { continue };
                let mut den = vec![Rational::one()];
                den.extend(q);
                let den = UPoly::new(den);
                let num = UPoly::new(
                    (0..=p).map(|k| (0..=d.min(k)).map(|j| den.coeff(j) * s((k - j) as isize)).sum()).collect(),
                );
                let guess = RationalGuess { num, den, spare };
                if guess.expand(self.flavor, n).coeffs == self.coeffs {
                    return Some(guess);
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// The dimensions of the symmetrization of a non-symmetric operad:
/// `dims[n] * n!`.
pub fn symmetrize_dims(dims: &[BigUint]) -> Vec<BigUint> {
    let mut f = BigUint::one();
    dims.iter()
        .enumerate()
        .map(|(n, d)| {
            if n > 0 {
                f *= BigUint::from(n);
            }
            d * &f
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGuess {
    pub num: UPoly,
    pub den: UPoly,
    /// Known coefficients matched beyond the number of fitted parameters.
    pub spare: usize,
}

impl RationalGuess {
    pub fn expand(&self, flavor: Flavor, order: usize) -> PowerSeries {
        let num = PowerSeries::from_poly(flavor, order, &self.num);
        let den = PowerSeries::from_poly(flavor, order, &self.den);
        num.mul_unchecked(&den.reciprocal().expect("denominator has constant term 1"))
    }
}

impl fmt::Display for RationalGuess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num.format("z"), self.den.format("z"))
    }
}

/// Evaluates a polynomial at series arguments, one per variable.
pub fn eval_at_series(p: &MPoly, args: &[PowerSeries]) -> Result<PowerSeries, SeriesError> {
    if args.len() != p.nvars() {
        return Err(SeriesError::Arity { expected: p.nvars(), got: args.len() });
    }
    let first = args.first().ok_or(SeriesError::Arity { expected: 1, got: 0 })?;
    for a in args {
        first.same_flavor(a)?;
    }
    let n = args.iter().map(PowerSeries::order).min().unwrap_or(0);
    let args: Vec<PowerSeries> = args.iter().map(|a| a.truncate(n)).collect();
    let mut powers: Vec<Vec<PowerSeries>> = args.iter().map(|a| vec![a.pow(0)]).collect();
    let mut acc = PowerSeries::zero(first.flavor, n);
    for (e, c) in p.terms() {
        let mut t = PowerSeries::constant(first.flavor, n, c.clone());
        for (i, &k) in e.iter().enumerate() {
            while powers[i].len() <= k as usize {
                let next = powers[i].last().expect("nonempty").mul_unchecked(&args[i]);
                powers[i].push(next);
            }
            if k > 0 {
                t = t.mul_unchecked(&powers[i][k as usize]);
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// `Q(z, y) = 0` with `Q` in the variables `[z, y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicEquation {
    pub poly: MPoly,
}

impl AlgebraicEquation {
    pub fn new(poly: MPoly) -> Self {
        assert_eq!(poly.nvars(), 2, "an algebraic equation has variables z and y");
        Self { poly }
    }

    /// Smallest truncation order accepted by [`verify_algebraic`]: the
    /// number of monomials `z^i y^j` allowed by the degrees of `Q`, plus
    /// three, so that any check leaves slack over a fitted equation.
    pub fn min_order(&self) -> usize {
        let dz = self.poly.degree_in(0) as usize;
        let dy = self.poly.degree_in(1) as usize;
        (dy + 1) * (dz + 1) + 3
    }
}

impl fmt::Display for AlgebraicEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.poly.format(&["z", "y"]))
    }
}

/// A differential polynomial in `[z, y, y', .., y^(k)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ODEquation {
    pub poly: MPoly,
}

impl ODEquation {
    pub fn new(poly: MPoly) -> Self {
        assert!(poly.nvars() >= 2, "an ODE has variables z, y and derivatives");
        Self { poly }
    }

    /// Highest derivative present.
    pub fn derivative_order(&self) -> usize {
        self.poly.nvars() - 2
    }

    /// Smallest truncation order accepted by [`verify_ode`]: the checked
    /// order (the series order minus the derivative order) must exceed the
    /// number of terms by three.
    pub fn min_order(&self) -> usize {
        self.poly.len() + 3 + self.derivative_order()
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut v = vec!["z".to_string(), "y".to_string()];
        v.extend((1..=self.derivative_order()).map(|k| format!("y{}", "'".repeat(k))));
        v
    }
}

impl fmt::Display for ODEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{} = 0", self.poly.format(&refs))
    }
}

/// Whether `Q(z, S)` vanishes up to the order of `S`.
pub fn verify_algebraic(q: &AlgebraicEquation, s: &PowerSeries) -> Result<bool, SeriesError> {
    let needed = q.min_order();
    if s.order() < needed {
        return Err(SeriesError::InsufficientOrder { needed, have: s.order() });
    }
    let z = PowerSeries::z(s.flavor(), s.order());
    Ok(eval_at_series(&q.poly, &[z, s.clone()])?.is_zero())
}

/// Whether `D(z, S, S', ..)` vanishes up to the order the derivatives of
/// `S` are known.
pub fn verify_ode(d: &ODEquation, s: &PowerSeries) -> Result<bool, SeriesError> {
    let needed = d.min_order();
    if s.order() < needed {
        return Err(SeriesError::InsufficientOrder { needed, have: s.order() });
    }
    let mut args = vec![PowerSeries::z(s.flavor(), s.order()), s.clone()];
    for _ in 0..d.derivative_order() {
        let next = args.last().expect("nonempty").derive();
        args.push(next);
    }
    Ok(eval_at_series(&d.poly, &args)?.is_zero())
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {};", self.flavor, self.order())?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

const MAX_PARSE_ORDER: usize = 4096;

impl FromStr for PowerSeries {
    type Err = SeriesError;

    /// Reads `flavor N; c0 c1 .. cN`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let perr = |m: &str| SeriesError::Parse(m.to_string());
        let (head, body) = s.split_once(';').ok_or_else(|| perr("missing ';'"))?;
        let mut head = head.split_whitespace();
        let flavor: Flavor = head.next().ok_or_else(|| perr("missing flavor"))?.parse()?;
        let order: usize = head.next().and_then(|t| t.parse().ok()).ok_or_else(|| perr("missing or bad order"))?;
        if head.next().is_some() {
            return Err(perr("unexpected text before ';'"));
        }
        if order > MAX_PARSE_ORDER {
            return Err(perr("order too large"));
        }
        let coeffs: Vec<Rational> = body
            .split_whitespace()
            .map(|t| parse_rational(t).ok_or_else(|| SeriesError::Parse(format!("bad coefficient '{t}'"))))
            .collect::<Result<_, _>>()?;
        if coeffs.len() != order + 1 {
            return Err(SeriesError::Parse(format!("expected {} coefficients, found {}", order + 1, coeffs.len())));
        }
        Ok(Self { coeffs, flavor })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ogf(c: &[Rational], n: usize) -> PowerSeries {
        PowerSeries::new(Flavor::Ogf, n, c.to_vec())
    }

    /// z / (1 - a z) to order n.
    fn geometric(a: i64, n: usize) -> PowerSeries {
        let c = (0..=n).map(|k| if k == 0 { int(0) } else { int(a.pow(k as u32 - 1)) }).collect();
        PowerSeries::new(Flavor::Ogf, n, c)
    }

    fn catalan(n: usize) -> Vec<Rational> {
        let mut c = vec![int(1)];
        for k in 1..=n {
            let next: Rational = (0..k).map(|i| &c[i] * &c[k - 1 - i]).sum();
            c.push(next);
        }
        c
    }

    #[test]
    fn composition_of_geometric_series() {
        let f = geometric(1, 10);
        assert_eq!(f.compose(&f).unwrap(), geometric(2, 10));
        let bad = ogf(&[int(1), int(1)], 10);
        assert_eq!(f.compose(&bad), Err(SeriesError::NonzeroConstant));
        let egf = f.convert(Flavor::Egf);
        assert!(matches!(f.add(&egf), Err(SeriesError::FlavorMismatch(..))));
    }

    #[test]
    fn calculus() {
        let z2 = ogf(&[int(0), int(0), int(1)], 5);
        assert_eq!(z2.derive(), ogf(&[int(0), int(2)], 4));
        let one = ogf(&[int(1)], 5);
        assert_eq!(one.integrate(), ogf(&[int(0), int(1)], 6));
        let z = PowerSeries::z(Flavor::Egf, 8);
        assert_eq!(z.c_operation(&z).unwrap().coeffs()[..4], [int(0), int(0), rat(1, 2), int(0)]);
        let zz = PowerSeries::new(Flavor::Egf, 8, vec![int(0), int(0), int(1)]);
        assert_eq!(zz.c_operation(&z).unwrap().coeff(3), rat(2, 3));
        assert_eq!(zz.c_operation(&z).unwrap().order(), 8);
    }

    #[test]
    fn catalan_from_inverse() {
        let f = ogf(&[int(0), int(1), int(-1)], 12);
        let g = f.lagrange_inverse(12).unwrap();
        assert_eq!(&g.coeffs()[1..], &catalan(11)[..]);
        assert_eq!(f.compose(&g).unwrap(), PowerSeries::z(Flavor::Ogf, 12));
        assert_eq!(g.compose(&f).unwrap(), PowerSeries::z(Flavor::Ogf, 12));
        let t = PowerSeries::z(Flavor::Ogf, 6);
        assert_eq!(t.lagrange_inverse(6).unwrap(), t);
        assert_eq!(ogf(&[int(0), int(0), int(1)], 6).lagrange_inverse(6), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn cubic_inverse_by_direct_iteration() {
        let f = ogf(&[int(0), int(1), int(-1), rat(1, 6)], 10);
        let g = f.lagrange_inverse(10).unwrap();
        // oracle: iterate y = z + y^2 - y^3/6 on plain vectors
        let mut y = vec![Rational::zero(); 11];
        for _ in 0..11 {
            let sq: Vec<Rational> = (0..11).map(|k| (0..=k).map(|i| &y[i] * &y[k - i]).sum()).collect();
            let cu: Vec<Rational> = (0..11).map(|k| (0..=k).map(|i| &sq[i] * &y[k - i]).sum()).collect();
            y = (0..11).map(|k| if k == 1 { int(1) } else { int(0) } + &sq[k] - &cu[k] / int(6)).collect();
        }
        assert_eq!(g.coeffs(), &y[..]);
        assert_eq!(g.coeffs()[..5], [int(0), int(1), int(1), rat(11, 6), rat(25, 6)]);
    }

    #[test]
    fn scaled_linear_term() {
        let f = ogf(&[int(0), int(2), int(3)], 8);
        let g = f.lagrange_inverse(8).unwrap();
        assert_eq!(f.compose(&g).unwrap(), PowerSeries::z(Flavor::Ogf, 8));
    }

    #[test]
    fn guesses() {
        let g = geometric(1, 12).guess_rational().unwrap();
        assert_eq!(g.to_string(), "(z) / (-z + 1)");
        assert!(g.spare >= GUESS_SPARE);
        assert_eq!(geometric(2, 12).guess_rational().unwrap().to_string(), "(z) / (-2*z + 1)");
        let cat = ogf(&catalan(12), 12);
        assert_eq!(cat.guess_rational(), None);
        // a polynomial is found with denominator 1
        let p = ogf(&[int(1), int(2)], 12);
        assert_eq!(p.guess_rational().unwrap().to_string(), "(2*z + 1) / (1)");
        // too few coefficients to leave any spare: no guess
        assert_eq!(geometric(1, 5).guess_rational(), None);
    }

    #[test]
    fn flavors_and_symmetrization() {
        let e = PowerSeries::new(Flavor::Egf, 3, vec![int(0), int(1), int(1), int(2)]);
        let dims: Vec<_> = e.dims().into_iter().map(Option::unwrap).collect();
        assert_eq!(dims, [0u32, 1, 2, 12].map(BigUint::from));
        assert_eq!(e.convert(Flavor::Ogf).convert(Flavor::Egf), e);
        let ones = vec![BigUint::from(0u32), 1u32.into(), 1u32.into(), 1u32.into(), 1u32.into()];
        assert_eq!(symmetrize_dims(&ones), [0u32, 1, 2, 6, 24].map(BigUint::from));
        assert_eq!(PowerSeries::from_dims(Flavor::Egf, &dims), e);
    }

    #[test]
    fn print_and_parse() {
        let s = PowerSeries::new(Flavor::Egf, 4, vec![int(0), int(1), rat(-1, 2), int(0), rat(7, 3)]);
        assert_eq!(s.to_string(), "egf 4; 0 1 -1/2 0 7/3");
        assert_eq!(s.to_string().parse::<PowerSeries>().unwrap(), s);
        assert!("egf 4; 0 1".parse::<PowerSeries>().is_err());
        assert!("xgf 1; 0 1".parse::<PowerSeries>().is_err());
        assert!("ogf 1 0 1".parse::<PowerSeries>().is_err());
        assert!("ogf 1; 0 1/0".parse::<PowerSeries>().is_err());
    }

    #[test]
    fn verification() {
        let z = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let q = AlgebraicEquation::new(y.sub(&z));
        let z2 = ogf(&[int(0), int(0), int(1)], 12);
        assert_eq!(verify_algebraic(&q, &z2), Ok(false));
        assert_eq!(verify_algebraic(&q, &PowerSeries::z(Flavor::Ogf, 12)), Ok(true));
        assert_eq!(
            verify_algebraic(&q, &z2.truncate(3)),
            Err(SeriesError::InsufficientOrder { needed: 7, have: 3 })
        );
        // y' = y with y = e^z - 1 + 1, i.e. D = y' - y on exp
        let exp = PowerSeries::new(Flavor::Egf, 12, (0..=12).map(|n| int(1) / factorial_rat(n)).collect());
        let d = ODEquation::new(MPoly::var(3, 2).sub(&MPoly::var(3, 1)));
        assert_eq!(verify_ode(&d, &exp), Ok(true));
        assert_eq!(d.to_string(), "y' - y = 0");
    }
}
