//! Lower and upper bounds on dimensions.
//!
//! The lower bound inverts `f(t) = t - X(t) + R(t)` built from the
//! generating series of generators and relations; it is valid when `t/f(t)`
//! has nonnegative coefficients. The upper bounds are the free operad and
//! the monomial operad on the leading terms of a truncated Gröbner basis.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumeration::{dims_of_quotient, DimTag, DimTable, EnumerationError};
use crate::groebner::GroebnerConfig;
use crate::linalg;
use crate::monomials::{divides, Alphabet, Mode, Tree};
use crate::poly::UPoly;
use crate::presentation::Presentation;
use crate::rational::{factorial, factorial_rat, from_biguint, int, rat, to_f64, Rational};
use crate::series::{Flavor, PowerSeries, SeriesError};

/// Width of certified root brackets.
pub fn root_width() -> Rational {
    rat(1, 1_000_000_000_000)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundsError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("need at least {needed} dimensions, got {got}")]
    TooFewDims { needed: usize, got: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Generating series of the generators `X` and relations `R`, as
/// polynomials with nonnegative coefficients and no terms below degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsInput {
    pub flavor: Flavor,
    pub x: UPoly,
    pub r: UPoly,
}

impl GsInput {
    pub fn new(flavor: Flavor, x: UPoly, r: UPoly) -> Result<Self, BoundsError> {
        for (name, p) in [("X", &x), ("R", &r)] {
            if p.coeffs().iter().any(Signed::is_negative) {
                return Err(BoundsError::BadInput(format!("{name} has a negative coefficient")));
            }
            if !p.coeff(0).is_zero() || !p.coeff(1).is_zero() {
                return Err(BoundsError::BadInput(format!("{name} has terms below degree 2")));
            }
        }
        Ok(Self { flavor, x, r })
    }

    /// `X` counts generators by arity. `R` counts, per arity, the rank of
    /// the relations; for monomial input, relations divisible by another
    /// relation are not minimal and are skipped. Minimality of general
    /// relations is assumed, not checked. Shuffle input gives exponential
    /// series (each shuffle generator or relation spans one dimension of
    /// the symmetric module), planar input ordinary series.
    pub fn from_presentation(p: &Presentation) -> Self {
        let flavor = match p.mode() {
            Mode::Planar => Flavor::Ogf,
            Mode::Shuffle => Flavor::Egf,
        };
        let weight = |a: usize| match flavor {
            Flavor::Ogf => Rational::one(),
            Flavor::Egf => factorial_rat(a).recip(),
        };
        let alphabet = p.alphabet();
        let mut x = vec![Rational::zero(); alphabet.max_arity() + 1];
        for g in alphabet.ids() {
            x[alphabet.arity(g)] += weight(alphabet.arity(g));
        }
        let mut r = vec![Rational::zero(); p.max_relation_arity() + 1];
        for (arity, rank) in relation_ranks(p) {
            r[arity] += weight(arity) * int(rank as i64);
        }
        Self { flavor, x: UPoly::new(x), r: UPoly::new(r) }
    }

    /// `f(t) = t - X(t) + R(t)`.
    pub fn f(&self) -> UPoly {
        UPoly::x().sub(&self.x).add(&self.r)
    }

    /// `f(t) / t`.
    pub fn phi(&self) -> UPoly {
        self.f().div_rem(&UPoly::x()).0
    }
}

fn relation_ranks(p: &Presentation) -> Vec<(usize, usize)> {
    let mut by_arity: std::collections::BTreeMap<usize, Vec<&crate::element::OperadElement>> = Default::default();
    for r in p.relations() {
        if let Some(a) = r.arity() {
            by_arity.entry(a).or_default().push(r);
        }
    }
    if p.is_monomial() {
        let ms = p.relation_monomials();
        let minimal = |m: &Tree| !ms.iter().any(|q| q != m && divides(q, m));
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for m in ms.iter().filter(|m| minimal(m)) {
            *counts.entry(m.arity()).or_default() += 1;
        }
        return counts.into_iter().collect();
    }
    by_arity
        .into_iter()
        .map(|(a, rels)| {
            let mons: Vec<&Tree> = {
                let mut v: Vec<&Tree> = rels.iter().flat_map(|r| r.monomials()).collect();
                v.sort();
                v.dedup();
                v
            };
            let rows: Vec<Vec<Rational>> = rels.iter().map(|r| mons.iter().map(|m| r.coeff(m)).collect()).collect();
            let nullity = linalg::kernel(&transpose(&rows, mons.len()), rows.len()).len();
            (a, rows.len() - nullity)
        })
        .collect()
}

fn transpose(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsBound {
    /// `f^{[-1]}` to the requested order.
    pub series: PowerSeries,
    /// `t / f(t)` to the same order.
    pub t_over_f: PowerSeries,
    /// Whether `t / f(t)` has nonnegative coefficients up to that order.
    pub hypothesis: bool,
}

impl GsBound {
    /// Per-arity lower bounds on dimensions, from arity 0.
    pub fn dims(&self) -> Vec<Rational> {
        self.series.convert(Flavor::Ogf).coeffs().to_vec()
    }
}

/// The inverse of `f` by the coefficient formula
/// `[z^n] f^{[-1]} = (1/n) [t^{n-1}] (t/f(t))^n`, whose terms are visibly
/// nonnegative under the hypothesis.
pub fn gs_lower_bound(input: &GsInput, order: usize) -> Result<GsBound, BoundsError> {
    let phi = PowerSeries::from_poly(input.flavor, order, &input.phi());
    if phi.coeff(0) != Rational::one() {
        return Err(BoundsError::BadInput("f'(0) must be 1".into()));
    }
    let t_over_f = phi.reciprocal()?;
    let hypothesis = t_over_f.coeffs().iter().all(|c| !c.is_negative());
    let mut coeffs = vec![Rational::zero()];
    let mut power = PowerSeries::constant(input.flavor, order, Rational::one());
    for n in 1..=order {
        power = power.mul(&t_over_f)?;
        coeffs.push(power.coeff(n - 1) / int(n as i64));
    }
    Ok(GsBound { series: PowerSeries::new(input.flavor, order, coeffs), t_over_f, hypothesis })
}

/// Dimensions of the free operad, from arity 0: the free case of the
/// inversion, where the bound is an equality.
pub fn free_dims(alphabet: &Alphabet, max_arity: usize) -> Vec<BigUint> {
    let p = Presentation::new(alphabet.clone(), Vec::new());
    let input = GsInput::from_presentation(&p);
    let f = PowerSeries::from_poly(input.flavor, max_arity, &input.f());
    let inv = f.lagrange_inverse(max_arity).expect("f'(0) = 1");
    inv.dims().into_iter().map(|d| d.expect("free dimensions are integers")).collect()
}

/// `p - sqrt(t)` with `t >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub p: Rational,
    pub t: Rational,
}

impl Surd {
    /// Whether `x < self`, decided exactly.
    pub fn exceeds(&self, x: &Rational) -> bool {
        let d = &self.p - x;
        d.is_positive() && &d * &d > self.t
    }

    /// Whether `self < x`, decided exactly.
    pub fn below(&self, x: &Rational) -> bool {
        let d = &self.p - x;
        if d.is_positive() {
            &d * &d < self.t
        } else {
            !(d.is_zero() && self.t.is_zero())
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) - to_f64(&self.t).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - sqrt({})", self.p, self.t)
    }
}

/// A certified bracket `[lo, hi]` around the smallest positive root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: Rational,
    pub hi: Rational,
    /// Closed form, when the root polynomial is quadratic (or linear).
    pub exact: Option<Surd>,
}

impl RootBracket {
    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

/// One row of the binary-generated bounds, for arity `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRow {
    pub n: usize,
    /// `(2n)!/(n-1)! z0^{-n}` as the certified interval `[at hi, at lo]`.
    pub stated_lower: (Rational, Rational),
    /// `(2n)!/n! z0^{-n}`, the bound the inversion argument yields.
    pub corrected_lower: (Rational, Rational),
    /// `(2n)!/n! (c/2)^n`.
    pub upper: Rational,
    /// `(n+1)!` times the coefficient of `f^{[-1]}`.
    pub inverse: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryReport {
    pub c: u64,
    pub r: UPoly,
    pub phi: UPoly,
    /// `d <= 3c^2/8`, present when the relations are all ternary.
    pub quadratic_condition: Option<bool>,
    pub z0: RootBracket,
    pub rows: Vec<BinaryRow>,
}

/// Bounds for an operad with `c` binary generators and relation series
/// `R` (exponential), for arities `2..=order`.
pub fn binary_bounds(c: u64, r: &UPoly, order: usize) -> Result<BinaryReport, BoundsError> {
    if c == 0 {
        return Err(BoundsError::BadInput("no binary generators".into()));
    }
    let cr = Rational::from_integer(c.into());
    let half_c = &cr / int(2);
    let x = UPoly::new(vec![Rational::zero(), Rational::zero(), half_c.clone()]);
    let input = GsInput::new(Flavor::Egf, x, r.clone())?;
    let phi = input.phi();
    let quadratic = r.coeffs().iter().enumerate().all(|(i, a)| i == 3 || a.is_zero());
    let mut quadratic_condition = None;
    let mut exact = None;
    if quadratic {
        let d = r.coeff(3) * int(6);
        let ok = d <= int(3) * &cr * &cr / int(8);
        quadratic_condition = Some(ok);
        if !ok {
            return Err(BoundsError::Hypothesis(format!("d = {d} exceeds 3c^2/8 = {}", int(3) * &cr * &cr / int(8))));
        }
        exact = Some(if d.is_zero() {
            Surd { p: half_c.recip(), t: Rational::zero() }
        } else {
            // 3 (c/2 - sqrt(c^2/4 - 2d/3)) / d
            let q = int(3) / &d;
            Surd { p: &q * &half_c, t: &q * &q * (&half_c * &half_c - int(2) * &d / int(3)) }
        });
    }
    let (lo, hi) = phi
        .smallest_positive_root(&root_width())
        .ok_or_else(|| BoundsError::Hypothesis("phi has no positive real root".into()))?;
    let gs = gs_lower_bound(&input, order)?;
    let dims = gs.dims();
    let rows = (1..order)
        .map(|n| {
            let pow_hi = hi.recip().pow(n as i32);
            let pow_lo = lo.recip().pow(n as i32);
            let two_n = factorial_rat(2 * n);
            let stated = &two_n / factorial_rat(n - 1);
            let corrected = &two_n / factorial_rat(n);
            BinaryRow {
                n,
                stated_lower: (&stated * &pow_hi, &stated * &pow_lo),
                corrected_lower: (&corrected * &pow_hi, &corrected * &pow_lo),
                upper: &corrected * half_c.pow(n as i32),
                inverse: dims[n + 1].clone(),
            }
        })
        .collect();
    Ok(BinaryReport { c, r: r.clone(), phi, quadratic_condition, z0: RootBracket { lo, hi, exact }, rows })
}

/// Upper bounds from a truncated Gröbner basis: dimensions of the monomial
/// operad on its leading terms, which can only exceed the true ones.
pub fn partial_gb_bound(
    p: &Presentation,
    n_max: usize,
    config: &GroebnerConfig,
    budget: u64,
) -> Result<DimTable, EnumerationError> {
    dims_of_quotient(p, n_max, config, budget).map(|(t, _)| t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub arity: usize,
    pub gs_lower: Rational,
    pub oracle: Option<BigUint>,
    pub partial_upper: Option<(BigUint, DimTag)>,
    pub free_upper: BigUint,
    pub flags: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTable {
    pub hypothesis: bool,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("arity\tgs_lower\toracle\tpartial_gb_upper\tfree_upper\tflags\n");
        for r in &self.rows {
            let oracle = r.oracle.as_ref().map_or("-".to_string(), ToString::to_string);
            let partial = r.partial_upper.as_ref().map_or("-".to_string(), |(d, _)| d.to_string());
            let flags = if r.flags.is_empty() { "-".to_string() } else { r.flags.join(",") };
            out.push_str(&format!("{}\t{}\t{oracle}\t{partial}\t{}\t{flags}\n", r.arity, r.gs_lower, r.free_upper));
        }
        out
    }
}

/// All bounds side by side for arities `1..=n_max`. Counting that runs out
/// of budget leaves the affected cells empty.
pub fn bound_table(p: &Presentation, n_max: usize, config: &GroebnerConfig, budget: u64) -> Result<BoundTable, BoundsError> {
    let input = GsInput::from_presentation(p);
    let gs = gs_lower_bound(&input, n_max)?;
    let lower = gs.dims();
    let free = free_dims(p.alphabet(), n_max);
    let partial = match partial_gb_bound(p, n_max, config, budget) {
        Ok(t) => Some(t),
        Err(EnumerationError::Budget { completed, .. }) => Some(completed),
        Err(EnumerationError::Groebner(e)) => match *e {
            crate::groebner::GroebnerError::Budget { .. } => None,
            other => return Err(BoundsError::BadInput(other.to_string())),
        },
        Err(e) => return Err(BoundsError::BadInput(e.to_string())),
    };
    let rows = (1..=n_max)
        .map(|n| {
            let entry = partial.as_ref().and_then(|t| t.entries.iter().find(|e| e.arity == n));
            let partial_upper = entry.map(|e| (e.dim.clone(), e.tag));
            let certified = entry.filter(|e| e.tag != DimTag::UpperBound).map(|e| e.dim.clone());
            let mut flags = Vec::new();
            if !gs.hypothesis {
                flags.push("gs-hypothesis-fails");
            }
            let pinched = gs.hypothesis && entry.is_some_and(|e| from_biguint(&e.dim) == lower[n]);
            if pinched {
                flags.push("pinched");
            }
            if let Some(e) = entry {
                flags.push(match e.tag {
                    DimTag::Exact => "exact",
                    DimTag::CertifiedBelowCap => "certified-below-cap",
                    DimTag::UpperBound => "upper-bound",
                });
            }
            let oracle = certified.or_else(|| if pinched { entry.map(|e| e.dim.clone()) } else { None });
            if gs.hypothesis && oracle.as_ref().is_some_and(|d| from_biguint(d) < lower[n]) {
                flags.push("lower-exceeds-oracle");
            }
            BoundRow { arity: n, gs_lower: lower[n].clone(), oracle, partial_upper, free_upper: free[n].clone(), flags }
        })
        .collect();
    Ok(BoundTable { hypothesis: gs.hypothesis, rows })
}

/// Growth estimates for a dimension sequence (arities `1..`). Exact
/// exponents are only given when a rational generating function fits the
/// data, and are labelled as coming from a guess; everything else is an
/// estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub lines: Vec<String>,
    /// `1 / (smallest positive pole)` of a guessed rational OGF, as a
    /// bracket; equal ends when exact.
    pub exponent: Option<(Rational, Rational)>,
    /// The same for the series of `dim / n!`.
    pub normalized_exponent: Option<(Rational, Rational)>,
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

fn pole_exponent(s: &PowerSeries) -> Option<(Rational, Rational, usize)> {
    let g = s.guess_rational()?;
    let common = g.num.gcd(&g.den);
    let den = g.den.div_rem(&common).0;
    if den.degree().unwrap_or(0) == 0 {
        return Some((Rational::zero(), Rational::zero(), g.spare));
    }
    if den.degree() == Some(1) {
        let e = -den.coeff(1) / den.coeff(0);
        return Some((e.clone(), e, g.spare));
    }
    let (lo, hi) = den.smallest_positive_root(&root_width())?;
    Some((hi.recip(), lo.recip(), g.spare))
}

fn describe(label: &str, e: &Option<(Rational, Rational)>, spare: Option<usize>) -> String {
    match (e, spare) {
        (Some((a, b)), Some(sp)) if a == b => {
            format!("{label}: exact {a} (pole of a guessed rational function, {sp} spare coefficients)")
        }
        (Some((a, b)), Some(sp)) => format!(
            "{label}: in [{}, {}] (pole of a guessed rational function, {sp} spare coefficients)",
            fmt_f(to_f64(a)),
            fmt_f(to_f64(b))
        ),
        _ => format!("{label}: no rational guess"),
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.9}")
}

pub fn growth_report(dims: &[BigUint], flavor: Flavor) -> Result<GrowthReport, BoundsError> {
    if dims.len() < 4 {
        return Err(BoundsError::TooFewDims { needed: 4, got: dims.len() });
    }
    let with_zero: Vec<BigUint> = std::iter::once(BigUint::zero()).chain(dims.iter().cloned()).collect();
    let ogf = PowerSeries::from_dims(Flavor::Ogf, &with_zero);
    let egf = PowerSeries::from_dims(Flavor::Egf, &with_zero).convert(Flavor::Ogf);
    let mut lines = Vec::new();
    let e1 = pole_exponent(&ogf);
    let exponent = e1.as_ref().map(|(a, b, _)| (a.clone(), b.clone()));
    lines.push(describe("exponent of dim_n", &exponent, e1.as_ref().map(|x| x.2)));
    let mut normalized_exponent = None;
    if flavor == Flavor::Egf {
        let e2 = pole_exponent(&egf);
        normalized_exponent = e2.as_ref().map(|(a, b, _)| (a.clone(), b.clone()));
        lines.push(describe("exponent of dim_n/n!", &normalized_exponent, e2.as_ref().map(|x| x.2)));
    }
    for (i, d) in dims.iter().enumerate() {
        let n = i + 1;
        let v = d.to_f64().unwrap_or(f64::INFINITY);
        let root = v.powf(1.0 / n as f64);
        let mut line = format!("estimate n={n} dim^(1/n)={}", fmt_f(root));
        if flavor == Flavor::Egf {
            let q = to_f64(&(from_biguint(d) / from_biguint(&factorial(n))));
            line.push_str(&format!(" (dim/n!)^(1/n)={}", fmt_f(q.powf(1.0 / n as f64))));
        }
        lines.push(line);
    }
    lines.push("note: finitely many terms never determine the growth rate; estimates are not certified".into());
    Ok(GrowthReport { lines, exponent, normalized_exponent })
}
