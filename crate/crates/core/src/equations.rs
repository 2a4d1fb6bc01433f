//! Generating-function equations for monomial operads.
//!
//! Every normal monomial is classified by its *stamp*: its truncation to
//! depth `D = L - 1`, where `L` is the largest relation depth. A monomial
//! `g(t_1, .., t_k)` is normal iff its children are normal and no relation
//! occurs at its root; the latter is decided by `g(stamp(t_1), ..)` because
//! relations are at most `L` deep. This yields one equation per stamp:
//!
//! * planar: `y_s = Σ y_{s_1} ⋯ y_{s_k}` (ordinary series);
//! * shuffle, shuffle-regular relations: `y_s = Σ C(y_{s_1}, C(y_{s_2}, ..))`
//!   (exponential series), since children are ordered by minimal label;
//! * symmetric-regular relations: the C-terms over all orderings of a
//!   multiset of stamp classes add up to `∏ Y / ∏ mult!`, a polynomial.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::monomials::{
    occurrence_at, replanarizations, shuffle_regularity_witness, symmetric_regularity_witness, Alphabet, GenId,
    Mode, Tree,
};
use crate::poly::MPoly;
use crate::presentation::Presentation;
use crate::rational::{factorial_rat, Rational};
use crate::series::{
    eval_at_series, verify_algebraic, AlgebraicEquation, Flavor, PowerSeries, SeriesError,
};
use crate::linalg;

/// Largest number of unknowns [`eliminate`] accepts by default.
pub const DEFAULT_ELIMINATION_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquationError {
    #[error("presentation is not monomial")]
    NotMonomial,
    #[error("expected a {expected} presentation")]
    WrongMode { expected: Mode },
    #[error("relations are not shuffle regular: {member} is present but {missing} is not")]
    NotShuffleRegular { member: String, missing: String },
    #[error("relations are not symmetric regular: {member} is present but {missing} is not")]
    NotSymmetricRegular { member: String, missing: String },
    #[error("C-terms do not pair up: {0}")]
    Pairing(String),
    #[error("operation needs a {0} system")]
    WrongKind(&'static str),
    #[error("{unknowns} unknowns exceed the elimination cap {cap}")]
    TooManyUnknowns { unknowns: usize, cap: usize },
    #[error("system is not well founded: {0}")]
    NotWellFounded(String),
    #[error("elimination produced the zero polynomial")]
    Degenerate,
    #[error("no factor of the eliminant annihilates the series to order {order}")]
    NoAnnihilator { order: usize },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A term `C(y_a, C(y_b, .. y_k))` of an integral equation, or `z`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CTerm {
    Z,
    Nest(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rhs {
    /// Polynomial in `[z, y_0, .., y_{N-1}]`.
    Poly(MPoly),
    Integral(Vec<(Rational, CTerm)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub name: String,
    /// The stamps (planar shapes) this unknown counts.
    pub stamps: Vec<Tree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    pub flavor: Flavor,
    /// Planar alphabet of the stamps.
    pub alphabet: Alphabet,
    pub unknowns: Vec<Unknown>,
    pub rhs: Vec<Rhs>,
    /// The generating series of the operad, linear in `[z, y_0, ..]`.
    pub total: MPoly,
}

impl EquationSystem {
    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.rhs.iter().all(|r| matches!(r, Rhs::Poly(_)))
    }

    fn var_names(&self) -> Vec<&str> {
        std::iter::once("z").chain(self.unknowns.iter().map(|u| u.name.as_str())).collect()
    }

    pub fn stamp_names(&self) -> Vec<String> {
        self.unknowns
            .iter()
            .map(|u| u.stamps.iter().map(|s| format_stamp(&self.alphabet, s)).collect::<Vec<_>>().join(", "))
            .collect()
    }

    /// Total degree of each polynomial right-hand side.
    pub fn degrees(&self) -> Vec<u32> {
        self.rhs
            .iter()
            .map(|r| match r {
                Rhs::Poly(p) => p.total_degree(),
                Rhs::Integral(_) => 0,
            })
            .collect()
    }

    /// The bound `∏ max(d_i, 1)^2` on the degree of the eliminant.
    pub fn degree_bound(&self) -> u64 {
        self.degrees().iter().map(|&d| u64::from(d.max(1)).pow(2)).product()
    }

    /// Coefficients with a common denominator cleared: `k * y_i = <integer
    /// polynomial>`, one line per unknown.
    pub fn integer_form(&self) -> Vec<String> {
        let names = self.var_names();
        self.rhs
            .iter()
            .zip(&self.unknowns)
            .map(|(r, u)| match r {
                Rhs::Poly(p) => {
                    let den = crate::rational::lcm_of_denominators(p.terms().map(|(_, c)| c));
                    let k = Rational::from_integer(den);
                    let lhs = if k.is_one() { u.name.clone() } else { format!("{k}*{}", u.name) };
                    format!("{lhs} = {}", p.scale(&k).format(&names))
                }
                Rhs::Integral(_) => format!("{} = {}", u.name, self.format_rhs(r)),
            })
            .collect()
    }

    fn format_rhs(&self, r: &Rhs) -> String {
        let names = self.var_names();
        match r {
            Rhs::Poly(p) => p.format(&names),
            Rhs::Integral(terms) => {
                let mut out = String::new();
                for (c, t) in terms {
                    let body = match t {
                        CTerm::Z => "z".to_string(),
                        CTerm::Nest(ix) => nest_string(ix, &names[1..]),
                    };
                    let neg = c < &Rational::zero();
                    if !out.is_empty() {
                        out.push_str(if neg { " - " } else { " + " });
                    } else if neg {
                        out.push('-');
                    }
                    let a = if neg { -c.clone() } else { c.clone() };
                    if !a.is_one() {
                        out.push_str(&format!("{a}*"));
                    }
                    out.push_str(&body);
                }
                if out.is_empty() {
                    out.push('0');
                }
                out
            }
        }
    }
}

fn nest_string(ix: &[usize], names: &[&str]) -> String {
    match ix {
        [a] => names[*a].to_string(),
        [a, rest @ ..] => format!("C({},{})", names[*a], nest_string(rest, names)),
        [] => String::new(),
    }
}

fn format_stamp(alphabet: &Alphabet, t: &Tree) -> String {
    if t.is_identity() {
        "Id".to_string()
    } else {
        alphabet.format(t)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, r) in self.unknowns.iter().zip(&self.rhs) {
            writeln!(f, "{} = {}", u.name, self.format_rhs(r))?;
        }
        write!(f, "# total = {}", self.total.format(&self.var_names()))
    }
}

/// Stamp depth for a set of relation monomials.
fn stamp_depth(relations: &[Tree]) -> usize {
    relations.iter().map(Tree::depth).max().unwrap_or(0).saturating_sub(1)
}

fn hits_root(forbidden: &[Tree], t: &Tree) -> bool {
    forbidden.iter().any(|m| occurrence_at(m, t, &[]).is_some())
}

fn normal(forbidden: &[Tree], t: &Tree) -> bool {
    !forbidden.iter().any(|m| crate::monomials::divides(m, t))
}

/// All planar trees of depth at most `depth`, planar-numbered.
fn shapes_up_to_depth(alphabet: &Alphabet, depth: usize) -> Vec<Tree> {
    let mut level = vec![Tree::identity()];
    for _ in 0..depth {
        let mut next = vec![Tree::identity()];
        for g in alphabet.ids() {
            let lists: Vec<&[Tree]> = vec![level.as_slice(); alphabet.arity(g)];
            for children in product(&lists) {
                next.push(Tree::Node(g, children).planar_shape());
            }
        }
        level = next;
    }
    level
}

fn product(lists: &[&[Tree]]) -> Vec<Vec<Tree>> {
    lists.iter().fold(vec![Vec::new()], |acc, l| {
        acc.into_iter()
            .flat_map(|prefix| {
                l.iter().map(move |t| {
                    let mut v = prefix.clone();
                    v.push(t.clone());
                    v
                })
            })
            .collect()
    })
}

/// Normal planar shapes of depth below the deepest relation, ordered by
/// depth and then from the largest to the smallest in the path order. The
/// first stamp is always `Id`.
pub fn stamp_set(p: &Presentation) -> Result<Vec<Tree>, EquationError> {
    if !p.is_monomial() {
        return Err(EquationError::NotMonomial);
    }
    let forbidden = planar_forbidden(p);
    Ok(stamps_for(&p.alphabet().with_mode(Mode::Planar), &forbidden))
}

fn stamps_for(planar: &Alphabet, forbidden: &[Tree]) -> Vec<Tree> {
    let order = crate::monomials::MonomialOrder::default_for(planar);
    let mut stamps: Vec<Tree> = shapes_up_to_depth(planar, stamp_depth(forbidden))
        .into_iter()
        .filter(|t| normal(forbidden, t))
        .collect();
    stamps.sort_by_cached_key(|t| (t.depth(), std::cmp::Reverse(order.key(t))));
    stamps
}

/// Relation shapes; for shuffle input the caller has checked that the
/// relations are closed under relabelling, so shapes determine them.
fn planar_forbidden(p: &Presentation) -> Vec<Tree> {
    let set: BTreeSet<Tree> = p.relation_monomials().iter().map(Tree::planar_shape).collect();
    set.into_iter().collect()
}

/// `(result stamp, generator, child stamps)` for every admitted one-level
/// composition of stamps.
fn transitions(planar: &Alphabet, forbidden: &[Tree], stamps: &[Tree]) -> Vec<(usize, GenId, Vec<usize>)> {
    let depth = stamp_depth(forbidden);
    let index: BTreeMap<&Tree, usize> = stamps.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut out = Vec::new();
    for g in planar.ids() {
        let k = planar.arity(g);
        let mut tuple = vec![0usize; k];
        loop {
            let t = Tree::Node(g, tuple.iter().map(|&i| stamps[i].clone()).collect()).planar_shape();
            if !hits_root(forbidden, &t) {
                let target = t.truncate(depth);
                let r = *index.get(&target).expect("truncation of a normal tree is a stamp");
                out.push((r, g, tuple.clone()));
            }
            if !advance(&mut tuple, stamps.len()) {
                break;
            }
        }
    }
    out
}

/// Steps a base-`radix` odometer; false once it wraps around.
fn advance(idx: &mut [usize], radix: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn unknowns_for(stamps: &[Tree]) -> Vec<Unknown> {
    stamps.iter().enumerate().map(|(i, s)| Unknown { name: format!("y_{i}"), stamps: vec![s.clone()] }).collect()
}

fn sum_total(n: usize) -> MPoly {
    (0..n).fold(MPoly::zero(n + 1), |acc, i| acc.add(&MPoly::var(n + 1, i + 1)))
}

/// Polynomial system of a planar monomial operad (ordinary series).
pub fn build_planar_system(p: &Presentation) -> Result<EquationSystem, EquationError> {
    if p.mode() != Mode::Planar {
        return Err(EquationError::WrongMode { expected: Mode::Planar });
    }
    let stamps = stamp_set(p)?;
    let forbidden = planar_forbidden(p);
    let n = stamps.len();
    let mut rhs: Vec<MPoly> = vec![MPoly::zero(n + 1); n];
    rhs[0] = MPoly::var(n + 1, 0);
    for (r, _, children) in transitions(p.alphabet(), &forbidden, &stamps) {
        let term = children.iter().fold(MPoly::one(n + 1), |acc, &c| acc.mul(&MPoly::var(n + 1, c + 1)));
        rhs[r] = rhs[r].add(&term);
    }
    Ok(EquationSystem {
        flavor: Flavor::Ogf,
        alphabet: p.alphabet().clone(),
        unknowns: unknowns_for(&stamps),
        rhs: rhs.into_iter().map(Rhs::Poly).collect(),
        total: sum_total(n),
    })
}

/// Integral system of a shuffle monomial operad with shuffle-regular
/// relations (exponential series).
pub fn build_shuffle_system(p: &Presentation) -> Result<EquationSystem, EquationError> {
    if p.mode() != Mode::Shuffle {
        return Err(EquationError::WrongMode { expected: Mode::Shuffle });
    }
    if !p.is_monomial() {
        return Err(EquationError::NotMonomial);
    }
    if let Some((member, missing)) = shuffle_regularity_witness(&p.relation_monomials()) {
        return Err(EquationError::NotShuffleRegular {
            member: p.alphabet().format(&member),
            missing: p.alphabet().format(&missing),
        });
    }
    let planar = p.alphabet().with_mode(Mode::Planar);
    let forbidden = planar_forbidden(p);
    let stamps = stamps_for(&planar, &forbidden);
    let mut rhs: Vec<Vec<(Rational, CTerm)>> = vec![Vec::new(); stamps.len()];
    rhs[0].push((Rational::one(), CTerm::Z));
    for (r, _, children) in transitions(&planar, &forbidden, &stamps) {
        rhs[r].push((Rational::one(), CTerm::Nest(children)));
    }
    Ok(EquationSystem {
        flavor: Flavor::Egf,
        alphabet: planar,
        unknowns: unknowns_for(&stamps),
        rhs: rhs.into_iter().map(Rhs::Integral).collect(),
        total: sum_total(stamps.len()),
    })
}

/// Collapses the integral system of a symmetric-regular operad into a
/// polynomial one: unknowns become classes of stamps under
/// replanarization, all orderings of a multiset of classes pair up into
/// `∏ Y / ∏ mult!`, unknowns with identical right-hand sides merge, and the
/// class of `Id` is replaced by `z` when its equation is `Y = z`.
pub fn simplify_symmetric_regular(sys: &EquationSystem, p: &Presentation) -> Result<EquationSystem, EquationError> {
    if sys.is_polynomial() {
        return Ok(sys.clone());
    }
    if let Some((member, missing)) = symmetric_regularity_witness(&p.relation_monomials()) {
        return Err(EquationError::NotSymmetricRegular {
            member: p.alphabet().format(&member),
            missing: p.alphabet().format(&missing),
        });
    }
    // classes of stamps, in order of first appearance
    let mut class_of: Vec<usize> = Vec::with_capacity(sys.len());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut rep: BTreeMap<Tree, usize> = BTreeMap::new();
    for u in &sys.unknowns {
        let s = &u.stamps[0];
        let key = replanarizations(s).into_iter().min().unwrap_or_else(|| s.clone());
        let c = *rep.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(class_of.len());
        class_of.push(c);
    }
    let m = classes.len();
    let nv = m + 1;
    // ordered class tuple -> number of stamp tuples, per target class
    let mut rhs = vec![MPoly::zero(nv); m];
    for (c, members) in classes.iter().enumerate() {
        let mut ordered: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for &i in members {
            let Rhs::Integral(terms) = &sys.rhs[i] else { return Err(EquationError::WrongKind("integral")) };
            for (coef, t) in terms {
                if !coef.is_one() {
                    return Err(EquationError::Pairing(format!("coefficient {coef} in the equation of y_{i}")));
                }
                match t {
                    CTerm::Z => rhs[c] = rhs[c].add(&MPoly::var(nv, 0)),
                    CTerm::Nest(ix) => *ordered.entry(ix.iter().map(|&j| class_of[j]).collect()).or_default() += 1,
                }
            }
        }
        let mut multisets: BTreeMap<Vec<usize>, BTreeSet<Vec<usize>>> = BTreeMap::new();
        for (tuple, count) in &ordered {
            let needed: usize = tuple.iter().map(|&k| classes[k].len()).product();
            if *count != needed {
                return Err(EquationError::Pairing(format!("class tuple {tuple:?} has {count} of {needed} stamp tuples")));
            }
            let mut key = tuple.clone();
            key.sort_unstable();
            multisets.entry(key).or_default().insert(tuple.clone());
        }
        for (multiset, orderings) in multisets {
            let mut mults: BTreeMap<usize, usize> = BTreeMap::new();
            for &k in &multiset {
                *mults.entry(k).or_default() += 1;
            }
            let denom: Rational = mults.values().map(|&k| factorial_rat(k)).product();
            let expected = factorial_rat(multiset.len()) / &denom;
            if Rational::from_integer(orderings.len().into()) != expected {
                return Err(EquationError::Pairing(format!("multiset {multiset:?} has {} orderings", orderings.len())));
            }
            let term = multiset.iter().fold(MPoly::constant(nv, denom.recip()), |acc, &k| acc.mul(&MPoly::var(nv, k + 1)));
            rhs[c] = rhs[c].add(&term);
        }
    }
    let stamps: Vec<Vec<Tree>> =
        classes.iter().map(|ms| ms.iter().map(|&i| sys.unknowns[i].stamps[0].clone()).collect()).collect();
    Ok(merge_and_substitute(sys, rhs, stamps))
}

/// Merges unknowns whose right-hand sides coincide and replaces an unknown
/// whose equation is `Y = z` by `z`.
fn merge_and_substitute(sys: &EquationSystem, mut rhs: Vec<MPoly>, mut stamps: Vec<Vec<Tree>>) -> EquationSystem {
    let mut weights: Vec<Rational> = vec![Rational::one(); rhs.len()];
    let mut z_coef = Rational::zero();
    loop {
        let nv = rhs.len() + 1;
        let z = MPoly::var(nv, 0);
        let pair = (0..rhs.len())
            .flat_map(|a| (a + 1..rhs.len()).map(move |b| (a, b)))
            .find(|&(a, b)| rhs[a] == rhs[b]);
        let (keep, drop, value) = if let Some(i) = (0..rhs.len()).find(|&i| rhs[i] == z) {
            (None, i, z.clone())
        } else if let Some((a, b)) = pair {
            (Some(a), b, MPoly::var(nv, a + 1))
        } else {
            break;
        };
        match keep {
            Some(a) => {
                let w = weights[drop].clone();
                weights[a] += w;
                let moved = stamps[drop].clone();
                stamps[a].extend(moved);
            }
            None => z_coef += &weights[drop],
        }
        // substitute, then delete the variable of `drop`
        let map: Vec<usize> = (0..nv).map(|v| if v <= drop { v } else { v - 1 }).collect();
        let mut next = Vec::new();
        for (i, r) in rhs.iter().enumerate() {
            if i != drop {
                let mut s = r.substitute(drop + 1, &value);
                let keep_vars: Vec<usize> = map.clone();
                s = s.remap(&keep_vars, nv - 1);
                next.push(s);
            }
        }
        rhs = next;
        weights.remove(drop);
        stamps.remove(drop);
    }
    let nv = rhs.len() + 1;
    let mut total = MPoly::var(nv, 0).scale(&z_coef);
    for (i, w) in weights.iter().enumerate() {
        total = total.add(&MPoly::var(nv, i + 1).scale(w));
    }
    let first = if z_coef.is_zero() { 0 } else { 1 };
    let unknowns = stamps
        .into_iter()
        .enumerate()
        .map(|(i, s)| Unknown { name: format!("y_{}", i + first), stamps: s })
        .collect();
    EquationSystem { flavor: sys.flavor, alphabet: sys.alphabet.clone(), unknowns, rhs: rhs.into_iter().map(Rhs::Poly).collect(), total }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub unknowns: Vec<PowerSeries>,
    pub total: PowerSeries,
}

fn check_well_founded(sys: &EquationSystem) -> Result<(), EquationError> {
    for (u, r) in sys.unknowns.iter().zip(&sys.rhs) {
        if let Rhs::Poly(p) = r {
            for (e, c) in p.terms() {
                let deg: u32 = e.iter().sum();
                if deg == 0 || (deg == 1 && e[0] == 0) {
                    let names = sys.var_names();
                    let t = MPoly::monomial(e.clone(), c.clone()).format(&names);
                    return Err(EquationError::NotWellFounded(format!("term {t} in the equation of {}", u.name)));
                }
            }
        }
    }
    Ok(())
}

fn eval_cterm(t: &CTerm, ys: &[PowerSeries], z: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    match t {
        CTerm::Z => Ok(z.clone()),
        CTerm::Nest(ix) => nest_value(ix, ys),
    }
}

fn nest_value(ix: &[usize], ys: &[PowerSeries]) -> Result<PowerSeries, SeriesError> {
    match ix {
        [a] => Ok(ys[*a].clone()),
        [a, rest @ ..] => ys[*a].c_operation(&nest_value(rest, ys)?),
        [] => unreachable!("empty C-term"),
    }
}

/// The unique solution with zero constant terms, to order `order`, by
/// fixed-point iteration; every right-hand side term raises the valuation,
/// so each round fixes one more coefficient.
pub fn solve_series(sys: &EquationSystem, order: usize) -> Result<Solution, EquationError> {
    check_well_founded(sys)?;
    let z = PowerSeries::z(sys.flavor, order);
    let mut ys = vec![PowerSeries::zero(sys.flavor, order); sys.len()];
    for _ in 0..=order + 1 {
        let mut args = vec![z.clone()];
        args.extend(ys.iter().cloned());
        let next: Vec<PowerSeries> = sys
            .rhs
            .iter()
            .map(|r| match r {
                Rhs::Poly(p) => eval_at_series(p, &args),
                Rhs::Integral(terms) => terms.iter().try_fold(PowerSeries::zero(sys.flavor, order), |acc, (c, t)| {
                    acc.add(&eval_cterm(t, &ys, &z)?.truncate(order).scale(c))
                }),
            })
            .collect::<Result<_, _>>()?;
        if next == ys {
            break;
        }
        ys = next;
    }
    let mut args = vec![z];
    args.extend(ys.iter().cloned());
    let total = eval_at_series(&sys.total, &args)?;
    Ok(Solution { unknowns: ys, total })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub equation: AlgebraicEquation,
    /// Degree in `Y` of the returned equation.
    pub degree: u32,
    /// `∏ max(d_i, 1)^2` over the system.
    pub bound: u64,
    /// Degree in `Y` of the eliminant before factor selection.
    pub eliminant_degree: u32,
    /// Series order used for factor selection.
    pub checked_order: usize,
}

/// A single equation `Q(z, Y) = 0` for the total series: substitutes
/// unknowns that occur linearly, eliminates the rest by resultants, and
/// returns the smallest factor of the eliminant that annihilates the total
/// series with at least four spare coefficients.
pub fn eliminate(sys: &EquationSystem, cap: usize) -> Result<Elimination, EquationError> {
    if !sys.is_polynomial() {
        return Err(EquationError::WrongKind("polynomial"));
    }
    if sys.len() > cap {
        return Err(EquationError::TooManyUnknowns { unknowns: sys.len(), cap });
    }
    let n = sys.len();
    // variables: z, Y, y_0 .. y_{n-1}
    let nv = n + 2;
    let map: Vec<usize> = std::iter::once(0).chain(2..nv).collect();
    let mut polys: Vec<MPoly> = sys
        .rhs
        .iter()
        .enumerate()
        .map(|(i, r)| match r {
            Rhs::Poly(p) => MPoly::var(nv, i + 2).sub(&p.remap(&map, nv)),
            Rhs::Integral(_) => unreachable!(),
        })
        .collect();
    polys.push(MPoly::var(nv, 1).sub(&sys.total.remap(&map, nv)));
    let mut vars: Vec<usize> = (2..nv).collect();
    while let Some(pos) = vars.iter().position(|&v| polys.iter().any(|p| p.mentions(v))) {
        let v = vars.remove(pos);
        let linear = polys.iter().position(|p| {
            let cs = p.coeffs_in(v);
            cs.len() == 2 && cs[1].total_degree() == 0 && !cs[1].is_zero()
        });
        if let Some(i) = linear {
            let p = polys.remove(i);
            let cs = p.coeffs_in(v);
            let lead = cs[1].terms().next().map(|(_, c)| c.clone()).expect("nonzero constant");
            let value = cs[0].scale(&(-lead.recip()));
            polys = polys.into_iter().map(|q| q.substitute(v, &value)).collect();
        } else {
            let (with, without): (Vec<MPoly>, Vec<MPoly>) = polys.into_iter().partition(|p| p.mentions(v));
            let pivot_ix = (0..with.len()).min_by_key(|&i| with[i].degree_in(v)).expect("variable is mentioned");
            let pivot = with[pivot_ix].clone();
            polys = without;
            for (i, q) in with.iter().enumerate() {
                if i != pivot_ix {
                    let r = pivot.resultant(q, v);
                    if r.is_zero() {
                        return Err(EquationError::Degenerate);
                    }
                    polys.push(r);
                }
            }
        }
        polys.retain(|p| !p.is_zero());
    }
    let q = polys.into_iter().find(|p| p.mentions(1)).ok_or(EquationError::Degenerate)?;
    let q = q.remap(&[0, 1].into_iter().chain(std::iter::repeat_n(1, n)).collect::<Vec<_>>(), 2);
    let eliminant_degree = q.degree_in(1);
    let (dy, dz) = (q.degree_in(1) as usize, q.degree_in(0) as usize);
    let checked_order = (dy + 1) * (dz + 1) + 3;
    let total = solve_series(sys, checked_order)?.total;
    let equation = annihilating_factor(&q, &total)?;
    Ok(Elimination {
        degree: equation.poly.degree_in(1),
        equation,
        bound: sys.degree_bound(),
        eliminant_degree,
        checked_order,
    })
}

/// The annihilator of `s` of least degree in `Y` (then in `z`) that
/// divides `q`, normalised to coprime integer coefficients.
fn annihilating_factor(q: &MPoly, s: &PowerSeries) -> Result<AlgebraicEquation, EquationError> {
    let k = s.order();
    let (dy_max, dz_max) = (q.degree_in(1) as usize, q.degree_in(0) as usize);
    let powers: Vec<PowerSeries> = (0..=dy_max).map(|j| s.pow(j as u32)).collect();
    for dy in 1..=dy_max {
        for dz in 0..=dz_max {
            let cols: Vec<(usize, usize)> = (0..=dy).flat_map(|j| (0..=dz).map(move |i| (j, i))).collect();
            if k < cols.len() + 3 {
                continue;
            }
            let rows: Vec<Vec<Rational>> = (0..=k)
                .map(|t| cols.iter().map(|&(j, i)| if t >= i { powers[j].coeff(t - i) } else { Rational::zero() }).collect())
                .collect();
            for v in linalg::kernel(&rows, cols.len()) {
                let mut p = MPoly::zero(2);
                for (&(j, i), c) in cols.iter().zip(&v) {
                    p.add_term(vec![i as u32, j as u32], c.clone());
                }
                if p.degree_in(1) == 0 {
                    continue;
                }
                if q.exact_div(&p).is_some() {
                    let eq = AlgebraicEquation::new(p.normalized(1, 0));
                    if verify_algebraic(&eq, s)? {
                        return Ok(eq);
                    }
                }
            }
        }
    }
    let eq = AlgebraicEquation::new(q.normalized(1, 0));
    if s.order() >= eq.min_order() && verify_algebraic(&eq, s)? {
        return Ok(eq);
    }
    Err(EquationError::NoAnnihilator { order: k })
}

/// First-order differential system of an integral system.
///
/// Each `y_i = Σ c C(a, rest)` becomes `y_i' = Σ c a' · rest`, where a
/// nested `rest` is an auxiliary unknown `u_j` with its own equation.
/// Variables are `[z, y.., u.., y'.., u'..]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeSystem {
    pub names: Vec<String>,
    unknowns: usize,
    /// The C-term suffix each auxiliary unknown stands for.
    pub aux: Vec<Vec<usize>>,
    /// `(index among y.. and u.., right-hand side of its derivative)`.
    pub equations: Vec<(usize, MPoly)>,
}

impl OdeSystem {
    fn nv(&self) -> usize {
        1 + 2 * (self.unknowns + self.aux.len())
    }

    fn value_var(&self, i: usize) -> usize {
        1 + i
    }

    fn deriv_var(&self, i: usize) -> usize {
        1 + self.unknowns + self.aux.len() + i
    }

    /// Whether every equation vanishes on the solution of the integral
    /// system, up to the order its derivatives are known.
    pub fn verify(&self, solution: &Solution) -> Result<bool, EquationError> {
        let ys = &solution.unknowns;
        let order = ys.iter().map(PowerSeries::order).min().unwrap_or(0);
        let z = PowerSeries::z(ys.first().map_or(Flavor::Egf, PowerSeries::flavor), order);
        let mut values: Vec<PowerSeries> = ys.clone();
        for a in &self.aux {
            values.push(nest_value(a, ys)?);
        }
        let mut args = vec![z];
        args.extend(values.iter().cloned());
        args.extend(values.iter().map(PowerSeries::derive));
        for (i, rhs) in &self.equations {
            let lhs = MPoly::var(self.nv(), self.deriv_var(*i));
            if !eval_at_series(&lhs.sub(rhs), &args)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for OdeSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        let n = self.unknowns + self.aux.len();
        for (j, a) in self.aux.iter().enumerate() {
            let inner: Vec<&str> = names[1..=self.unknowns].to_vec();
            writeln!(f, "{} := {}", names[1 + self.unknowns + j], nest_string(a, &inner))?;
        }
        for (k, (i, rhs)) in self.equations.iter().enumerate() {
            write!(f, "{} = {}", names[1 + n + i], rhs.format(&names))?;
            if k + 1 < self.equations.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

pub fn ode_from_system(sys: &EquationSystem) -> Result<OdeSystem, EquationError> {
    let n = sys.len();
    let mut aux: Vec<Vec<usize>> = Vec::new();
    // collect every nested suffix of length >= 2 that sits in a second slot
    let mut pending: Vec<Vec<usize>> = Vec::new();
    for r in &sys.rhs {
        let Rhs::Integral(terms) = r else { return Err(EquationError::WrongKind("integral")) };
        for (_, t) in terms {
            if let CTerm::Nest(ix) = t {
                pending.push(ix.clone());
            }
        }
    }
    while let Some(ix) = pending.pop() {
        if ix.len() > 2 {
            let rest = ix[1..].to_vec();
            if !aux.contains(&rest) {
                aux.push(rest.clone());
                pending.push(rest);
            }
        }
    }
    let mut names = vec!["z".to_string()];
    names.extend(sys.unknowns.iter().map(|u| u.name.clone()));
    names.extend((0..aux.len()).map(|j| format!("u_{j}")));
    let base: Vec<String> = names[1..].to_vec();
    names.extend(base.iter().map(|s| format!("{s}'")));
    let mut ode = OdeSystem { names, unknowns: n, aux, equations: Vec::new() };
    let nv = ode.nv();
    let derivative = |ix: &[usize], ode: &OdeSystem| -> MPoly {
        // (C(a, rest))' = a' * rest
        let a = MPoly::var(nv, ode.deriv_var(ix[0]));
        let rest = if ix.len() == 2 {
            MPoly::var(nv, ode.value_var(ix[1]))
        } else {
            let j = ode.aux.iter().position(|x| x[..] == ix[1..]).expect("auxiliary registered");
            MPoly::var(nv, ode.value_var(n + j))
        };
        a.mul(&rest)
    };
    for (i, r) in sys.rhs.iter().enumerate() {
        let Rhs::Integral(terms) = r else { unreachable!() };
        let mut rhs = MPoly::zero(nv);
        for (c, t) in terms {
            let d = match t {
                CTerm::Z => MPoly::one(nv),
                CTerm::Nest(ix) if ix.len() == 1 => MPoly::var(nv, ode.deriv_var(ix[0])),
                CTerm::Nest(ix) => derivative(ix, &ode),
            };
            rhs = rhs.add(&d.scale(c));
        }
        ode.equations.push((i, rhs));
    }
    for j in 0..ode.aux.len() {
        let ix = ode.aux[j].clone();
        let d = derivative(&ix, &ode);
        ode.equations.push((n + j, d));
    }
    Ok(ode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::rational::{int, rat};

    const N_OPERAD: &str = "mode: shuffle\ngenerators: mu:2, alpha:2\nrelations:\n\
        (mu (alpha 1 2) (alpha 3 4))\n(mu (alpha 1 3) (alpha 2 4))\n(mu (alpha 1 4) (alpha 2 3))\n\
        (alpha (alpha 1 2) (alpha 3 4))\n(alpha (alpha 1 3) (alpha 2 4))\n(alpha (alpha 1 4) (alpha 2 3))\n";

    fn planar(rel: &str) -> Presentation {
        parse_presentation(&format!("mode: planar\ngenerators: m:2\nrelations:\n{rel}\n")).unwrap()
    }

    #[test]
    fn stamps_of_the_n_operad() {
        let p = parse_presentation(N_OPERAD).unwrap();
        let s = stamp_set(&p).unwrap();
        let a = p.alphabet().with_mode(Mode::Planar);
        let names: Vec<String> = s.iter().map(|t| format_stamp(&a, t)).collect();
        assert_eq!(names, ["Id", "(mu - -)", "(alpha - -)"]);
    }

    #[test]
    fn left_comb_system() {
        let sys = build_planar_system(&planar("(m (m - -) -)")).unwrap();
        assert_eq!(sys.to_string(), "y_0 = z\ny_1 = y_0*y_1 + y_0^2\n# total = y_1 + y_0");
        let sol = solve_series(&sys, 10).unwrap();
        assert_eq!(sol.total.coeffs()[1..], vec![int(1); 10][..]);
        let e = eliminate(&sys, DEFAULT_ELIMINATION_CAP).unwrap();
        assert_eq!(e.equation.to_string(), "-z*y + y - z = 0");
        assert!(u64::from(e.degree) <= e.bound);
    }

    #[test]
    fn free_planar_is_catalan() {
        let p = parse_presentation("mode: planar\ngenerators: m:2\n").unwrap();
        let sys = build_planar_system(&p).unwrap();
        assert_eq!(sys.to_string(), "y_0 = y_0^2 + z\n# total = y_0");
        let sol = solve_series(&sys, 9).unwrap();
        let cat: Vec<Rational> = [0, 1, 1, 2, 5, 14, 42, 132, 429, 1430].iter().map(|&c| int(c)).collect();
        assert_eq!(sol.total.coeffs(), &cat[..]);
        let e = eliminate(&sys, DEFAULT_ELIMINATION_CAP).unwrap();
        assert_eq!(e.equation.to_string(), "y^2 - y + z = 0");
    }

    #[test]
    fn all_corollas_forbidden_leaves_identity() {
        let sys = build_planar_system(&planar("(m - -)")).unwrap();
        let sol = solve_series(&sys, 6).unwrap();
        assert_eq!(sol.total, PowerSeries::z(Flavor::Ogf, 6));
    }

    #[test]
    fn n_operad_integral_and_polynomial_systems() {
        let p = parse_presentation(N_OPERAD).unwrap();
        let sys = build_shuffle_system(&p).unwrap();
        let lines: Vec<String> = sys.to_string().lines().map(String::from).collect();
        assert_eq!(lines[0], "y_0 = z");
        assert_eq!(lines[1].matches("C(").count(), 8);
        assert_eq!(sys.rhs[1], sys.rhs[2]);
        let sol = solve_series(&sys, 7).unwrap();
        let want = [int(0), int(1), int(1), int(2), rat(19, 4), rat(25, 2), rat(281, 8), rat(413, 4)];
        assert_eq!(sol.total.coeffs(), &want[..]);
        assert_eq!(sol.unknowns[1], sol.unknowns[2]);

        let simple = simplify_symmetric_regular(&sys, &p).unwrap();
        assert_eq!(simple.integer_form(), ["2*y_1 = 3*y_1^2 + 4*z*y_1 + z^2"]);
        assert_eq!(simple.total.format(&["z", "y_1"]), "2*y_1 + z");
        assert_eq!(solve_series(&simple, 7).unwrap().total, sol.total);

        let e = eliminate(&simple, DEFAULT_ELIMINATION_CAP).unwrap();
        assert_eq!(e.equation.to_string(), "3*y^2 + 2*z*y - z^2 - 4*y + 4*z = 0");
        assert_eq!((e.degree, e.bound), (2, 4));
    }

    #[test]
    fn ode_of_integral_systems() {
        let p = parse_presentation(N_OPERAD).unwrap();
        let sys = build_shuffle_system(&p).unwrap();
        let ode = ode_from_system(&sys).unwrap();
        assert!(ode.aux.is_empty());
        assert_eq!(ode.to_string().lines().next().unwrap(), "y_0' = 1");
        assert!(ode.verify(&solve_series(&sys, 12).unwrap()).unwrap());

        let free = parse_presentation("mode: shuffle\ngenerators: m:2, t:3\n").unwrap();
        let sys = build_shuffle_system(&free).unwrap();
        let ode = ode_from_system(&sys).unwrap();
        assert_eq!(ode.aux, vec![vec![0, 0]]);
        assert!(ode.verify(&solve_series(&sys, 12).unwrap()).unwrap());
        // a wrong solution is rejected
        let mut bad = solve_series(&sys, 12).unwrap();
        bad.unknowns[0] = bad.unknowns[0].add(&PowerSeries::new(Flavor::Egf, 12, vec![int(0); 5].into_iter().chain([int(1)]).collect())).unwrap();
        assert!(!ode.verify(&bad).unwrap());
    }

    #[test]
    fn not_shuffle_regular_is_rejected() {
        let p = parse_presentation("mode: shuffle\ngenerators: m:2\nrelations:\n(m (m 1 2) 3)\n").unwrap();
        assert!(matches!(build_shuffle_system(&p), Err(EquationError::NotShuffleRegular { .. })));
        let p = parse_presentation("mode: shuffle\ngenerators: m:2\nrelations:\n(m (m 1 2) 3)\n(m (m 1 3) 2)\n").unwrap();
        let sys = build_shuffle_system(&p).unwrap();
        assert!(matches!(simplify_symmetric_regular(&sys, &p), Err(EquationError::NotSymmetricRegular { .. })));
    }

    #[test]
    fn ill_founded_system_is_rejected() {
        let mut sys = build_planar_system(&planar("(m (m - -) -)")).unwrap();
        sys.rhs[1] = Rhs::Poly(MPoly::var(3, 2));
        assert!(matches!(solve_series(&sys, 4), Err(EquationError::NotWellFounded(_))));
    }

    #[test]
    fn elimination_cap() {
        let sys = build_planar_system(&planar("(m (m - -) -)")).unwrap();
        assert_eq!(eliminate(&sys, 1), Err(EquationError::TooManyUnknowns { unknowns: 2, cap: 1 }));
    }
}
