//! Small common multiples of two leading monomials.

use crate::element::OperadElement;
use crate::monomials::{occurrence_at, shuffle_labelings, Mode, Path, Tree};

use super::trail::lift;

/// A common multiple `lcm` of two leading monomials in which the first
/// occurs at `anchor_f`, the second at `anchor_g`, and the two occurrences
/// share at least one internal node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub lcm: Tree,
    pub anchor_f: Path,
    pub anchor_g: Path,
}

/// An overlap together with its S-element `lift(f) - lift(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SElement {
    pub overlap: Overlap,
    pub element: OperadElement,
}

fn merge(a: &Tree, b: &Tree) -> Option<Tree> {
    match (a, b) {
        (Tree::Leaf(_), x) | (x, Tree::Leaf(_)) => Some(x.clone()),
        (Tree::Node(g, xs), Tree::Node(h, ys)) if g == h && xs.len() == ys.len() => {
            let cs = xs.iter().zip(ys).map(|(x, y)| merge(x, y)).collect::<Option<Vec<_>>>()?;
            Some(Tree::Node(*g, cs))
        }
        _ => None,
    }
}

/// Overlaps where `inner`'s root sits on a node of `outer`.
fn rooted_in(mode: Mode, outer: &Tree, inner: &Tree, cap: usize, skip_root: bool, out: &mut Vec<(Tree, Path, Path)>) {
    let so = outer.planar_shape();
    let si = inner.planar_shape();
    for v in so.node_paths() {
        if skip_root && v.is_empty() {
            continue;
        }
        let Some(sub) = so.subtree(&v) else { continue };
        let Some(merged) = merge(sub, &si) else { continue };
        let Some(union) = so.replace_at(&v, merged) else { continue };
        let union = union.planar_shape();
        if union.arity() > cap {
            continue;
        }
        let labelled = match mode {
            Mode::Planar => vec![union],
            Mode::Shuffle => shuffle_labelings(&union),
        };
        for m in labelled {
            if occurrence_at(outer, &m, &[]).is_some() && occurrence_at(inner, &m, &v).is_some() {
                out.push((m, Vec::new(), v.clone()));
            }
        }
    }
}

/// All overlaps of `f` and `g` of arity at most `cap`. With `same` set the
/// two monomials are the same basis element, so the trivial overlap of the
/// monomial with itself and the mirrored duplicates are skipped.
pub fn overlap_monomials(mode: Mode, f: &Tree, g: &Tree, cap: usize, same: bool) -> Vec<Overlap> {
    let mut raw = Vec::new();
    rooted_in(mode, f, g, cap, same, &mut raw);
    let mut out: Vec<Overlap> =
        raw.into_iter().map(|(lcm, af, ag)| Overlap { lcm, anchor_f: af, anchor_g: ag }).collect();
    if !same {
        let mut rev = Vec::new();
        rooted_in(mode, g, f, cap, true, &mut rev);
        out.extend(rev.into_iter().map(|(lcm, ag, af)| Overlap { lcm, anchor_f: af, anchor_g: ag }));
    }
    out
}

/// Whether some overlap shape of `f` and `g` has arity above `cap`. Only
/// shapes are inspected, so this may report overlaps whose labellings all
/// fail; the answer errs on the side of "not certified".
pub(crate) fn may_exceed(f: &Tree, g: &Tree, cap: usize) -> bool {
    let check = |outer: &Tree, inner: &Tree| {
        let so = outer.planar_shape();
        let si = inner.planar_shape();
        so.node_paths().iter().any(|v| {
            so.subtree(v)
                .and_then(|sub| merge(sub, &si))
                .and_then(|m| so.replace_at(v, m))
                .is_some_and(|u| u.arity() > cap)
        })
    };
    check(f, g) || check(g, f)
}

pub(crate) fn s_element(f: &OperadElement, lf: &Tree, g: &OperadElement, lg: &Tree, o: &Overlap) -> Option<OperadElement> {
    let a = lift(f, &o.lcm, &o.anchor_f, &lf.planar_shape())?;
    let b = lift(g, &o.lcm, &o.anchor_g, &lg.planar_shape())?;
    Some(a.sub(&b))
}
