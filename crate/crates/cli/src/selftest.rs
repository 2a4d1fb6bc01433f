use std::fmt::Write as _;

use num_traits::ToPrimitive;
use operad_core::bounds::bound_table;
use operad_core::enumeration::normal_dims;
use operad_core::equations::{build_shuffle_system, solve_series};
use operad_core::monomials::{divides, enumerate_free, regular_closure, Alphabet, Mode, Regularity, Tree};
use operad_core::presentation::{parse_presentation, Presentation};
use operad_core::rational::from_biguint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{groebner_config, header};
use crate::{Failure, RunConfig};

const MAX_ARITY: usize = 5;

/// Monomial shuffle presentations on two binary generators with one to six
/// forbidden monomials of weight 2, closed under shuffle regularity.
pub fn random_presentation(rng: &mut ChaCha8Rng) -> Presentation {
    let alphabet = Alphabet::from_pairs(Mode::Shuffle, &[("a", 2), ("b", 2)]).expect("valid alphabet");
    let pool: Vec<Tree> =
        (3..=4).flat_map(|n| enumerate_free(&alphabet, n)).filter(|t| t.weight() == 2).collect();
    let k = rng.gen_range(1..=6);
    let chosen: Vec<Tree> = pool.choose_multiple(rng, k).cloned().collect();
    Presentation::monomial(alphabet, regular_closure(&chosen, Regularity::Shuffle))
}

fn brute_force(p: &Presentation, n: usize) -> usize {
    let forbidden = p.relation_monomials();
    enumerate_free(p.alphabet(), n).iter().filter(|t| !forbidden.iter().any(|m| divides(m, t))).count()
}

fn check(p: &Presentation, config: &RunConfig) -> Result<(), String> {
    let text = p.to_file_string();
    let back = parse_presentation(&text).map_err(|e| format!("reparse: {e}"))?;
    if back.relation_monomials() != p.relation_monomials() {
        return Err("file round trip changed the relations".into());
    }
    let oracle = normal_dims(p, MAX_ARITY, config.budget).map_err(|e| e.to_string())?;
    for n in 1..=MAX_ARITY {
        let counted = oracle.dim(n).and_then(ToPrimitive::to_usize);
        if counted != Some(brute_force(p, n)) {
            return Err(format!("arity {n}: count {counted:?} differs from brute force"));
        }
    }
    let table = bound_table(p, MAX_ARITY, &groebner_config(config), config.budget).map_err(|e| e.to_string())?;
    for r in &table.rows {
        let d = from_biguint(oracle.dim(r.arity).expect("counted"));
        let (upper, _) = r.partial_upper.as_ref().ok_or("missing upper bound")?;
        let upper = from_biguint(upper);
        if table.hypothesis && r.gs_lower > d {
            return Err(format!("arity {}: lower bound {} exceeds {d}", r.arity, r.gs_lower));
        }
        if d > upper || upper > from_biguint(&r.free_upper) {
            return Err(format!("arity {}: upper bounds out of order", r.arity));
        }
    }
    let sys = build_shuffle_system(p).map_err(|e| e.to_string())?;
    let total = solve_series(&sys, MAX_ARITY).map_err(|e| e.to_string())?.total;
    let dims = total.dims();
    for (n, d) in dims.iter().enumerate().skip(1) {
        if d.as_ref() != oracle.dim(n) {
            return Err(format!("arity {n}: series and count disagree"));
        }
    }
    Ok(())
}

pub fn run(seed: u64, cases: usize, config: &RunConfig, out: &mut String) -> Result<(), Failure> {
    header(out, "selftest", None, config, &format!(" seed={seed} cases={cases}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failed = 0;
    for i in 0..cases {
        let p = random_presentation(&mut rng);
        let verdict = match check(&p, config) {
            Ok(()) => "PASS".to_string(),
            Err(e) => {
                failed += 1;
                format!("FAIL\t{e}")
            }
        };
        let _ = writeln!(out, "case {i}\t{} relations\t{verdict}", p.relations().len());
    }
    let _ = writeln!(out, "passed {}/{cases}", cases - failed);
    if failed > 0 {
        return Err(Failure::Invariant(format!("{failed} self-test cases failed")));
    }
    Ok(())
}
