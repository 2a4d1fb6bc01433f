use std::fmt::Write as _;
use std::path::Path;

use operad_core::bounds::{binary_bounds, bound_table, growth_report, BoundsError, GsInput};
use operad_core::enumeration::{dims_of_quotient, normal_dims, DimTable, DimTag, EnumerationError};
use operad_core::equations::{
    build_planar_system, build_shuffle_system, eliminate, ode_from_system, simplify_symmetric_regular, solve_series,
    stamp_set, EquationError, EquationSystem, DEFAULT_ELIMINATION_CAP,
};
use operad_core::groebner::{buchberger, leading_monomials, GroebnerConfig, GroebnerError, GroebnerResult};
use operad_core::monomials::Mode;
use operad_core::presentation::{parse_presentation, Presentation};
use operad_core::rational::{from_biguint, to_f64};
use operad_core::series::{verify_algebraic, Flavor};

use crate::{Failure, Format, RunConfig};

pub const UPPER_CAVEAT: &str =
    "# caveat: rows tagged upper-bound count normal monomials of a truncated basis; the true dimension is at most the value";

pub fn load(path: &Path, config: &RunConfig) -> Result<Presentation, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let p = parse_presentation(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    match &config.precedence {
        Some(names) => p.with_precedence(names.clone()).map_err(|e| Failure::Parse(format!("--precedence: {e}"))),
        None => Ok(p),
    }
}

pub fn header(out: &mut String, command: &str, file: Option<&Path>, config: &RunConfig, extra: &str) {
    let precedence = config.precedence.as_ref().map_or("-".to_string(), |v| v.join(","));
    let format = match config.format {
        Format::Tsv => "tsv",
        Format::Text => "text",
    };
    let _ = writeln!(out, "# operad {command}");
    if let Some(f) = file {
        let _ = writeln!(out, "# file {}", f.display());
    }
    let _ = writeln!(
        out,
        "# config order={} cap={} budget={} format={format} precedence={precedence}{extra}",
        config.order, config.cap, config.budget
    );
}

fn kv(out: &mut String, format: Format, key: &str, value: impl std::fmt::Display) {
    let _ = match format {
        Format::Tsv => writeln!(out, "{key}\t{value}"),
        Format::Text => writeln!(out, "{key}: {value}"),
    };
}

fn section(out: &mut String, name: &str) {
    let _ = writeln!(out, "## {name}");
}

pub fn groebner_config(config: &RunConfig) -> GroebnerConfig {
    GroebnerConfig {
        cap: config.cap as usize,
        budget: usize::try_from(config.budget).unwrap_or(usize::MAX),
        ..GroebnerConfig::default()
    }
}

fn groebner_failure(e: GroebnerError) -> Failure {
    match e {
        GroebnerError::CapTooSmall { .. } => Failure::Parse(e.to_string()),
        GroebnerError::Budget { .. } => Failure::Budget(e.to_string()),
    }
}

fn write_table(out: &mut String, format: Format, t: &DimTable) {
    match format {
        Format::Tsv => out.push_str(&t.to_tsv()),
        Format::Text => {
            for e in &t.entries {
                let _ = writeln!(out, "arity {}: {} ({})", e.arity, e.dim, e.tag);
            }
        }
    }
    if t.entries.iter().any(|e| e.tag == DimTag::UpperBound) {
        out.push_str(UPPER_CAVEAT);
        out.push('\n');
    }
}

fn gb_status(gb: &GroebnerResult) -> &'static str {
    if gb.finite {
        "finite"
    } else if gb.complete_below_cap {
        "complete-below-cap"
    } else {
        "incomplete"
    }
}

pub fn dims(path: &Path, config: &RunConfig, out: &mut String) -> Result<(), Failure> {
    header(out, "dims", Some(path), config, "");
    let p = load(path, config)?;
    let n = config.order as usize;
    let result = if p.is_monomial() {
        kv(out, config.format, "method", "monomial");
        normal_dims(&p, n, config.budget)
    } else {
        kv(out, config.format, "method", "groebner");
        dims_of_quotient(&p, n, &groebner_config(config), config.budget).map(|(t, gb)| {
            kv(out, config.format, "basis", format!("{} elements, {}", gb.basis.len(), gb_status(&gb)));
            t
        })
    };
    match result {
        Ok(t) => {
            write_table(out, config.format, &t);
            Ok(())
        }
        Err(EnumerationError::Budget { budget, arity, completed }) => {
            write_table(out, config.format, &completed);
            Err(Failure::Budget(format!("node budget {budget} exhausted at arity {arity}")))
        }
        Err(EnumerationError::Groebner(e)) => Err(groebner_failure(*e)),
        Err(e) => Err(Failure::Invariant(e.to_string())),
    }
}

pub fn gb(path: &Path, config: &RunConfig, out: &mut String) -> Result<(), Failure> {
    header(out, "gb", Some(path), config, "");
    let p = load(path, config)?;
    let cfg = GroebnerConfig { keep_trail: true, ..groebner_config(config) };
    let (gb, failure) = match buchberger(&p, &cfg) {
        Ok(gb) => (gb, None),
        Err(GroebnerError::Budget { partial, budget, arity }) => {
            (*partial, Some(Failure::Budget(format!("reduction budget {budget} exhausted at arity {arity}"))))
        }
        Err(e) => return Err(groebner_failure(e)),
    };
    kv(out, config.format, "elements", gb.basis.len());
    kv(out, config.format, "status", gb_status(&gb));
    kv(out, config.format, "precedence", gb.order().precedence(&gb.alphabet).join(","));
    if !gb.finite {
        let _ = writeln!(
            out,
            "# caveat: the basis is truncated at arity cap {}; elements of higher arity may be missing",
            gb.arity_cap
        );
    }
    section(out, "basis");
    out.push_str(&gb.export());
    if let Some(f) = failure {
        return Err(f);
    }
    if gb.verify_trails(p.relations()) == Some(false) {
        return Err(Failure::Invariant("a basis element does not match its derivation".into()));
    }
    Ok(())
}

fn equation_failure(e: EquationError) -> Failure {
    match e {
        EquationError::NotShuffleRegular { .. } | EquationError::NotSymmetricRegular { .. } => {
            Failure::Hypothesis(e.to_string())
        }
        EquationError::NotMonomial | EquationError::WrongMode { .. } => Failure::Parse(e.to_string()),
        other => Failure::Invariant(other.to_string()),
    }
}

pub fn series(path: &Path, config: &RunConfig, out: &mut String) -> Result<(), Failure> {
    header(out, "series", Some(path), config, "");
    let p = load(path, config)?;
    let fmt = config.format;
    let order = config.order as usize;
    let m = if p.is_monomial() {
        kv(out, fmt, "input", "monomial");
        p.clone()
    } else {
        let gb = buchberger(&p, &groebner_config(config)).map_err(groebner_failure)?;
        kv(out, fmt, "input", format!("leading terms of a {} Groebner basis", gb_status(&gb)));
        if !gb.finite {
            let _ = writeln!(
                out,
                "# warning: incomplete Groebner basis; from arity {} on the series below bound the true one from above",
                gb.arity_cap
            );
        }
        leading_monomials(&gb)
    };
    let stamps = stamp_set(&m).map_err(equation_failure)?;
    kv(out, fmt, "stamps", stamps.len());
    let integral = match m.mode() {
        Mode::Planar => None,
        Mode::Shuffle => Some(build_shuffle_system(&m).map_err(equation_failure)?),
    };
    let polynomial: Option<EquationSystem> = match (&integral, m.mode()) {
        (None, _) => Some(build_planar_system(&m).map_err(equation_failure)?),
        (Some(sys), _) => match simplify_symmetric_regular(sys, &m) {
            Ok(s) => Some(s),
            Err(e) => {
                let _ = writeln!(out, "# note: no polynomial system: {e}");
                None
            }
        },
    };
    let primary = polynomial.as_ref().or(integral.as_ref()).expect("one system exists");
    section(out, "unknowns");
    for (u, s) in primary.unknowns.iter().zip(primary.stamp_names()) {
        kv(out, fmt, &u.name, s);
    }
    if let Some(sys) = &integral {
        section(out, "stamps");
        for (u, s) in sys.unknowns.iter().zip(sys.stamp_names()) {
            kv(out, fmt, &u.name, s);
        }
        section(out, "integral system");
        let _ = writeln!(out, "{sys}");
    }
    let solution = solve_series(primary, order).map_err(equation_failure)?;
    if let Some(sys) = &polynomial {
        section(out, "polynomial system");
        let _ = writeln!(out, "{sys}");
        for line in sys.integer_form() {
            kv(out, fmt, "integer form", line);
        }
        if let Some(int_sys) = &integral {
            let other = solve_series(int_sys, order).map_err(equation_failure)?;
            if other.total != solution.total {
                return Err(Failure::Invariant("integral and polynomial systems disagree".into()));
            }
        }
    }
    section(out, "series");
    kv(out, fmt, "total", &solution.total);
    let dims: Vec<String> = solution
        .total
        .dims()
        .iter()
        .skip(1)
        .map(|d| d.as_ref().map_or("?".to_string(), ToString::to_string))
        .collect();
    kv(out, fmt, "dims", dims.join(" "));
    if let Some(g) = solution.total.guess_rational() {
        kv(out, fmt, "rational guess", format!("{g} ({} spare coefficients)", g.spare));
    }
    if let Some(sys) = &polynomial {
        section(out, "algebraic equation");
        match eliminate(sys, DEFAULT_ELIMINATION_CAP) {
            Ok(e) => {
                if u64::from(e.degree) > e.bound {
                    return Err(Failure::Invariant(format!("degree {} exceeds the bound {}", e.degree, e.bound)));
                }
                kv(out, fmt, "equation", &e.equation);
                kv(out, fmt, "degree", format!("{} (bound {}, eliminant degree {})", e.degree, e.bound, e.eliminant_degree));
                kv(out, fmt, "selected at order", e.checked_order);
                let needed = e.equation.min_order();
                if order >= needed {
                    let ok = verify_algebraic(&e.equation, &solution.total).map_err(|x| Failure::Invariant(x.to_string()))?;
                    if !ok {
                        return Err(Failure::Invariant("the equation does not annihilate the series".into()));
                    }
                    kv(out, fmt, "verified to order", order);
                } else {
                    kv(out, fmt, "verified to order", format!("- (needs order {needed})"));
                }
            }
            Err(e) => {
                let _ = writeln!(out, "# note: elimination failed: {e}");
            }
        }
    }
    if let Some(sys) = &integral {
        section(out, "differential system");
        let ode = ode_from_system(sys).map_err(equation_failure)?;
        let _ = writeln!(out, "{ode}");
        let sol = solve_series(sys, order).map_err(equation_failure)?;
        if !ode.verify(&sol).map_err(equation_failure)? {
            return Err(Failure::Invariant("the differential system fails on the series".into()));
        }
        kv(out, fmt, "verified to order", order.saturating_sub(1));
    }
    Ok(())
}

pub fn bounds(path: &Path, config: &RunConfig, out: &mut String) -> Result<(), Failure> {
    header(out, "bounds", Some(path), config, "");
    let p = load(path, config)?;
    let fmt = config.format;
    let order = config.order as usize;
    let input = GsInput::from_presentation(&p);
    kv(out, fmt, "flavor", input.flavor);
    kv(out, fmt, "X", input.x.format("t"));
    kv(out, fmt, "R", input.r.format("t"));
    let table = bound_table(&p, order, &groebner_config(config), config.budget).map_err(bounds_failure)?;
    kv(
        out,
        fmt,
        "hypothesis",
        format!("t/f(t) nonnegative to order {order}: {}", if table.hypothesis { "holds" } else { "fails" }),
    );
    out.push_str("# caveat: gs_lower is a lower bound only where the hypothesis holds; partial_gb_upper rows not tagged exact or certified-below-cap are upper bounds\n");
    section(out, "table");
    match fmt {
        Format::Tsv => out.push_str(&table.to_tsv()),
        Format::Text => {
            for r in &table.rows {
                let _ = writeln!(
                    out,
                    "arity {}: gs_lower {} oracle {} partial_gb_upper {} free_upper {} [{}]",
                    r.arity,
                    r.gs_lower,
                    r.oracle.as_ref().map_or("-".into(), ToString::to_string),
                    r.partial_upper.as_ref().map_or("-".into(), |(d, _)| d.to_string()),
                    r.free_upper,
                    r.flags.join(",")
                );
            }
        }
    }
    let oracle: Vec<_> = table.rows.iter().map_while(|r| r.oracle.clone()).collect();
    let all_binary = p.alphabet().ids().all(|g| p.alphabet().arity(g) == 2);
    let mut failure = None;
    if all_binary && input.flavor == Flavor::Egf {
        section(out, "binary generators");
        match binary_bounds(p.alphabet().len() as u64, &input.r, order) {
            Ok(rep) => {
                if let Some(c) = rep.quadratic_condition {
                    kv(out, fmt, "quadratic condition d <= 3c^2/8", if c { "holds" } else { "fails" });
                }
                if let Some(s) = &rep.z0.exact {
                    kv(out, fmt, "z0 exact", s);
                }
                kv(out, fmt, "z0 lower", &rep.z0.lo);
                kv(out, fmt, "z0 upper", &rep.z0.hi);
                kv(out, fmt, "z0 estimate", format!("{:.15}", rep.z0.midpoint_f64()));
                out.push_str("# bracket columns are estimates of certified rational intervals; verdicts use the exact intervals\n");
                out.push_str("n\tarity\tstated_lower_estimate\tcorrected_lower_estimate\tupper\tinverse\tverdict\n");
                for r in &rep.rows {
                    let dim = oracle.get(r.n).map(from_biguint);
                    let verdict = match dim {
                        None => "-".to_string(),
                        Some(d) => {
                            let mut v = Vec::new();
                            if r.stated_lower.0 > d {
                                v.push("stated-lower-exceeds-dim");
                            } else if r.stated_lower.1 <= d {
                                v.push("stated-lower-holds");
                            }
                            if r.corrected_lower.1 <= d {
                                v.push("corrected-lower-holds");
                            } else if r.corrected_lower.0 > d {
                                v.push("corrected-lower-exceeds-dim");
                            }
                            if d <= r.upper {
                                v.push("upper-holds");
                            }
                            v.join(",")
                        }
                    };
                    let _ = writeln!(
                        out,
                        "{}\t{}\t{:.6}\t{:.6}\t{}\t{}\t{verdict}",
                        r.n,
                        r.n + 1,
                        to_f64(&r.stated_lower.0),
                        to_f64(&r.corrected_lower.0),
                        r.upper,
                        r.inverse
                    );
                }
            }
            Err(e) => {
                let _ = writeln!(out, "# {e}");
                failure = Some(bounds_failure(e));
            }
        }
    }
    if oracle.len() >= 4 {
        section(out, "growth");
        let rep = growth_report(&oracle, input.flavor).map_err(bounds_failure)?;
        out.push_str(&rep.to_string());
    }
    failure.map_or(Ok(()), Err)
}

fn bounds_failure(e: BoundsError) -> Failure {
    match e {
        BoundsError::Hypothesis(_) => Failure::Hypothesis(e.to_string()),
        BoundsError::BadInput(_) => Failure::Parse(e.to_string()),
        _ => Failure::Invariant(e.to_string()),
    }
}
