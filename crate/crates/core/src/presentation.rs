//! Operad presentations and their text file format.
//!
//! ```text
//! # comment
//! mode: shuffle
//! generators: mu:2, alpha:2
//! precedence: alpha, mu        (optional, largest first)
//! relations:
//! (mu (alpha 1 2) (alpha 3 4))
//! (b (a 1 2) 3) + (b 1 (a 2 3)) - (b (a 1 3) 2)
//! ```

use crate::element::{parse_element, ElementError, OperadElement};
use crate::monomials::{Alphabet, AlphabetError, GeneratorSignature, Mode, MonomialOrder, OrderError, Tree};

const MAX_FILE_BYTES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Element { line: usize, source: ElementError },
    #[error("line {line}: {source}")]
    Alphabet { line: usize, source: AlphabetError },
    #[error("line {line}: {source}")]
    Order { line: usize, source: OrderError },
    #[error("missing '{0}' section")]
    Missing(&'static str),
    #[error("input too large")]
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    precedence: Vec<String>,
    relations: Vec<OperadElement>,
}

impl Presentation {
    /// Zero relations are dropped.
    pub fn new(alphabet: Alphabet, relations: Vec<OperadElement>) -> Self {
        let relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Self { alphabet, precedence: Vec::new(), relations }
    }

    pub fn monomial(alphabet: Alphabet, monomials: Vec<Tree>) -> Self {
        Self::new(alphabet, monomials.into_iter().map(OperadElement::monomial).collect())
    }

    pub fn with_precedence(mut self, precedence: Vec<String>) -> Result<Self, OrderError> {
        let names: Vec<&str> = precedence.iter().map(String::as_str).collect();
        MonomialOrder::with_precedence(&self.alphabet, &names)?;
        self.precedence = precedence;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mode(&self) -> Mode {
        self.alphabet.mode()
    }

    pub fn relations(&self) -> &[OperadElement] {
        &self.relations
    }

    pub fn precedence(&self) -> &[String] {
        &self.precedence
    }

    /// The order declared by the file (declaration order if none given).
    pub fn order(&self) -> MonomialOrder {
        let names: Vec<&str> = self.precedence.iter().map(String::as_str).collect();
        MonomialOrder::with_precedence(&self.alphabet, &names).expect("precedence validated on construction")
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(OperadElement::is_monomial)
    }

    /// The relation monomials of a monomial presentation, deduplicated.
    pub fn relation_monomials(&self) -> Vec<Tree> {
        let mut v: Vec<Tree> = self.relations.iter().flat_map(|r| r.monomials().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Largest depth (in internal nodes) of a relation monomial; 0 if none.
    pub fn max_relation_depth(&self) -> usize {
        self.relations.iter().flat_map(|r| r.monomials()).map(Tree::depth).max().unwrap_or(0)
    }

    pub fn max_relation_arity(&self) -> usize {
        self.relations.iter().filter_map(OperadElement::arity).max().unwrap_or(1)
    }

    /// Canonical file text; parses back to an equal presentation.
    pub fn to_file_string(&self) -> String {
        let order = self.order();
        let gens: Vec<String> = self.alphabet.generators().iter().map(|g| format!("{}:{}", g.name, g.arity)).collect();
        let mut out = format!("mode: {}\ngenerators: {}\n", self.mode(), gens.join(", "));
        if !self.precedence.is_empty() {
            out.push_str(&format!("precedence: {}\n", self.precedence.join(", ")));
        }
        out.push_str("relations:\n");
        for r in &self.relations {
            out.push_str(&r.format(&self.alphabet, &order));
            out.push('\n');
        }
        out
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    if text.len() > MAX_FILE_BYTES {
        return Err(PresentationError::TooLarge);
    }
    let mut mode: Option<(usize, Mode)> = None;
    let mut gens: Option<(usize, Vec<GeneratorSignature>)> = None;
    let mut precedence: Option<(usize, Vec<String>)> = None;
    let mut relation_lines: Option<Vec<(usize, &str)>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: String| PresentationError::Syntax { line: line_no, msg };
        if let Some(rel) = relation_lines.as_mut() {
            rel.push((line_no, line));
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(syntax(format!("expected 'key: value', found '{line}'")));
        };
        let value = value.trim();
        match key.trim() {
            "mode" => {
                if mode.is_some() {
                    return Err(syntax("duplicate 'mode'".into()));
                }
                mode = Some((line_no, value.parse().map_err(syntax)?));
            }
            "generators" => {
                if gens.is_some() {
                    return Err(syntax("duplicate 'generators'".into()));
                }
                let mut list = Vec::new();
                for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (name, arity) =
                        item.split_once(':').ok_or_else(|| syntax(format!("expected 'name:arity', found '{item}'")))?;
                    let arity: usize =
                        arity.trim().parse().map_err(|_| syntax(format!("bad arity in '{item}'")))?;
                    list.push(GeneratorSignature::new(name.trim(), arity));
                }
                gens = Some((line_no, list));
            }
            "precedence" => {
                if precedence.is_some() {
                    return Err(syntax("duplicate 'precedence'".into()));
                }
                let names = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                precedence = Some((line_no, names));
            }
            "relations" => {
                let mut rel = Vec::new();
                if !value.is_empty() {
                    rel.push((line_no, value));
                }
                relation_lines = Some(rel);
            }
            other => return Err(syntax(format!("unknown section '{other}'"))),
        }
    }
    let (_, mode) = mode.ok_or(PresentationError::Missing("mode"))?;
    let (gen_line, gens) = gens.ok_or(PresentationError::Missing("generators"))?;
    let alphabet = Alphabet::new(mode, gens).map_err(|source| PresentationError::Alphabet { line: gen_line, source })?;
    let mut relations = Vec::new();
    for (line, text) in relation_lines.unwrap_or_default() {
        let e = parse_element(text, &alphabet).map_err(|source| PresentationError::Element { line, source })?;
        relations.push(e);
    }
    let p = Presentation::new(alphabet, relations);
    match precedence {
        Some((line, names)) => p.with_precedence(names).map_err(|source| PresentationError::Order { line, source }),
        None => Ok(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N_OPERAD: &str = "\
# two binary generators
mode: shuffle
generators: mu:2, alpha:2
relations:
(mu (alpha 1 2) (alpha 3 4))
(mu (alpha 1 3) (alpha 2 4))   # inline comment
(mu (alpha 1 4) (alpha 2 3))
(alpha (alpha 1 2) (alpha 3 4))
(alpha (alpha 1 3) (alpha 2 4))
(alpha (alpha 1 4) (alpha 2 3))
";

    #[test]
    fn reads_a_monomial_presentation() {
        let p = parse_presentation(N_OPERAD).unwrap();
        assert_eq!(p.mode(), Mode::Shuffle);
        assert_eq!(p.alphabet().len(), 2);
        assert_eq!(p.relations().len(), 6);
        assert!(p.is_monomial());
        assert_eq!(p.max_relation_depth(), 2);
        assert_eq!(p.max_relation_arity(), 4);
        assert_eq!(parse_presentation(&p.to_file_string()).unwrap(), p);
    }

    #[test]
    fn precedence_round_trips() {
        let text = "mode: planar\ngenerators: m:2, n:2\nprecedence: n\nrelations:\n(m (m - -) -) - (m - (m - -))\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.precedence(), ["n".to_string()]);
        assert!(!p.is_monomial());
        assert_eq!(parse_presentation(&p.to_file_string()).unwrap(), p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "mode: shuffle\ngenerators: m:2\nrelations:\n(m 1 2)\n(m 2 1)\n";
        match parse_presentation(bad) {
            Err(PresentationError::Element { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
        let bad_gen = "mode: shuffle\n\ngenerators: m:1\nrelations:\n";
        assert!(matches!(parse_presentation(bad_gen), Err(PresentationError::Alphabet { line: 3, .. })));
        assert!(matches!(parse_presentation("mode: weird\n"), Err(PresentationError::Syntax { line: 1, .. })));
        assert!(matches!(parse_presentation("generators: m:2\n"), Err(PresentationError::Missing("mode"))));
        let bad_prec = "mode: planar\ngenerators: m:2\nprecedence: q\n";
        assert!(matches!(parse_presentation(bad_prec), Err(PresentationError::Order { line: 3, .. })));
    }

    #[test]
    fn no_relations_section_means_free() {
        let p = parse_presentation("mode: planar\ngenerators: m:2\n").unwrap();
        assert!(p.relations().is_empty());
        assert!(p.is_monomial());
        assert_eq!(p.max_relation_depth(), 0);
    }
}
