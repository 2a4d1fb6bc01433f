//! S-expression reader for tree monomials.
//!
//! ```text
//! tree := leaf | "(" name tree+ ")"
//! leaf := [1-9][0-9]*      (shuffle)
//!       | "-"              (planar placeholder; numbers 1..n in order also accepted)
//! ```

use super::{Alphabet, Mode, Tree};

const MAX_NESTING: usize = 512;
const MAX_LEAF_LABEL: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("generator '{name}' has arity {expected} but was given {found} arguments")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("bad leaf labels: {0}")]
    Leaves(String),
    #[error("not a shuffle monomial: at node {node} the minimal leaf is not leftmost or sibling minima are not increasing")]
    ShuffleViolation { node: String },
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn advance(&mut self, bytes: usize) {
        self.pos = (self.pos + bytes).min(self.src.len());
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest.char_indices().find(|&(_, c)| !f(c)).map(|(i, _)| i).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    /// Reads one tree; leaves keep whatever labels were written (0 for `-`).
    pub(crate) fn tree(&mut self, alphabet: &Alphabet, nesting: usize) -> Result<Tree, ParseError> {
        if nesting > MAX_NESTING {
            return Err(self.error("nesting too deep"));
        }
        match self.peek() {
            None => Err(self.error("unexpected end of input, expected a tree")),
            Some('(') => {
                self.bump();
                self.skip_ws();
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
                if name.is_empty() || !super::valid_identifier(name) {
                    return Err(self.error("expected a generator name after '('"));
                }
                let g = alphabet.lookup(name).ok_or_else(|| ParseError::UnknownGenerator(name.to_string()))?;
                let mut children = Vec::new();
                loop {
                    match self.peek() {
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        None => return Err(self.error("unclosed '('")),
                        _ => children.push(self.tree(alphabet, nesting + 1)?),
                    }
                }
                if children.is_empty() {
                    return Err(self.error(format!("generator '{name}' applied to nothing")));
                }
                let expected = alphabet.arity(g);
                if children.len() != expected {
                    return Err(ParseError::ArityMismatch { name: name.to_string(), expected, found: children.len() });
                }
                Ok(Tree::Node(g, children))
            }
            Some('-') => {
                self.bump();
                Ok(Tree::Leaf(0))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.take_while(|c| c.is_ascii_digit());
                if digits.starts_with('0') {
                    self.pos = start;
                    return Err(self.error("leaf labels start at 1"));
                }
                match digits.parse::<u32>() {
                    Ok(v) if v <= MAX_LEAF_LABEL => Ok(Tree::Leaf(v)),
                    _ => {
                        self.pos = start;
                        Err(self.error("leaf label too large"))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
        }
    }
}

/// Turns raw leaves into the canonical labelling for the alphabet's mode and
/// validates the result.
pub(crate) fn finish_tree(raw: Tree, alphabet: &Alphabet) -> Result<Tree, ParseError> {
    let labels = raw.leaf_labels();
    let placeholders = labels.iter().filter(|&&l| l == 0).count();
    let tree = match alphabet.mode() {
        Mode::Planar => {
            if placeholders != 0 && placeholders != labels.len() {
                return Err(ParseError::Leaves("mixing '-' with numbered leaves".into()));
            }
            if placeholders == 0 && !raw.is_planar_numbered() {
                return Err(ParseError::Leaves("planar leaves must be '-' or 1..n in order".into()));
            }
            raw.planar_shape()
        }
        Mode::Shuffle => {
            if placeholders != 0 {
                if labels.len() == 1 {
                    // a bare '-' is the identity
                    Tree::identity()
                } else {
                    return Err(ParseError::Leaves("shuffle monomials need numbered leaves".into()));
                }
            } else {
                raw
            }
        }
    };
    alphabet.validate(&tree)?;
    Ok(tree)
}

pub fn parse_monomial(text: &str, alphabet: &Alphabet) -> Result<Tree, ParseError> {
    let mut cur = Cursor::new(text);
    let raw = cur.tree(alphabet, 0)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after tree"));
    }
    finish_tree(raw, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::Mode;

    fn shuffle2() -> Alphabet {
        Alphabet::from_pairs(Mode::Shuffle, &[("m", 2)]).unwrap()
    }

    #[test]
    fn planar_left_comb() {
        let a = Alphabet::from_pairs(Mode::Planar, &[("m", 2)]).unwrap();
        let t = parse_monomial("(m (m - -) -)", &a).unwrap();
        assert_eq!(t.arity(), 3);
        assert_eq!(t.weight(), 2);
        assert_eq!(t, parse_monomial("(m (m 1 2) 3)", &a).unwrap());
        assert_eq!(a.format(&t), "(m (m - -) -)");
    }

    #[test]
    fn shuffle_min_leaf_must_be_leftmost() {
        let err = parse_monomial("(m 2 1)", &shuffle2()).unwrap_err();
        assert!(matches!(err, ParseError::ShuffleViolation { .. }), "{err}");
        assert!(parse_monomial("(m 1 2)", &shuffle2()).is_ok());
    }

    #[test]
    fn reports_arity_and_label_errors() {
        let a = shuffle2();
        assert!(matches!(parse_monomial("(m 1 2 3)", &a), Err(ParseError::ArityMismatch { .. })));
        assert!(matches!(parse_monomial("(m 1 1)", &a), Err(ParseError::Leaves(_))));
        assert!(matches!(parse_monomial("(m 1 3)", &a), Err(ParseError::Leaves(_))));
        assert!(matches!(parse_monomial("(q 1 2)", &a), Err(ParseError::UnknownGenerator(_))));
        assert!(matches!(parse_monomial("(m 1 2", &a), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_monomial("(m 1 2))", &a), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_monomial("(m 0 1)", &a), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn identity_parses() {
        assert_eq!(parse_monomial("1", &shuffle2()).unwrap(), Tree::identity());
        let p = shuffle2().with_mode(Mode::Planar);
        assert_eq!(parse_monomial("-", &p).unwrap(), Tree::identity());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let a = shuffle2();
        let text = "(m ".repeat(5000);
        assert!(parse_monomial(&text, &a).is_err());
    }
}
