//! Parse-and-print checks shared by the fuzz targets and their seed tests.
//! Each function accepts arbitrary bytes, ignores input that does not
//! parse, and panics if accepted input does not survive a round trip.

use crate::element::parse_element;
use crate::monomials::{parse_monomial, Alphabet, MonomialOrder, Mode};
use crate::presentation::parse_presentation;
use crate::rational::parse_rational;
use crate::series::PowerSeries;

fn alphabets() -> [Alphabet; 2] {
    let pairs = [("m", 2), ("t", 3)];
    [
        Alphabet::from_pairs(Mode::Planar, &pairs).expect("valid alphabet"),
        Alphabet::from_pairs(Mode::Shuffle, &pairs).expect("valid alphabet"),
    ]
}

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

pub fn monomial(data: &[u8]) {
    let Some(s) = text(data) else { return };
    for a in alphabets() {
        if let Ok(t) = parse_monomial(s, &a) {
            let printed = a.format(&t);
            assert_eq!(parse_monomial(&printed, &a).as_ref(), Ok(&t), "{printed}");
        }
    }
}

pub fn element(data: &[u8]) {
    let Some(s) = text(data) else { return };
    for a in alphabets() {
        if let Ok(e) = parse_element(s, &a) {
            let printed = e.format(&a, &MonomialOrder::default_for(&a));
            assert_eq!(parse_element(&printed, &a).as_ref(), Ok(&e), "{printed}");
        }
    }
}

pub fn presentation(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(p) = parse_presentation(s) {
        let printed = p.to_file_string();
        assert_eq!(parse_presentation(&printed).as_ref(), Ok(&p), "{printed}");
    }
}

pub fn series(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(f) = s.parse::<PowerSeries>() {
        let printed = f.to_string();
        assert_eq!(printed.parse::<PowerSeries>().as_ref(), Ok(&f), "{printed}");
    }
    if let Some(r) = parse_rational(s) {
        assert_eq!(parse_rational(&r.to_string()), Some(r));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_samples_round_trip() {
        monomial(b"(m (t 1 2 3) 4)");
        monomial(b"(m - (m - -))");
        element(b"(m (m 1 2) 3) - 1/2 (m 1 (m 2 3))");
        presentation(b"mode: planar\ngenerators: m:2\nrelations:\n(m (m - -) -) - (m - (m - -))\n");
        series(b"egf 4; 0 1 -1/2 0 7/3");
        series(b"-3/6");
        monomial(&[0xff, 0xfe]);
    }
}
