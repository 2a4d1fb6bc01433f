//! Replays the checked-in fuzz seeds and a batch of random inputs through
//! the same round-trip checks the fuzz targets run.

use std::fs;
use std::path::Path;

use operad_core::roundtrip;
use proptest::prelude::*;

fn replay(target: &str, check: fn(&[u8])) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut n = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        check(&fs::read(&path).unwrap());
        n += 1;
    }
    assert!(n > 0, "no seeds in {}", dir.display());
}

#[test]
fn seeds_replay() {
    replay("monomial", roundtrip::monomial);
    replay("element", roundtrip::element);
    replay("presentation", roundtrip::presentation);
    replay("series", roundtrip::series);
}

proptest! {
    #[test]
    fn monomial_like_text(s in "[-()mt0-9 ]{0,40}") {
        roundtrip::monomial(s.as_bytes());
        roundtrip::element(s.as_bytes());
    }

    #[test]
    fn series_like_text(s in "(ogf|egf) [0-9]{1,2}; [-0-9/ ]{0,40}") {
        roundtrip::series(s.as_bytes());
    }

    #[test]
    fn arbitrary_bytes(data in proptest::collection::vec(any::<u8>(), 0..200)) {
        roundtrip::monomial(&data);
        roundtrip::element(&data);
        roundtrip::presentation(&data);
        roundtrip::series(&data);
    }
}
