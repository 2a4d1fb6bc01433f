use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_operad")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn dims_column(stdout: &str) -> Vec<String> {
    stdout
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("arity") && l.split('\t').count() == 3)
        .map(|l| l.split('\t').nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn associative_planar_dims_are_one() {
    let (code, out, _) = run(&["dims", corpus("ass.planar").to_str().unwrap(), "--order", "10"]);
    assert_eq!(code, 0);
    assert_eq!(dims_column(&out), vec!["1"; 10]);
    assert!(out.contains("# config order=10 cap=8 budget=10000000 format=tsv precedence=-"));
}

#[test]
fn n_operad_and_free_dims() {
    let (code, out, _) = run(&["dims", corpus("n-operad.shuffle").to_str().unwrap(), "--order", "6"]);
    assert_eq!(code, 0);
    assert_eq!(dims_column(&out), ["1", "2", "12", "114", "1500", "25290"]);
    let (code, out, _) = run(&["dims", corpus("magma.shuffle").to_str().unwrap(), "--order", "5"]);
    assert_eq!(code, 0);
    assert_eq!(dims_column(&out), ["1", "2", "12", "120", "1680"]);
}

#[test]
fn raw_identity_gives_the_same_dims() {
    let (code, out, _) = run(&["dims", corpus("upper-triangular.shuffle").to_str().unwrap(), "--order", "5"]);
    assert_eq!(code, 0);
    assert_eq!(dims_column(&out), ["1", "2", "12", "114", "1500"]);
}

#[test]
fn gb_of_a_monomial_file_echoes_it() {
    let (code, out, _) = run(&["gb", corpus("n-operad.shuffle").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("elements\t6\nstatus\tfinite\n"));
    assert!(out.contains("(mu (alpha 1 2) (alpha 3 4))\n"));
}

#[test]
fn series_of_the_n_operad() {
    let (code, out, _) = run(&["series", corpus("n-operad.shuffle").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("integer form\t2*y_1 = 3*y_1^2 + 4*z*y_1 + z^2"));
    assert!(out.contains("413/4"));
    assert!(out.contains("equation\t3*y^2 + 2*z*y - z^2 - 4*y + 4*z = 0"));
    assert!(out.contains("## differential system"));
}

#[test]
fn bounds_for_alia() {
    let (code, out, _) = run(&["bounds", corpus("alia.shuffle").to_str().unwrap(), "--order", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("z0 exact\t3 - sqrt(3)"));
    assert!(out.contains("4\t100\t100\t100\t120\tpinched,exact"));
    assert!(!out.contains("limit"));
}

#[test]
fn output_is_reproducible() {
    let path = corpus("n-operad.shuffle");
    let args = ["bounds", path.to_str().unwrap(), "--order", "6"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn text_format() {
    let (code, out, _) = run(&["dims", corpus("ass.shuffle").to_str().unwrap(), "--order", "4", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("arity 4: 24 (exact)"));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let f = file("mode: shuffle\ngenerators: m:2\nrelations:\n(m (m 1 2) 3\n");
    let (code, _, err) = run(&["dims", f.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
    let (code, _, _) = run(&["dims", corpus("alia.shuffle").to_str().unwrap(), "--precedence", "a,zz"]);
    assert_eq!(code, 2);
}

#[test]
fn regularity_and_hypothesis_failures_exit_3() {
    let f = file("mode: shuffle\ngenerators: m:2\nrelations:\n(m (m 1 2) 3)\n");
    let (code, _, err) = run(&["series", f.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("not shuffle regular"), "{err}");
    let f = file("mode: shuffle\ngenerators: a:2, b:2\nrelations:\n(a (a 1 2) 3)\n(b (b 1 2) 3)\n");
    let (code, _, _) = run(&["bounds", f.path().to_str().unwrap(), "--order", "4"]);
    assert_eq!(code, 3);
}

#[test]
fn budget_exhaustion_exits_4_and_keeps_rows() {
    let (code, out, _) = run(&["dims", corpus("magma.shuffle").to_str().unwrap(), "--budget", "100"]);
    assert_eq!(code, 4);
    assert!(dims_column(&out).starts_with(&["1".to_string(), "2".to_string()]));
}

#[test]
fn selftest_passes_and_is_seeded() {
    let a = run(&["selftest", "--seed", "7", "--cases", "5"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert!(a.1.contains("passed 5/5"));
    assert_eq!(a, run(&["selftest", "--seed", "7", "--cases", "5"]));
}
