use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn bispan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bispan")).args(args).env_remove("BISPAN_SEED").output().expect("binary runs")
}

fn with_input(file: &str, args: &[&str]) -> Output {
    let path = fixtures().join(file);
    let mut all = vec!["--input", path.to_str().unwrap()];
    all.extend_from_slice(args);
    bispan(&all)
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("golden").join(name)).unwrap()
}

#[test]
fn doubling_then_squaring_is_four_x_squared() {
    let out = stdout(&with_input("polynomials.json", &["compose", "doubling", "squaring"]));
    assert!(out.contains("canonical: 4*x^2"), "{out}");
    assert_eq!(out, golden("compose_doubling_squaring.txt"));
    let other = stdout(&with_input("polynomials.json", &["compose", "squaring", "doubling"]));
    assert!(other.contains("canonical: 2*x^2"), "{other}");
}

#[test]
fn composite_document_round_trips() {
    let out = stdout(&with_input("polynomials.json", &["compose", "doubling", "squaring", "--format", "json"]));
    assert_eq!(out, golden("compose_doubling_squaring.json"));
    let dir = std::env::temp_dir().join(format!("bispan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("composite.json");
    std::fs::write(&path, &out).unwrap();
    let p = path.to_str().unwrap();
    let again = stdout(&bispan(&["--input", p, "render", "--format", "json"]));
    assert_eq!(again, out);
    let value = stdout(&bispan(&["--input", p, "eval", "squaring_after_doubling", "3"]));
    assert_eq!(value, "36\n");
}

#[test]
fn s3_coset_table() {
    let out = stdout(&bispan(&["cosets", "--group", "S3", "--h", "C2", "--k", "C2", "--l", "S3"]));
    assert_eq!(out, golden("cosets_s3.txt"));
    assert!(out.contains(": 2 rows"));
    // |C2\S3/C2| = 2, with orbit sizes 3 and 6 summing to 9 = 3·3.
    let sizes: Vec<usize> =
        out.lines().skip(2).map(|l| l.split_whitespace().last().unwrap().parse().unwrap()).collect();
    assert_eq!(sizes, vec![3, 6]);
}

#[test]
fn c2_norm_table() {
    let out = stdout(&bispan(&["norm", "--group", "C2", "--h", "e", "--k", "C2", "--element", "2*e"]));
    assert_eq!(out, golden("norm_c2.txt"));
    assert!(out.ends_with("total: 2·[C2/C2] + 1·[C2/e]\n"));
    for n in 0..=6usize {
        let element = format!("{n}*e");
        let out = stdout(&bispan(&["norm", "--group", "C2", "--h", "e", "--k", "C2", "--element", &element]));
        let free = (n * n - n) / 2;
        let expected = match (n, free) {
            (0, _) => "0".to_string(),
            (_, 0) => format!("{n}·[C2/C2]"),
            _ => format!("{n}·[C2/C2] + {free}·[C2/e]"),
        };
        assert!(out.ends_with(&format!("total: {expected}\n")), "{n}: {out}");
    }
}

#[test]
fn tropical_evaluation() {
    let out = stdout(&with_input("polynomials.json", &["eval", "squaring", "3", "--semiring", "tropical"]));
    assert_eq!(out, golden("eval_tropical.txt"));
    assert_eq!(out, "6\n");
    let alias = stdout(&with_input("polynomials.json", &["eval", "doubling", "inf", "--semiring", "trop"]));
    assert_eq!(alias, "inf\n");
    let poly = stdout(&with_input("polynomials.json", &["eval", "squaring", "--semiring", "poly"]));
    assert_eq!(poly, "x^2\n");
}

#[test]
fn goldens_are_byte_identical_across_runs() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["compose", "doubling", "squaring"],
        vec!["compose", "doubling", "squaring", "--format", "json"],
        vec!["eval", "squaring", "3", "--semiring", "tropical"],
        vec!["render", "--format", "dot"],
    ];
    for args in runs {
        let a = with_input("polynomials.json", &args);
        let b = with_input("polynomials.json", &args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let check = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_bispan"))
            .args(["check", "norm", "--group", "C2", "--max-size", "3", "--samples", "20", "--format", "json"])
            .env("BISPAN_SEED", seed)
            .output()
            .unwrap()
    };
    let first = check("7");
    assert_eq!(String::from_utf8(first.stdout.clone()).unwrap(), golden("check_norm_c2.json"));
    assert_eq!(first.stdout, check("7").stdout);
}

#[test]
fn identity_is_a_unit() {
    let left = stdout(&with_input("polynomials.json", &["compose", "identity", "squaring"]));
    let right = stdout(&with_input("polynomials.json", &["compose", "squaring", "identity"]));
    assert!(left.contains("canonical: x^2"), "{left}");
    assert!(right.contains("canonical: x^2"), "{right}");
}

#[test]
fn boundary_mismatch_exits_two() {
    let out = with_input("mismatch.json", &["compose", "on_x", "on_y"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mismatch.json:12:5:"), "{err}");
    assert!(err.contains("'on_x'") && err.contains("'on_y'"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bispan(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(with_input("polynomials.json", &["eval", "squaring", "1", "2"]).status.code(), Some(2));
    assert_eq!(with_input("polynomials.json", &["eval", "squaring", "x"]).status.code(), Some(2));
    assert_eq!(with_input("missing.json", &["render"]).status.code(), Some(2));
    assert_eq!(bispan(&["norm", "--group", "Q8", "--h", "e", "--k", "G"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_bispan")).args(["check", "norm"]).env("BISPAN_SEED", "abc").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_suites_pass_at_small_size() {
    for suite in ["universal-property", "associativity", "functoriality", "degree", "splitting"] {
        let out = stdout(&bispan(&["check", suite, "--max-size", "2", "--samples", "10"]));
        assert!(out.starts_with(&format!("{suite}: pass")), "{out}");
    }
    let out = stdout(&bispan(&["check", "double-coset", "--group", "S3"]));
    assert!(out.starts_with("double-coset: pass"), "{out}");
}

#[test]
fn distributivity_diagram_sizes() {
    let out = stdout(&with_input("polynomials.json", &["dist", "two_id", "two_to_one", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sizes"]["w"], 1);
    assert_eq!(v["sizes"]["f*w"], 2);
}
