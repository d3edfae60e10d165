mod common;

use common::{expsum, rng};
use fermat_core::fixtures::{self, FIXTURES};
use fermat_core::parser::{parse_expr, parse_manifest, print_expr, print_manifest};
use fermat_core::systems::{verify, VerifyOptions};
use fermat_core::Error;

#[test]
fn printed_sums_parse_back_exactly() {
    let mut g = rng(0x5eed);
    for case in 0..1000 {
        let dim = 1 + case % 4;
        let x = expsum(&mut g, dim);
        let text = print_expr(&x);
        let y = parse_expr(&text, dim).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(y, x, "case {case}: {text}");
        assert_eq!(print_expr(&y), text);
    }
}

#[test]
fn shipped_fixtures_match_their_builders() {
    for f in FIXTURES {
        let built = print_manifest(&(f.build)().unwrap());
        assert_eq!(
            f.text, built,
            "{} is stale; run `cargo run -p fermat-core --example regen`",
            f.name
        );
    }
}

#[test]
fn shipped_fixtures_reprint_byte_identically() {
    for f in FIXTURES {
        let doc = f.parse().unwrap();
        assert_eq!(print_manifest(&doc), f.text, "{}", f.name);
    }
}

#[test]
fn shipped_fixtures_meet_their_expected_outcome() {
    for f in FIXTURES {
        let doc = f.parse().unwrap();
        let report = verify(&doc.manifest, &doc.options(&VerifyOptions::default())).unwrap();
        let expected = doc.expected.expect("fixtures record an expected outcome");
        assert!(
            expected.matches(report.pass),
            "{}:\n{}",
            f.name,
            report.to_text()
        );
    }
}

#[test]
fn every_fixture_file_is_registered() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let mut on_disk: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".fde"))
        .collect();
    on_disk.sort();
    let mut known: Vec<String> = FIXTURES.iter().map(|f| format!("{}.fde", f.name)).collect();
    known.sort();
    assert_eq!(on_disk, known);
    assert!(fixtures::find("nope").is_none());
}

#[test]
fn manifest_errors_carry_locations() {
    let good = FIXTURES[0].text;
    let bad = good
        .replacen("f1=", "f1=exp(z1) + ", 1)
        .replacen("exp(z1) + ", "exp(z1) + )", 1);
    match parse_manifest(&bad) {
        Err(Error::Parse { line, col, .. }) => {
            let want = bad.lines().position(|l| l.starts_with("f1=")).unwrap() + 1;
            assert_eq!(line, want);
            assert!(col > 3);
        }
        other => panic!("expected a located parse error, got {other:?}"),
    }
    let unknown = format!("{good}colour=blue\n");
    assert!(matches!(
        parse_manifest(&unknown),
        Err(Error::Parse { .. } | Error::Manifest(_))
    ));
}

#[test]
fn expression_errors() {
    for (text, needle) in [
        ("exp(exp(z1))", "nested exp"),
        ("z3", "z3"),
        ("z1^65", ""),
        ("1/z1", ""),
        ("log(-1)", ""),
        ("(z1", ""),
    ] {
        let err = parse_expr(text, 2).unwrap_err().to_string();
        assert!(err.contains(needle), "{text}: {err}");
    }
}

#[test]
fn tiny_coefficients_survive() {
    for text in [
        "1e-13*exp(z1)",
        "(-1.25 + 1.5308084989341916e-16*i)*exp(z1)",
        "3e-300",
    ] {
        let x = parse_expr(text, 1).unwrap();
        assert!(!x.is_zero(), "{text}");
        assert_eq!(print_expr(&x), text);
    }
}
