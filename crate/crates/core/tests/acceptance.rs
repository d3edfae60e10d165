//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{complex, expsum, point, rel, richardson, rng};
use fermat_core::algebra::{cplx, ExpSum, I};
use fermat_core::cli;
use fermat_core::families::{
    draw, BRelation, CaseLabel, PrefactorPower, T1_B_RELATION, T2_PREFACTOR_POWER,
};
use fermat_core::fixtures;
use fermat_core::parser::{parse_expr, parse_manifest, print_expr, print_manifest};
use fermat_core::shiftinv::{
    build_invariant, check_shift_invariant, kernel_basis, InvariantPolySpec,
};
use fermat_core::systems::{verify, ResidualReport, Sampling, SolutionManifest, VerifyOptions};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts(tol: f64) -> VerifyOptions {
    VerifyOptions {
        tol,
        sampling: Sampling {
            num_points: 200,
            radius: 0.5,
            ..Sampling::default()
        },
    }
}

fn build(name: &str) -> Result<SolutionManifest, String> {
    let f = fixtures::require(name).map_err(|e| e.to_string())?;
    (f.build)()
        .map(|d| d.manifest)
        .map_err(|e| format!("{name}: {e}"))
}

fn verify_at(m: &SolutionManifest, tol: f64) -> Result<ResidualReport, String> {
    verify(m, &opts(tol)).map_err(|e| e.to_string())
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
fn fermat(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("fermat").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn example1() -> Outcome {
    let start = Instant::now();
    let m = build("example1")?;
    let r = verify_at(&m, 1e-9)?;
    let elapsed = start.elapsed();
    ensure(r.symbolic_zero(), || "symbolic check failed".into())?;
    ensure(r.pass && r.max_rel_residual() < 1e-9, || {
        format!("max_rel_residual {:.3e}", r.max_rel_residual())
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max_rel_residual {:.2e} in {:.1?}",
        r.max_rel_residual(),
        elapsed
    ))
}

fn pdd_examples() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["example3", "example4", "example5"] {
        let r = verify_at(&build(name)?, 1e-9)?;
        ensure(r.pass, || format!("{name} fails:\n{}", r.to_text()))?;
        worst = worst.max(r.max_rel_residual());
    }

    let cases: [(&str, Vec<&str>, Vec<&str>); 3] = [
        (
            "example3",
            vec![
                "construct",
                "t2.i",
                "--k",
                "1",
                "--xi1",
                "2",
                "--xi2",
                "2",
                "--L",
                "2*z1 + z2",
                "--H",
                "0",
                "--B1",
                "pi*i",
                "--B2",
                "pi*i",
                "--direction",
                "(1, 0)",
            ],
            vec![
                "e^{L(c)} = -(a1/2)^{2k}(xi1^2-1)(xi2^2-1)/((xi1^2+1)(xi2^2+1)): value=",
                "required=-0.36 ",
            ],
        ),
        (
            "example4",
            vec![
                "construct",
                "t2.ii.a",
                "--k",
                "2",
                "--L1",
                "z1 + z2",
                "--L2",
                "2*z1 + z2",
                "--c",
                "(2*log(2), pi*i/2 - 2*log(2))",
                "--B1",
                "2*pi*i",
                "--B2",
                "pi*i",
                "--B3",
                "pi*i",
                "--B4",
                "pi*i",
            ],
            vec![
                "e^{L1(c)} = i*a11^k: value=",
                "required=i ",
                "e^{L2(c)} = i*a21^k: value=",
                "required=4*i ",
                "e^{B1-B2} = -1:",
                "e^{B3-B4} = 1:",
            ],
        ),
        (
            "example5",
            vec![
                "construct",
                "t2.iii.a",
                "--k",
                "1",
                "--L1",
                "2*z1 + 3*z2",
                "--L2",
                "2*z1 - z2",
                "--H1",
                "z2^3",
                "--H2",
                "z2^5",
                "--c",
                "(log(2)/2, 0)",
                "--B1",
                "pi*i",
                "--B2",
                "pi*i/2",
                "--B3",
                "pi*i/2",
                "--B4",
                "pi*i",
            ],
            vec![
                "e^{L1(c)} = a11^k: value=",
                "e^{L2(c)} = a21^k: value=",
                "required=2 ",
                "e^{B1-B2} = i:",
                "e^{B3-B4} = -i:",
            ],
        ),
    ];
    for (name, args, quotes) in cases {
        let (code, out, err) = fermat(&args);
        ensure(code == 0, || {
            format!("construct for {name} exited {code}: {err}")
        })?;
        for q in quotes {
            ensure(out.contains(q), || {
                format!("{name}: `{q}` missing from\n{out}")
            })?;
        }
        let doc = parse_manifest(&out).map_err(|e| e.to_string())?;
        let r = verify_at(&doc.manifest, 1e-9)?;
        ensure(r.pass, || format!("constructed {name} fails"))?;
        worst = worst.max(r.max_rel_residual());
    }
    Ok(format!(
        "3 fixtures and 3 CLI constructions, worst residual {worst:.2e}"
    ))
}

fn errata() -> Outcome {
    let mut notes = Vec::new();
    for (printed, corrected) in [
        ("example2_as_printed", "example2_corrected"),
        ("example6_as_printed", "example6_corrected"),
        ("example7_as_printed", "example7_corrected"),
    ] {
        let f = fixtures::require(printed).map_err(|e| e.to_string())?;
        let doc = f.parse().map_err(|e| e.to_string())?;
        let r = verify(&doc.manifest, &doc.options(&VerifyOptions::default()))
            .map_err(|e| e.to_string())?;
        let expected = doc
            .expected
            .ok_or("erratum fixture without expected outcome")?;
        ensure(expected.matches(r.pass), || {
            format!("{printed}: recorded outcome changed")
        })?;
        let c = verify_at(&build(corrected)?, 1e-9)?;
        ensure(c.pass, || format!("{corrected} fails:\n{}", c.to_text()))?;
        notes.push(format!(
            "{printed} {} ({:.1e}), corrected {:.1e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.max_rel_residual(),
            c.max_rel_residual()
        ));
    }
    Ok(notes.join("; "))
}

fn sweep() -> Outcome {
    let start = Instant::now();
    let labels = CaseLabel::all();
    let mut worst: f64 = 0.0;
    for &label in &labels {
        for seed in 0..100 {
            let c = draw(label, seed).map_err(|e| format!("{label} seed {seed}: {e}"))?;
            let r = verify_at(&c.manifest, 1e-8)?;
            ensure(r.pass, || format!("{label} seed {seed}:\n{}", r.to_text()))?;
            worst = worst.max(r.max_rel_residual());
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} labels x 100 draws, worst residual {worst:.2e} in {:.1?}",
        labels.len(),
        elapsed
    ))
}

fn ambiguity_pins() -> Outcome {
    let b = common::b_relation_wins(50);
    ensure(b == [50, 0], || format!("B-relation wins {b:?}"))?;
    ensure(T1_B_RELATION == BRelation::Statement, || {
        "pinned B-relation differs".into()
    })?;
    let p = common::prefactor_wins(50);
    ensure(p == [0, 50], || format!("prefactor wins {p:?}"))?;
    ensure(T2_PREFACTOR_POWER == PrefactorPower::TwoK, || {
        "pinned prefactor differs".into()
    })?;
    Ok(
        "B1-B2: stated formula 50/50, variant 0/50; prefactor: (a1/2)^{2k} 50/50, (a1/2)^k 0/50"
            .into(),
    )
}

fn operators() -> Outcome {
    let mut g = rng(0xacce);
    let mut worst_fd: f64 = 0.0;
    for case in 0..50 {
        let dim = 1 + case % 3;
        let f = expsum(&mut g, dim);
        let z = point(&mut g, dim, 0.5);
        for axis in 0..dim {
            let exact = f
                .derive(axis + 1, 1)
                .map_err(|e| e.to_string())?
                .evaluate(&z)
                .unwrap();
            worst_fd = worst_fd.max(rel(richardson(&f, &z, axis, 1e-3), exact));
        }
    }
    ensure(worst_fd <= 1e-6, || {
        format!("Richardson error {worst_fd:.2e}")
    })?;

    let mut worst_inv: f64 = 0.0;
    for _ in 0..100 {
        let dim = g.gen_range(2..=4);
        let c = point(&mut g, dim, 2.0);
        let basis = kernel_basis(&c).map_err(|e| e.to_string())?;
        let mut spec = InvariantPolySpec::new();
        for _ in 0..g.gen_range(1..=3) {
            let w: Vec<_> = (0..dim - 1).map(|_| complex(&mut g, 1.0)).collect();
            spec = spec.block(basis.combine(&w), g.gen_range(1..=4), complex(&mut g, 1.0));
        }
        let p = build_invariant(&spec, &basis).map_err(|e| e.to_string())?;
        let r = check_shift_invariant(&p, &c, 1e-10);
        ensure(r.pass, || format!("invariance defect {:.2e}", r.max_defect))?;
        worst_inv = worst_inv.max(r.max_defect / (1.0 + p.max_coeff_modulus()));
    }

    for _ in 0..100 {
        let dim = g.gen_range(1..=3);
        let u = ExpSum::exp(common::poly(&mut g, dim, 0, 2, 3, 1.0));
        let v = ExpSum::exp(common::poly(&mut g, dim, 0, 2, 3, 1.0));
        let s = u.add(&v).unwrap().scale(cplx(0.5, 0.0));
        let d = u.sub(&v).unwrap().scale((I * 2.0).inv());
        let lhs = s.square().add(&d.square()).unwrap();
        let uv = u.mul(&v).unwrap();
        let scale = 1.0 + lhs.max_coeff_modulus().max(uv.max_coeff_modulus());
        let dist = lhs.distance(&uv).unwrap();
        ensure(dist <= 1e-12 * scale, || {
            format!("identity defect {dist:.2e}")
        })?;
    }
    Ok(format!(
        "Richardson {worst_fd:.1e}, invariance {worst_inv:.1e}, identity structural on 100 pairs"
    ))
}

fn parser() -> Outcome {
    let mut g = rng(0x9a75e);
    for case in 0..1000 {
        let dim = 1 + case % 4;
        let x = expsum(&mut g, dim);
        let text = print_expr(&x);
        let y = parse_expr(&text, dim).map_err(|e| format!("{text}: {e}"))?;
        ensure(y == x, || format!("round trip changed {text}"))?;
    }
    for f in fixtures::FIXTURES {
        let doc = f.parse().map_err(|e| format!("{}: {e}", f.name))?;
        let r = verify(&doc.manifest, &doc.options(&VerifyOptions::default()))
            .map_err(|e| e.to_string())?;
        let expected = doc
            .expected
            .ok_or_else(|| format!("{}: no expected outcome", f.name))?;
        ensure(expected.matches(r.pass), || {
            format!("{}: outcome differs from expected", f.name)
        })?;
        ensure(print_manifest(&doc) == f.text, || {
            format!("{}: reprint differs", f.name)
        })?;
    }
    Ok(format!(
        "1000 sums round-trip; {} fixtures parse, verify and reprint",
        fixtures::FIXTURES.len()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("single-exponential difference example", example1),
        ("PDD examples and quoted relations", pdd_examples),
        ("erratum fixtures and corrected siblings", errata),
        ("property sweep over all case labels", sweep),
        ("ambiguity resolution pins", ambiguity_pins),
        ("operator correctness", operators),
        ("parser round-trip and fixtures", parser),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
