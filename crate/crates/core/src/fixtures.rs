//! Built-in example manifests. Each shipped file under `fixtures/` is the
//! printed output of the matching builder here; a test keeps them in sync.

use std::f64::consts::PI;

use crate::algebra::{cplx, ComplexScalar, LinearForm, SparsePoly, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::families::{
    construct_t1, construct_t2, construct_t3, solve_shift_constraint, t1_lc_target, t2_lc_target,
    Construction, PairedCase, Parity, Subcase, T1CaseI, T1Paired, T1Params, T2CaseI, T2Paired,
    T2Params, T3Params, T2_PREFACTOR_POWER,
};
use crate::parser::{
    parse_expr_with, parse_manifest, parse_poly_with, Bindings, Expected, ManifestDocument,
};
use crate::shiftinv::{build_invariant, kernel_basis, InvariantPolySpec};
use crate::systems::{
    SolutionManifest, SystemKind, DEFAULT_POINTS, DEFAULT_RADIUS, DEFAULT_SEED, DEFAULT_TOL,
};

pub struct Fixture {
    pub name: &'static str,
    /// Shipped manifest text.
    pub text: &'static str,
    /// One-line remark printed by `fermat examples`.
    pub note: &'static str,
    pub build: fn() -> Result<ManifestDocument>,
}

macro_rules! fixture {
    ($name:literal, $note:expr, $build:expr) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../fixtures/", $name, ".fde")),
            note: $note,
            build: $build,
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!(
        "example1",
        "single-exponential difference pair, xi1 = xi2 = 2",
        example1
    ),
    fixture!(
        "example2_as_printed",
        "erratum: e^{L1(c)} = -1, e^{L2(c)} = 1 fit no subcase of case ii",
        example2_as_printed
    ),
    fixture!(
        "example2_corrected",
        "same data re-derived as case iii(c); B4 solved from e^{B3-B4} = i",
        example2_corrected
    ),
    fixture!("example3", "pdd k=1, single exponential", example3),
    fixture!("example4", "pdd k=2, case ii(a)", example4),
    fixture!(
        "example5",
        "pdd k=1, case iii(a) with H1 = z2^3, H2 = z2^5",
        example5
    ),
    fixture!(
        "example6_as_printed",
        "erratum: c2 != 0 breaks H(z2 + c2) = H(z2) for H = z2^10",
        example6_as_printed
    ),
    fixture!(
        "example6_corrected",
        "odd case with alpha1 = -2i and c = (-pi/2, 0)",
        example6_corrected
    ),
    fixture!(
        "example7_as_printed",
        "erratum: second exponent of f1 and the +1 in the shift condition",
        example7_as_printed
    ),
    fixture!(
        "example7_corrected",
        "even case with alpha1 = i*sqrt(2), beta = 1, c = (-pi/sqrt(2), 0)",
        example7_corrected
    ),
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn parse(&self) -> Result<ManifestDocument> {
        parse_manifest(self.text)
    }
}

fn r(x: f64) -> ComplexScalar {
    cplx(x, 0.0)
}

fn pi_i(x: f64) -> ComplexScalar {
    cplx(0.0, PI * x)
}

fn document(comments: &[&str], manifest: SolutionManifest, expected: Expected) -> ManifestDocument {
    ManifestDocument {
        comments: comments.iter().map(|s| s.to_string()).collect(),
        manifest,
        tol: Some(DEFAULT_TOL),
        seed: Some(DEFAULT_SEED),
        points: Some(DEFAULT_POINTS),
        radius: Some(DEFAULT_RADIUS),
        expected: Some(expected),
    }
}

fn with_name(mut c: Construction, name: &str) -> SolutionManifest {
    let label = c.manifest.provenance.take().unwrap_or_default();
    c.manifest.provenance = Some(format!("{label} {name}"));
    c.manifest
}

/// Case-I parameters for the first example: `L = z1 + 2 z2`, `xi1 = xi2 = 2`,
/// `c` along `(1, 0)`, `Phi = (c2 z1 - c1 z2)^5`.
pub fn example1_params() -> Result<T1CaseI> {
    let l = LinearForm::from_real(&[1.0, 2.0]);
    let (xi1, xi2) = (r(2.0), r(2.0));
    let c = solve_shift_constraint(&l, t1_lc_target(xi1, xi2), &[ONE, ZERO], 0)?;
    let basis = kernel_basis(&c)?;
    let form = LinearForm::homogeneous(vec![c[1], -c[0]]);
    let phi = build_invariant(&InvariantPolySpec::new().block(form, 5, ONE), &basis)?;
    Ok(T1CaseI {
        c,
        l,
        phi,
        xi1,
        xi2,
        b1: pi_i(2.0),
        b2: ZERO,
    })
}

fn example1() -> Result<ManifestDocument> {
    let c = construct_t1(&T1Params::CaseI(example1_params()?))?;
    Ok(document(
        &[
            "Difference system, single exponential: xi1 = xi2 = 2, L = z1 + 2*z2,",
            "B1 = 2*pi*i, B2 = 0, c = (log(9/25) + pi*i, 0) so that e^{c1 + 2*c2} = -9/25,",
            "Phi = (c2*z1 - c1*z2)^5. Both functions carry the prefactor 5/4.",
        ],
        with_name(c, "example1"),
        Expected::Pass,
    ))
}

fn transcribe(text: &str, b: &Bindings) -> Result<crate::algebra::ExpSum> {
    parse_expr_with(text, 2, b)
}

fn example2_as_printed() -> Result<ManifestDocument> {
    let b = Bindings::new();
    let phi = "-(pi^2/25)*(2*z1 + 7*z2)^2";
    let manifest = SolutionManifest {
        kind: SystemKind::Difference,
        dim: 2,
        c: vec![pi_i(7.0 / 5.0), pi_i(-2.0 / 5.0)],
        f1: transcribe(
            &format!("(1/2)*(exp(z1 + z2 {phi} + 3*pi*i/2) + exp(2*z1 - 3*z2 + 2*pi*i))"),
            &b,
        )?,
        f2: transcribe(
            &format!("(1/2)*(exp(z1 + z2 {phi} + pi*i) + exp(2*z1 - 3*z2 + pi*i/2))"),
            &b,
        )?,
        g1: Some(parse_poly_with(
            &format!("3*z1 - 2*z2 {phi} + 7*pi*i/2"),
            2,
            &b,
        )?),
        g2: Some(parse_poly_with(
            &format!("3*z1 - 2*z2 {phi} + 3*pi*i/2"),
            2,
            &b,
        )?),
        provenance: Some("t1.ii example2 as printed".into()),
    };
    Ok(document(
        &[
            "Difference system, two exponentials, transcribed as displayed:",
            "c = (7*pi*i/5, -2*pi*i/5), L1 = z1 + z2, L2 = 2*z1 - 3*z2,",
            "Phi = -(pi^2/25)*(2*z1 + 7*z2)^2, Psi = 0, B = (3*pi*i/2, pi*i, 2*pi*i, pi*i/2).",
            "Here e^{L1(c)} = -1 and e^{L2(c)} = 1, which no subcase of case ii allows.",
        ],
        manifest,
        Expected::Fail,
    ))
}

/// The second example's data with the shift re-derived from `e^{L1(c)} = -1`
/// along `(7, -2)` and `B4` from the case iii(c) relation `e^{B3-B4} = i`.
pub fn example2_corrected_params() -> Result<T1Paired> {
    let l1 = LinearForm::from_real(&[1.0, 1.0]);
    let l2 = LinearForm::from_real(&[2.0, -3.0]);
    let c = solve_shift_constraint(&l1, -ONE, &[r(7.0), r(-2.0)], 0)?;
    let phi = parse_poly_with("-(pi^2/25)*(2*z1 + 7*z2)^2", 2, &Bindings::new())?;
    let b3 = pi_i(2.0);
    Ok(T1Paired {
        case: PairedCase::III,
        sub: Subcase::C,
        c,
        l1,
        l2,
        phi,
        psi: SparsePoly::zero(2),
        b: [pi_i(1.5), pi_i(1.0), b3, b3 - I.ln()],
    })
}

fn example2_corrected() -> Result<ManifestDocument> {
    let c = construct_t1(&T1Params::Paired(example2_corrected_params()?))?;
    Ok(document(
        &[
            "Difference system, case iii(c): c solves e^{L1(c)} = -1 along (7, -2),",
            "which gives c = (7*pi*i/5, -2*pi*i/5) and e^{L2(c)} = 1.",
            "B1 = 3*pi*i/2, B2 = pi*i, B3 = 2*pi*i, B4 = B3 - log(i) = 3*pi*i/2.",
        ],
        with_name(c, "example2"),
        Expected::Pass,
    ))
}

pub fn example3_params() -> Result<T2CaseI> {
    let l = LinearForm::from_real(&[2.0, 1.0]);
    let (xi1, xi2) = (r(2.0), r(2.0));
    let target = t2_lc_target(T2_PREFACTOR_POWER, l.coeffs[0], 1, xi1, xi2);
    let c = solve_shift_constraint(&l, target, &[ONE, ZERO], 0)?;
    Ok(T2CaseI {
        k: 1,
        c,
        l,
        h: SparsePoly::zero(2),
        xi1,
        xi2,
        b1: pi_i(1.0),
        b2: pi_i(1.0),
    })
}

fn example3() -> Result<ManifestDocument> {
    let c = construct_t2(&T2Params::CaseI(example3_params()?))?;
    Ok(document(
        &[
            "Partial differential-difference system, k = 1, single exponential:",
            "xi1 = xi2 = 2, L = 2*z1 + z2, g1 = g2 = L + pi*i, e^{L(c)} = -9/25.",
            "Expected pair: f1 = f2 = -(5i/4) e^{(2*z1 + z2)/2}.",
        ],
        with_name(c, "example3"),
        Expected::Pass,
    ))
}

pub fn example4_params() -> T2Paired {
    let log2 = 2f64.ln();
    T2Paired {
        k: 2,
        case: PairedCase::II,
        sub: Subcase::A,
        c: vec![r(2.0 * log2), cplx(-2.0 * log2, PI / 2.0)],
        l1: LinearForm::from_real(&[1.0, 1.0]),
        l2: LinearForm::from_real(&[2.0, 1.0]),
        h1: SparsePoly::zero(2),
        h2: SparsePoly::zero(2),
        b: [pi_i(2.0), pi_i(1.0), pi_i(1.0), pi_i(1.0)],
    }
}

fn example4() -> Result<ManifestDocument> {
    let c = construct_t2(&T2Params::Paired(example4_params()))?;
    Ok(document(
        &[
            "Partial differential-difference system, k = 2, case ii(a):",
            "L1 = z1 + z2, L2 = 2*z1 + z2, c = (2*log(2), pi*i/2 - 2*log(2)),",
            "B = (2*pi*i, pi*i, pi*i, pi*i); e^{L1(c)} = i, e^{L2(c)} = 4i.",
        ],
        with_name(c, "example4"),
        Expected::Pass,
    ))
}

pub fn example5_params() -> Result<T2Paired> {
    let b = Bindings::new();
    Ok(T2Paired {
        k: 1,
        case: PairedCase::III,
        sub: Subcase::A,
        c: vec![r(0.5 * 2f64.ln()), ZERO],
        l1: LinearForm::from_real(&[2.0, 3.0]),
        l2: LinearForm::from_real(&[2.0, -1.0]),
        h1: parse_poly_with("z2^3", 2, &b)?,
        h2: parse_poly_with("z2^5", 2, &b)?,
        b: [pi_i(1.0), pi_i(0.5), pi_i(0.5), pi_i(1.0)],
    })
}

fn example5() -> Result<ManifestDocument> {
    let c = construct_t2(&T2Params::Paired(example5_params()?))?;
    Ok(document(
        &[
            "Partial differential-difference system, k = 1, case iii(a):",
            "L1 = 2*z1 + 3*z2, L2 = 2*z1 - z2, H1 = z2^3, H2 = z2^5, c = (log(2)/2, 0),",
            "B = (pi*i, pi*i/2, pi*i/2, pi*i); e^{L1(c)} = 2 = a11, e^{B1-B2} = i.",
        ],
        with_name(c, "example5"),
        Expected::Pass,
    ))
}

fn example6_as_printed() -> Result<ManifestDocument> {
    let f = "(exp(2*i*z1 - z2 - z2^10) - exp(-2*i*z1 + z2 + z2^10))/(4*i)";
    let manifest = SolutionManifest {
        kind: SystemKind::DiffPdd { k: 1 },
        dim: 2,
        // -2i*c1 + c2 = pi*i with c2 = 1
        c: vec![cplx(-PI / 2.0, -0.5), ONE],
        f1: transcribe(f, &Bindings::new())?,
        f2: transcribe(f, &Bindings::new())?,
        g1: None,
        g2: None,
        provenance: Some("t3.odd example6 as printed".into()),
    };
    Ok(document(
        &[
            "Difference-of-shifts system, k = 1, transcribed as displayed with",
            "c = (-pi/2 - i/2, 1), one solution of -2i*c1 + c2 = pi*i.",
            "H = z2^10 is not invariant under z2 -> z2 + 1.",
        ],
        manifest,
        Expected::Fail,
    ))
}

/// Odd case with `k = 1`, `eta = 4 pi i`, `alpha1 = -2i`, `alpha2 = 1`,
/// `beta = 0`, `H = z2^10` and `c2 = 0`.
pub fn example6_corrected_params(alpha1: ComplexScalar) -> Result<T3Params> {
    let mut p = T3Params {
        k: 1,
        parity: Parity::Odd,
        alpha1,
        alpha2: ONE,
        beta: ZERO,
        eta: pi_i(4.0),
        h: parse_poly_with("z2^10", 2, &Bindings::new())?,
        c: Vec::new(),
    };
    p.c = solve_shift_constraint(&p.l(), p.lc_target(), &[ONE, ZERO], 0)?;
    Ok(p)
}

fn example6_corrected() -> Result<ManifestDocument> {
    let c = construct_t3(&example6_corrected_params(-cplx(0.0, 2.0))?)?;
    Ok(document(
        &[
            "Difference-of-shifts system, k = 1, odd case: eta = 4*pi*i, alpha1 = -2i,",
            "alpha2 = 1, beta = 0, H = z2^10. e^{L(c)} = -1 with c2 = 0 gives c = (-pi/2, 0).",
            "f1 = f2 coincide with the displayed expressions.",
        ],
        with_name(c, "example6"),
        Expected::Pass,
    ))
}

fn alpha7() -> ComplexScalar {
    cplx(0.0, 2f64.sqrt())
}

fn example7_as_printed() -> Result<ManifestDocument> {
    let mut b = Bindings::new();
    b.insert("a1".into(), alpha7());
    let manifest = SolutionManifest {
        kind: SystemKind::DiffPdd { k: 2 },
        dim: 2,
        // a1*c1 + c2 + 1 = pi*i with c2 = 0
        c: vec![(pi_i(1.0) - ONE) / alpha7(), ZERO],
        f1: transcribe("(exp(a1*z1 + z2 + 1) + exp(-a1*z1 + z2 + 1))/(-4)", &b)?,
        f2: transcribe("(exp(a1*z1 + z2 + 1) - exp(-(a1*z1 + z2 + 1)))/(-4*i)", &b)?,
        g1: None,
        g2: None,
        provenance: Some("t3.even example7 as printed".into()),
    };
    Ok(document(
        &[
            "Difference-of-shifts system, k = 2, transcribed as displayed with",
            "alpha1 = i*sqrt(2), eta = 5*pi*i/2 and c = ((pi*i - 1)/alpha1, 0).",
        ],
        manifest,
        Expected::Fail,
    ))
}

pub fn example7_corrected_params() -> Result<T3Params> {
    let mut p = T3Params {
        k: 2,
        parity: Parity::Even,
        alpha1: alpha7(),
        alpha2: ONE,
        beta: ONE,
        eta: pi_i(2.5),
        h: SparsePoly::zero(2),
        c: Vec::new(),
    };
    p.c = solve_shift_constraint(&p.l(), p.lc_target(), &[ONE, ZERO], 0)?;
    Ok(p)
}

fn example7_corrected() -> Result<ManifestDocument> {
    let c = construct_t3(&example7_corrected_params()?)?;
    Ok(document(
        &[
            "Difference-of-shifts system, k = 2, even case: eta = 5*pi*i/2,",
            "alpha1 = i*sqrt(2), alpha2 = 1, beta = 1, H = 0; e^{L(c)} = -1 with c2 = 0",
            "gives alpha1*c1 = -pi*i, so c = (-pi/sqrt(2), 0).",
        ],
        with_name(c, "example7"),
        Expected::Pass,
    ))
}

/// Builds and prints every fixture; used to regenerate `fixtures/`.
pub fn render_all() -> Result<Vec<(&'static str, String)>> {
    FIXTURES
        .iter()
        .map(|f| Ok((f.name, crate::parser::print_manifest(&(f.build)()?))))
        .collect()
}

/// Looks a fixture up by name, reporting the known names on failure.
pub fn require(name: &str) -> Result<&'static Fixture> {
    find(name).ok_or_else(|| {
        let names: Vec<&str> = FIXTURES.iter().map(|f| f.name).collect();
        Error::params(format!(
            "unknown fixture `{name}` (known: {})",
            names.join(", ")
        ))
    })
}
