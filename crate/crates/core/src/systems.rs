//! The three functional-equation systems and their residual checks.
//!
//! * difference: `f1(z)^2 + f2(z+c)^2 = exp(g1)`, `f2(z)^2 + f1(z+c)^2 = exp(g2)`
//! * pdd: the same with `f1(z)` replaced by `d^k f1 / dz1^k` (and symmetrically)
//! * diffpdd: `(d^k f1 / dz1^k)^2 + (f2(z+c) - f2(z))^2 = 1` and its mirror

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{cplx, ComplexScalar, ExpSum, SparsePoly, ONE, ZERO};
use crate::error::{Error, Result};
use crate::parser::print_expr;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_RADIUS: f64 = 0.5;
/// Fraction of sample points that may overflow before the report fails.
pub const MAX_SKIP_FRACTION: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum SystemKind {
    Difference,
    Pdd { k: u32 },
    DiffPdd { k: u32 },
}

impl SystemKind {
    /// Derivative order; zero for the pure difference system.
    pub fn k(&self) -> u32 {
        match *self {
            SystemKind::Difference => 0,
            SystemKind::Pdd { k } | SystemKind::DiffPdd { k } => k,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SystemKind::Difference => "difference",
            SystemKind::Pdd { .. } => "pdd",
            SystemKind::DiffPdd { .. } => "diffpdd",
        }
    }

    pub fn has_exponential_rhs(&self) -> bool {
        !matches!(self, SystemKind::DiffPdd { .. })
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemKind::Difference => f.write_str("difference"),
            other => write!(f, "{} (k={})", other.tag(), other.k()),
        }
    }
}

/// A candidate solution pair together with the system it should solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionManifest {
    pub kind: SystemKind,
    pub dim: usize,
    pub c: Vec<ComplexScalar>,
    pub f1: ExpSum,
    pub f2: ExpSum,
    /// Exponents of the right-hand sides; absent for `diffpdd`, whose
    /// right-hand side is the constant 1.
    pub g1: Option<SparsePoly>,
    pub g2: Option<SparsePoly>,
    pub provenance: Option<String>,
}

impl SolutionManifest {
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Manifest("n must be positive".into()));
        }
        let mismatch = |found: usize| Error::DimensionMismatch { expected: n, found };
        if self.c.len() != n {
            return Err(mismatch(self.c.len()));
        }
        for d in [self.f1.dim(), self.f2.dim()] {
            if d != n {
                return Err(mismatch(d));
            }
        }
        for g in [&self.g1, &self.g2].into_iter().flatten() {
            if g.dim() != n {
                return Err(mismatch(g.dim()));
            }
        }
        match self.kind {
            SystemKind::Difference => {}
            SystemKind::Pdd { k } | SystemKind::DiffPdd { k } => {
                if n != 2 {
                    return Err(Error::Manifest(format!(
                        "{} systems are stated in two variables, got n={n}",
                        self.kind.tag()
                    )));
                }
                if k == 0 {
                    return Err(Error::Manifest(
                        "derivative order k must be at least 1".into(),
                    ));
                }
            }
        }
        if self.kind.has_exponential_rhs() {
            if self.g1.is_none() || self.g2.is_none() {
                return Err(Error::Manifest(format!(
                    "{} systems need both g1 and g2",
                    self.kind.tag()
                )));
            }
        } else {
            if self.g1.is_some() || self.g2.is_some() {
                return Err(Error::Manifest(
                    "diffpdd systems have right-hand side 1; drop g1/g2".into(),
                ));
            }
            if self.c.iter().all(|&x| x == ZERO) {
                return Err(Error::ZeroShift);
            }
        }
        Ok(())
    }

    /// The same manifest with the roles of `(f1, g1)` and `(f2, g2)` exchanged.
    pub fn swapped(&self) -> SolutionManifest {
        SolutionManifest {
            f1: self.f2.clone(),
            f2: self.f1.clone(),
            g1: self.g2.clone(),
            g2: self.g1.clone(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationSides {
    pub lhs: ExpSum,
    pub rhs: ExpSum,
}

fn first_term(kind: SystemKind, f: &ExpSum) -> Result<ExpSum> {
    match kind {
        SystemKind::Difference => Ok(f.clone()),
        SystemKind::Pdd { k } | SystemKind::DiffPdd { k } => f.derive(1, k),
    }
}

fn second_term(kind: SystemKind, f: &ExpSum, c: &[ComplexScalar]) -> Result<ExpSum> {
    let shifted = f.shift(c)?;
    match kind {
        SystemKind::DiffPdd { .. } => shifted.sub(f),
        _ => Ok(shifted),
    }
}

fn rhs(kind: SystemKind, dim: usize, g: Option<&SparsePoly>) -> ExpSum {
    match (kind.has_exponential_rhs(), g) {
        (true, Some(g)) => ExpSum::exp(g.clone()),
        _ => ExpSum::constant(dim, ONE),
    }
}

/// Symbolic left- and right-hand sides of both equations.
pub fn lhs_rhs(m: &SolutionManifest) -> Result<[EquationSides; 2]> {
    m.validate()?;
    let side = |a: &ExpSum, b: &ExpSum, g: Option<&SparsePoly>| -> Result<EquationSides> {
        let lhs = first_term(m.kind, a)?
            .square()
            .add(&second_term(m.kind, b, &m.c)?.square())?;
        Ok(EquationSides {
            lhs,
            rhs: rhs(m.kind, m.dim, g),
        })
    };
    Ok([
        side(&m.f1, &m.f2, m.g1.as_ref())?,
        side(&m.f2, &m.f1, m.g2.as_ref())?,
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub num_points: usize,
    pub radius: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            seed: DEFAULT_SEED,
            num_points: DEFAULT_POINTS,
            radius: DEFAULT_RADIUS,
        }
    }
}

impl Sampling {
    /// Points drawn uniformly from the polydisc `|z_j| <= radius`.
    pub fn points(&self, dim: usize) -> Vec<Vec<ComplexScalar>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.num_points)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let r = self.radius * rng.gen::<f64>().sqrt();
                        let t = TAU * rng.gen::<f64>();
                        cplx(r * t.cos(), r * t.sin())
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub tol: f64,
    pub sampling: Sampling,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: DEFAULT_TOL,
            sampling: Sampling::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationReport {
    pub equation: usize,
    pub symbolic_zero: bool,
    pub max_coeff_defect: f64,
    pub coeff_scale: f64,
    pub max_rel_residual: f64,
    pub points_evaluated: usize,
    pub points_skipped: usize,
    /// Printed `LHS - RHS` after normalization ("0" for an exact solution).
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub system: String,
    pub k: u32,
    pub provenance: Option<String>,
    pub tol: f64,
    pub sampling: Sampling,
    pub equations: Vec<EquationReport>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn max_rel_residual(&self) -> f64 {
        self.equations
            .iter()
            .map(|e| e.max_rel_residual)
            .fold(0.0, f64::max)
    }

    pub fn symbolic_zero(&self) -> bool {
        self.equations.iter().all(|e| e.symbolic_zero)
    }

    /// Human-readable report; byte-stable for a fixed manifest and sampling.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "system: {}", self.system);
        if self.k > 0 {
            let _ = writeln!(s, "k: {}", self.k);
        }
        if let Some(p) = &self.provenance {
            let _ = writeln!(s, "provenance: {p}");
        }
        let _ = writeln!(
            s,
            "tol: {:e}  seed: {}  points: {}  radius: {}",
            self.tol, self.sampling.seed, self.sampling.num_points, self.sampling.radius
        );
        for e in &self.equations {
            let _ = writeln!(
                s,
                "equation {}: {}  symbolic_zero={} max_coeff_defect={:.3e} max_rel_residual={:.3e} skipped={}/{}",
                e.equation,
                if e.pass { "PASS" } else { "FAIL" },
                e.symbolic_zero,
                e.max_coeff_defect,
                e.max_rel_residual,
                e.points_skipped,
                e.points_skipped + e.points_evaluated,
            );
            if !e.symbolic_zero {
                let _ = writeln!(s, "  residual: {}", e.residual);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "result: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

/// `|a - b| / (1 + |a| + |b|)`.
pub fn rel_residual(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / (1.0 + a.norm() + b.norm())
}

/// Pointwise value of one equation, using direct evaluation of `f` at the
/// shifted point rather than the symbolic shift.
fn pointwise(
    kind: SystemKind,
    first: &ExpSum,
    other: &ExpSum,
    g: Option<&SparsePoly>,
    c: &[ComplexScalar],
    z: &[ComplexScalar],
) -> Result<(ComplexScalar, ComplexScalar)> {
    let zc: Vec<ComplexScalar> = z.iter().zip(c).map(|(a, b)| a + b).collect();
    let a = first.evaluate(z)?;
    let mut b = other.evaluate(&zc)?;
    if let SystemKind::DiffPdd { .. } = kind {
        b -= other.evaluate(z)?;
    }
    let lhs = a * a + b * b;
    let rhs = match g {
        Some(g) if kind.has_exponential_rhs() => {
            let e = g.eval(z);
            if e.re > crate::algebra::scalar::EXP_OVERFLOW {
                return Err(Error::Overflow {
                    real_part: e.re,
                    limit: crate::algebra::scalar::EXP_OVERFLOW,
                });
            }
            e.exp()
        }
        _ => ONE,
    };
    Ok((lhs, rhs))
}

/// Relative residual of equation 1 or 2 at the point `z`.
pub fn residual_at(m: &SolutionManifest, equation: usize, z: &[ComplexScalar]) -> Result<f64> {
    m.validate()?;
    if z.len() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            found: z.len(),
        });
    }
    let (a, b, g) = match equation {
        1 => (&m.f1, &m.f2, m.g1.as_ref()),
        2 => (&m.f2, &m.f1, m.g2.as_ref()),
        _ => {
            return Err(Error::params(format!(
                "equation must be 1 or 2, got {equation}"
            )))
        }
    };
    let first = first_term(m.kind, a)?;
    let (lhs, rhs) = pointwise(m.kind, &first, b, g, &m.c, z)?;
    Ok(rel_residual(lhs, rhs))
}

/// Symbolic and sampled check that the manifest solves its system.
pub fn verify(m: &SolutionManifest, opts: &VerifyOptions) -> Result<ResidualReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::params("tolerance must be positive"));
    }
    if opts.sampling.num_points == 0 {
        return Err(Error::params("at least one sample point is required"));
    }
    if !(opts.sampling.radius >= 0.0) || !opts.sampling.radius.is_finite() {
        return Err(Error::params(
            "sampling radius must be finite and non-negative",
        ));
    }
    let sides = lhs_rhs(m)?;
    let points = opts.sampling.points(m.dim);
    let mut warnings = Vec::new();
    let mut equations = Vec::with_capacity(2);

    let pairs = [(&m.f1, &m.f2, m.g1.as_ref()), (&m.f2, &m.f1, m.g2.as_ref())];
    for (idx, (side, (a, b, g))) in sides.iter().zip(pairs).enumerate() {
        let eq = idx + 1;
        let diff = side.lhs.sub(&side.rhs)?.normalize_with_report();
        for w in diff.warnings {
            warnings.push(format!("equation {eq}: {w}"));
        }
        let scale = side
            .lhs
            .max_coeff_modulus()
            .max(side.rhs.max_coeff_modulus());
        let defect = diff.value.max_coeff_modulus();
        let symbolic_zero = defect <= opts.tol * (1.0 + scale);

        let first = first_term(m.kind, a)?;
        let mut worst: f64 = 0.0;
        let mut skipped = 0usize;
        let mut first_skip: Option<String> = None;
        for z in &points {
            match pointwise(m.kind, &first, b, g, &m.c, z) {
                Ok((l, r)) => worst = worst.max(rel_residual(l, r)),
                Err(e @ (Error::Overflow { .. } | Error::NonFinite(_))) => {
                    skipped += 1;
                    first_skip.get_or_insert_with(|| e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = first_skip {
            warnings.push(format!(
                "equation {eq}: skipped {skipped} of {} sample points ({e})",
                points.len()
            ));
        }
        let too_many_skips = skipped as f64 > MAX_SKIP_FRACTION * points.len() as f64;
        if too_many_skips {
            warnings.push(format!(
                "equation {eq}: more than {:.0}% of sample points overflowed; reduce the sampling radius",
                MAX_SKIP_FRACTION * 100.0
            ));
        }
        let evaluated = points.len() - skipped;
        let pass = symbolic_zero && worst <= opts.tol && !too_many_skips;
        equations.push(EquationReport {
            equation: eq,
            symbolic_zero,
            max_coeff_defect: defect,
            coeff_scale: scale,
            max_rel_residual: worst,
            points_evaluated: evaluated,
            points_skipped: skipped,
            residual: print_expr(&diff.value),
            pass,
        });
    }
    let pass = equations.iter().all(|e| e.pass);
    Ok(ResidualReport {
        system: m.kind.tag().to_string(),
        k: m.kind.k(),
        provenance: m.provenance.clone(),
        tol: opts.tol,
        sampling: opts.sampling,
        equations,
        warnings,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SparsePoly;

    fn zero_pair_manifest() -> SolutionManifest {
        SolutionManifest {
            kind: SystemKind::Difference,
            dim: 2,
            c: vec![ONE, ZERO],
            f1: ExpSum::zero(2),
            f2: ExpSum::zero(2),
            g1: Some(SparsePoly::var(2, 0)),
            g2: Some(SparsePoly::var(2, 1)),
            provenance: None,
        }
    }

    #[test]
    fn zero_functions_leave_minus_exp_g() {
        let m = zero_pair_manifest();
        let sides = lhs_rhs(&m).unwrap();
        let diff = sides[0].lhs.sub(&sides[0].rhs).unwrap();
        assert_eq!(diff, ExpSum::exp(SparsePoly::var(2, 0)).neg());
        let r = verify(&m, &VerifyOptions::default()).unwrap();
        assert!(!r.pass);
        assert!(!r.equations[0].symbolic_zero);
    }

    #[test]
    fn pdd_needs_two_variables() {
        let mut m = zero_pair_manifest();
        m.kind = SystemKind::Pdd { k: 1 };
        m.dim = 3;
        m.c = vec![ONE, ZERO, ZERO];
        m.f1 = ExpSum::zero(3);
        m.f2 = ExpSum::zero(3);
        m.g1 = Some(SparsePoly::zero(3));
        m.g2 = Some(SparsePoly::zero(3));
        assert!(matches!(m.validate(), Err(Error::Manifest(_))));
    }

    #[test]
    fn sampling_stays_in_polydisc_and_is_deterministic() {
        let s = Sampling {
            seed: 7,
            num_points: 50,
            radius: 0.5,
        };
        let pts = s.points(3);
        assert_eq!(pts, s.points(3));
        assert!(pts.iter().flatten().all(|z| z.norm() <= 0.5));
    }

    #[test]
    fn rejects_bad_options() {
        let m = zero_pair_manifest();
        let o = VerifyOptions {
            tol: 0.0,
            ..Default::default()
        };
        assert!(verify(&m, &o).is_err());
        let mut o = VerifyOptions::default();
        o.sampling.num_points = 0;
        assert!(verify(&m, &o).is_err());
    }
}
