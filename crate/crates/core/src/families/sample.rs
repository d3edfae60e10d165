//! Parameter resolution: every free parameter of a case is either taken from
//! a user override or drawn at random, and the constrained ones (the shift
//! `c`, the dependent `B`s, `alpha1`) are solved from the case relations.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::t1::{t1_b_relation, t1_lc_target, T1CaseI, T1Paired, T1Params, T1_B_RELATION};
use super::t2::{t2_lc_target, T2CaseI, T2Paired, T2Params, T2_PREFACTOR_POWER};
use super::t3::{Parity, T3Params};
use super::{
    construct_t1, construct_t2, construct_t3, ln, paired_targets, solve_shift_constraint,
    solve_shift_pair, CaseLabel, Construction, PairedCase, Subcase,
};
use crate::algebra::{cplx, powu, ComplexScalar, LinearForm, MultiIndex, SparsePoly, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::parser::{parse_constant_with, parse_poly_with, parse_vector, Bindings};
use crate::shiftinv::{build_invariant, kernel_basis, InvariantPolySpec};

/// Names accepted as overrides (on the command line or in a parameter file).
pub const PARAM_NAMES: [&str; 25] = [
    "n",
    "k",
    "xi1",
    "xi2",
    "L",
    "L1",
    "L2",
    "phi",
    "psi",
    "H",
    "H1",
    "H2",
    "B1",
    "B2",
    "B3",
    "B4",
    "alpha1",
    "alpha2",
    "beta",
    "eta",
    "c",
    "direction",
    "branch",
    "m1",
    "m2",
];

const MAX_ATTEMPTS: usize = 500;
const MIN_XI: f64 = 0.2;
const MIN_XI4_GAP: f64 = 0.1;
const MIN_LEAD: f64 = 0.3;
const MAX_SHIFT: f64 = 3.0;

/// Textual parameter values keyed by name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides(BTreeMap<String, String>);

impl Overrides {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, value: &str) -> Result<()> {
        if !PARAM_NAMES.contains(&name) {
            return Err(Error::params(format!("unknown parameter `{name}`")));
        }
        self.0.insert(name.to_string(), value.trim().to_string());
        Ok(())
    }

    pub fn with(mut self, name: &str, value: &str) -> Self {
        self.set(name, value).expect("known parameter");
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.get(name).map(String::as_str)
    }

    /// Reads `name=value` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Overrides> {
        let mut out = Overrides::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                col: 1,
                msg: "expected `name=value`".into(),
            })?;
            out.set(k.trim(), v).map_err(|e| Error::Parse {
                line: i + 1,
                col: 1,
                msg: e.to_string(),
            })?;
        }
        Ok(out)
    }

    pub fn merge(&mut self, other: &Overrides) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }
}

/// Resolved parameters for any case.
#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    T1(T1Params),
    T2(T2Params),
    T3(T3Params),
}

impl Params {
    pub fn label(&self) -> CaseLabel {
        match self {
            Params::T1(p) => p.label(),
            Params::T2(p) => p.label(),
            Params::T3(p) => p.parity.label(),
        }
    }

    pub fn construct(&self) -> Result<Construction> {
        match self {
            Params::T1(p) => construct_t1(p),
            Params::T2(p) => construct_t2(p),
            Params::T3(p) => construct_t3(p),
        }
    }
}

/// Resolves parameters for `label`, drawing unspecified ones from a
/// generator seeded with `seed`. Draws that land in numerically awkward
/// regions (tiny `xi`, near-kernel directions, large shifts) are redrawn.
pub fn resolve(label: CaseLabel, ov: &Overrides, seed: u64) -> Result<Params> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut cx = Ctx { ov, rng: &mut rng };
        let drawn = match label {
            CaseLabel::T1I => cx.t1_case_i()?.map(|p| Params::T1(T1Params::CaseI(p))),
            CaseLabel::T1(case, sub) => cx
                .t1_paired(case, sub)?
                .map(|p| Params::T1(T1Params::Paired(p))),
            CaseLabel::T2I => cx.t2_case_i()?.map(|p| Params::T2(T2Params::CaseI(p))),
            CaseLabel::T2(case, sub) => cx
                .t2_paired(case, sub)?
                .map(|p| Params::T2(T2Params::Paired(p))),
            CaseLabel::T3Odd => cx.t3(Parity::Odd)?.map(Params::T3),
            CaseLabel::T3Even => cx.t3(Parity::Even)?.map(Params::T3),
        };
        if let Some(p) = drawn {
            return Ok(p);
        }
    }
    Err(Error::params(format!(
        "no admissible parameters for {label} after {MAX_ATTEMPTS} draws; \
         the overrides may pin a degenerate configuration"
    )))
}

/// Random admissible construction for `label`.
pub fn draw(label: CaseLabel, seed: u64) -> Result<Construction> {
    resolve(label, &Overrides::new(), seed)?.construct()
}

struct Ctx<'a> {
    ov: &'a Overrides,
    rng: &'a mut ChaCha8Rng,
}

/// `Ok(None)` asks the caller to redraw.
type Draw<T> = Result<Option<T>>;

macro_rules! accept {
    ($cond:expr) => {
        if !$cond {
            return Ok(None);
        }
    };
}

fn bindings_for(c: &[ComplexScalar]) -> Bindings {
    c.iter()
        .enumerate()
        .map(|(j, &v)| (format!("c{}", j + 1), v))
        .collect()
}

fn max_norm(v: &[ComplexScalar]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

impl Ctx<'_> {
    fn unit(&mut self) -> ComplexScalar {
        cplx(
            self.rng.gen_range(-1.0..=1.0),
            self.rng.gen_range(-1.0..=1.0),
        )
    }

    fn vec(&mut self, n: usize) -> Vec<ComplexScalar> {
        (0..n).map(|_| self.unit()).collect()
    }

    fn constant(&self, name: &str, b: &Bindings) -> Result<Option<ComplexScalar>> {
        self.ov
            .get(name)
            .map(|s| parse_constant_with(s, b).map_err(|e| named(name, e)))
            .transpose()
    }

    fn int(&self, name: &str) -> Result<Option<i64>> {
        self.ov
            .get(name)
            .map(|s| {
                s.parse::<i64>()
                    .map_err(|_| Error::params(format!("{name} must be an integer, got `{s}`")))
            })
            .transpose()
    }

    fn vector(&self, name: &str) -> Result<Option<Vec<ComplexScalar>>> {
        self.ov
            .get(name)
            .map(|s| parse_vector(s, &Bindings::new(), 1, 1).map_err(|e| named(name, e)))
            .transpose()
    }

    fn poly(&self, name: &str, n: usize, b: &Bindings) -> Result<Option<SparsePoly>> {
        self.ov
            .get(name)
            .map(|s| parse_poly_with(s, n, b).map_err(|e| named(name, e)))
            .transpose()
    }

    fn form(&self, name: &str, n: usize) -> Result<Option<LinearForm>> {
        match self.poly(name, n, &Bindings::new())? {
            None => Ok(None),
            Some(p) => {
                let l = LinearForm::from_poly(&p).map_err(|e| named(name, e))?;
                if l.constant != ZERO {
                    return Err(Error::params(format!(
                        "{name} must be a linear form without constant term"
                    )));
                }
                Ok(Some(l))
            }
        }
    }

    /// Dimension from `n`, or from the length of `c`/`direction`.
    fn dim(&mut self, sample: impl FnOnce(&mut Self) -> usize) -> Result<usize> {
        if let Some(n) = self.int("n")? {
            if n < 1 {
                return Err(Error::params("n must be positive"));
            }
            return Ok(n as usize);
        }
        for key in ["c", "direction"] {
            if let Some(v) = self.vector(key)? {
                return Ok(v.len());
            }
        }
        Ok(sample(self))
    }

    fn k(&mut self, choices: &[u32]) -> Result<u32> {
        match self.int("k")? {
            Some(k) if k >= 1 => Ok(k as u32),
            Some(_) => Err(Error::params("k must be at least 1")),
            None => Ok(choices[self.rng.gen_range(0..choices.len())]),
        }
    }

    /// `xi` with `|xi| >= 0.2` and `|xi^4 - 1| >= 0.1` when drawn.
    fn xi(&mut self, name: &str) -> Draw<ComplexScalar> {
        if let Some(x) = self.constant(name, &Bindings::new())? {
            return Ok(Some(x));
        }
        let x = self.unit();
        accept!(x.norm() >= MIN_XI && (powu(x, 4) - ONE).norm() >= MIN_XI4_GAP);
        Ok(Some(x))
    }

    fn free(&mut self, name: &str, b: &Bindings) -> Result<ComplexScalar> {
        match self.constant(name, b)? {
            Some(v) => Ok(v),
            None => Ok(self.unit()),
        }
    }

    /// `B_dep` from its override or solved as `B_free - log(ratio)`.
    fn dependent_b(
        &self,
        name: &str,
        free: ComplexScalar,
        ratio: ComplexScalar,
    ) -> Result<ComplexScalar> {
        Ok(self
            .constant(name, &Bindings::new())?
            .unwrap_or_else(|| free - ln(ratio)))
    }

    /// Random polynomial in the forms annihilating `c`.
    fn invariant(&mut self, c: &[ComplexScalar]) -> Result<SparsePoly> {
        let basis = kernel_basis(c)?;
        if basis.forms.is_empty() {
            return Ok(SparsePoly::zero(c.len()));
        }
        let mut spec = InvariantPolySpec::new();
        for _ in 0..self.rng.gen_range(1..=2) {
            let w: Vec<ComplexScalar> = (0..basis.forms.len()).map(|_| self.unit()).collect();
            let degree = self.rng.gen_range(2..=3);
            let coeff = self.unit() * 0.5;
            spec = spec.block(basis.combine(&w), degree, coeff);
        }
        build_invariant(&spec, &basis)
    }

    /// Random `sum_{d=2..deg} h_d z2^d`.
    fn poly_z2(&mut self) -> SparsePoly {
        let deg = self.rng.gen_range(2..=3);
        let mut p = SparsePoly::zero(2);
        for d in 2..=deg {
            let m = SparsePoly::monomial(2, self.unit() * 0.5, MultiIndex::new(vec![0, d]));
            p = &p + &m;
        }
        p
    }

    /// Shift from an override or solved along a direction; `along_z1`
    /// forces the direction `(1, 0, ..)` when it is not given.
    fn shift_single(
        &mut self,
        l: &LinearForm,
        target: ComplexScalar,
        along_z1: bool,
    ) -> Draw<Vec<ComplexScalar>> {
        if let Some(c) = self.vector("c")? {
            return Ok(Some(c));
        }
        let n = l.dim();
        let branch = self.int("branch")?.unwrap_or(0);
        let (dir, drawn) = match self.vector("direction")? {
            Some(d) => (d, false),
            None if along_z1 => {
                let mut d = vec![ZERO; n];
                d[0] = ONE;
                (d, true)
            }
            None => (self.vec(n), true),
        };
        if drawn {
            accept!(l.linear_part(&dir).norm() >= MIN_LEAD);
        }
        let c = solve_shift_constraint(l, target, &dir, branch)?;
        if drawn {
            accept!(max_norm(&c) <= MAX_SHIFT);
        }
        Ok(Some(c))
    }

    fn t1_case_i(&mut self) -> Draw<T1CaseI> {
        let n = self.dim(|cx| cx.rng.gen_range(2..=3))?;
        let Some(xi1) = self.xi("xi1")? else {
            return Ok(None);
        };
        let Some(xi2) = self.xi("xi2")? else {
            return Ok(None);
        };
        let l = match self.form("L", n)? {
            Some(l) => l,
            None => LinearForm::homogeneous(self.vec(n)),
        };
        let Some(c) = self.shift_single(&l, t1_lc_target(xi1, xi2), false)? else {
            return Ok(None);
        };
        let b = bindings_for(&c);
        let b1 = self.free("B1", &b)?;
        let b2 = self.dependent_b("B2", b1, t1_b_relation(T1_B_RELATION, xi1, xi2))?;
        let phi = match self.poly("phi", n, &b)? {
            Some(p) => p,
            None => self.invariant(&c)?,
        };
        Ok(Some(T1CaseI {
            c,
            l,
            phi,
            xi1,
            xi2,
            b1,
            b2,
        }))
    }

    fn t1_paired(&mut self, case: PairedCase, sub: Subcase) -> Draw<T1Paired> {
        let n = self.dim(|cx| cx.rng.gen_range(2..=3))?;
        let [t1, t2, r12, r34] = paired_targets(1, case, sub);
        let (l1, l2, drawn) = match (self.form("L1", n)?, self.form("L2", n)?) {
            (Some(a), Some(b)) => (a, b, false),
            (a, b) => {
                let a = a.unwrap_or_else(|| LinearForm::homogeneous(self.vec(n)));
                let b = b.unwrap_or_else(|| LinearForm::homogeneous(self.vec(n)));
                (a, b, true)
            }
        };
        let c = match self.vector("c")? {
            Some(c) => c,
            None => {
                // Branches are drawn too: with targets (1, 1) the principal
                // branches would give c = 0.
                let m1 = match self.int("m1")? {
                    Some(m) => m,
                    None => self.rng.gen_range(-1..=1),
                };
                let m2 = match self.int("m2")? {
                    Some(m) => m,
                    None => self.rng.gen_range(-1..=1),
                };
                match solve_shift_pair(&l1, &l2, t1, t2, m1, m2) {
                    Ok(c) => {
                        accept!(max_norm(&c) > 1e-9);
                        accept!(!drawn || max_norm(&c) <= MAX_SHIFT);
                        c
                    }
                    Err(_) if drawn => return Ok(None),
                    Err(e) => return Err(e),
                }
            }
        };
        let b = bindings_for(&c);
        let phi = match self.poly("phi", n, &b)? {
            Some(p) => p,
            None => self.invariant(&c)?,
        };
        let psi = match self.poly("psi", n, &b)? {
            Some(p) => p,
            None => self.invariant(&c)?,
        };
        let b1 = self.free("B1", &b)?;
        let b3 = self.free("B3", &b)?;
        let b2 = self.dependent_b("B2", b1, r12)?;
        let b4 = self.dependent_b("B4", b3, r34)?;
        Ok(Some(T1Paired {
            case,
            sub,
            c,
            l1,
            l2,
            phi,
            psi,
            b: [b1, b2, b3, b4],
        }))
    }

    fn t2_case_i(&mut self) -> Draw<T2CaseI> {
        let k = self.k(&[1, 2, 3])?;
        let Some(xi1) = self.xi("xi1")? else {
            return Ok(None);
        };
        let Some(xi2) = self.xi("xi2")? else {
            return Ok(None);
        };
        let l = match self.form("L", 2)? {
            Some(l) => l,
            None => {
                let l = LinearForm::homogeneous(self.vec(2));
                accept!(l.coeffs[0].norm() >= MIN_LEAD);
                l
            }
        };
        let h_given = self.poly("H", 2, &Bindings::new())?;
        let h = match h_given {
            Some(h) => h,
            None if self.rng.gen_bool(0.5) => self.poly_z2(),
            None => SparsePoly::zero(2),
        };
        let target = t2_lc_target(T2_PREFACTOR_POWER, l.coeffs[0], k, xi1, xi2);
        let Some(c) = self.shift_single(&l, target, !h.is_constant())? else {
            return Ok(None);
        };
        let b = bindings_for(&c);
        let b1 = self.free("B1", &b)?;
        let b2 = self.dependent_b("B2", b1, t1_b_relation(T1_B_RELATION, xi1, xi2))?;
        Ok(Some(T2CaseI {
            k,
            c,
            l,
            h,
            xi1,
            xi2,
            b1,
            b2,
        }))
    }

    fn t2_paired(&mut self, case: PairedCase, sub: Subcase) -> Draw<T2Paired> {
        let k = self.k(&[1, 2, 3])?;
        let [t1, t2, r12, r34] = paired_targets(2, case, sub);
        let h1_given = self.poly("H1", 2, &Bindings::new())?;
        let h2_given = self.poly("H2", 2, &Bindings::new())?;
        let c_given = self.vector("c")?;
        // Non-constant H1, H2 force c2 = 0, and then both exponential
        // relations pin the same c1; that is only consistent when the
        // targets agree, i.e. in subcases a and d with a21 = a11.
        let along_z1 = match (&c_given, &h1_given, &h2_given) {
            (Some(_), _, _) => false,
            (None, None, None) => t1 == t2 && self.rng.gen_bool(0.5),
            (None, h1, h2) => [h1, h2]
                .iter()
                .any(|h| h.as_ref().is_some_and(|h| !h.is_constant())),
        };
        let l1_given = self.form("L1", 2)?;
        let l2_given = self.form("L2", 2)?;
        let drawn = l1_given.is_none() || l2_given.is_none();
        let l1 = match l1_given {
            Some(l) => l,
            None => LinearForm::homogeneous(self.vec(2)),
        };
        let l2 = match l2_given {
            Some(l) => l,
            None if along_z1 => LinearForm::homogeneous(vec![l1.coeffs[0], self.unit()]),
            None => LinearForm::homogeneous(self.vec(2)),
        };
        let (a11, a21) = (l1.coeffs[0], l2.coeffs[0]);
        if drawn {
            accept!(a11.norm() >= MIN_LEAD && a21.norm() >= MIN_LEAD);
        }
        let (w1, w2) = (t1 * powu(a11, k), t2 * powu(a21, k));
        let c = match c_given {
            Some(c) => c,
            None => {
                let m1 = self.int("m1")?.unwrap_or(0);
                let c = if along_z1 {
                    let dir = [ONE, ZERO];
                    solve_shift_constraint(&l1, w1, &dir, m1)?
                } else {
                    let m2 = self.int("m2")?.unwrap_or(0);
                    match solve_shift_pair(&l1, &l2, w1, w2, m1, m2) {
                        Ok(c) => c,
                        Err(_) if drawn => return Ok(None),
                        Err(e) => return Err(e),
                    }
                };
                if drawn {
                    accept!(max_norm(&c) <= MAX_SHIFT);
                }
                c
            }
        };
        let h1 = match h1_given {
            Some(h) => h,
            None if along_z1 => self.poly_z2(),
            None => SparsePoly::zero(2),
        };
        let h2 = match h2_given {
            Some(h) => h,
            None if along_z1 => self.poly_z2(),
            None => SparsePoly::zero(2),
        };
        let b = bindings_for(&c);
        let b1 = self.free("B1", &b)?;
        let b3 = self.free("B3", &b)?;
        let b2 = self.dependent_b("B2", b1, r12)?;
        let b4 = self.dependent_b("B4", b3, r34)?;
        Ok(Some(T2Paired {
            k,
            case,
            sub,
            c,
            l1,
            l2,
            h1,
            h2,
            b: [b1, b2, b3, b4],
        }))
    }

    fn t3(&mut self, parity: Parity) -> Draw<T3Params> {
        let k = match parity {
            Parity::Odd => self.k(&[1, 3])?,
            Parity::Even => self.k(&[2, 4])?,
        };
        let none = Bindings::new();
        let eta = match self.constant("eta", &none)? {
            Some(e) => e,
            None => {
                let m = f64::from(self.rng.gen_range(0..4u32));
                match parity {
                    Parity::Odd => I * (PI * m),
                    Parity::Even => I * (PI / 2.0 + PI * m),
                }
            }
        };
        let alpha1 = match self.constant("alpha1", &none)? {
            Some(a) => a,
            None => {
                let req = match parity {
                    Parity::Odd => -cplx(2.0, 0.0) * I * (-eta).exp(),
                    Parity::Even => cplx(2.0, 0.0) * I * eta.exp(),
                };
                let r = if k > 1 { self.rng.gen_range(0..k) } else { 0 };
                let (m, arg) = req.to_polar();
                ComplexScalar::from_polar(
                    m.powf(1.0 / f64::from(k)),
                    (arg + TAU * f64::from(r)) / f64::from(k),
                )
            }
        };
        let alpha2 = self.free("alpha2", &none)?;
        let beta = self.free("beta", &none)?;
        let h = match self.poly("H", 2, &none)? {
            Some(h) => h,
            None if self.rng.gen_bool(0.5) => self.poly_z2(),
            None => SparsePoly::zero(2),
        };
        let mut p = T3Params {
            k,
            parity,
            alpha1,
            alpha2,
            beta,
            eta,
            h,
            c: Vec::new(),
        };
        let Some(c) = self.shift_single(&p.l(), p.lc_target(), !p.h.is_constant())? else {
            return Ok(None);
        };
        p.c = c;
        Ok(Some(p))
    }
}

fn named(name: &str, e: Error) -> Error {
    Error::params(format!("{name}: {e}"))
}
