//! Constructors for the solution families of the three systems, with the
//! constant relations of each case enforced at build time.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::scalar::rel_defect;
use crate::algebra::{cplx, ComplexScalar, LinearForm, SparsePoly, I, ONE};
use crate::error::{Error, Result};
use crate::shiftinv::{check_shift_invariant, SPAN_TOL};
use crate::systems::SolutionManifest;

mod sample;
mod t1;
mod t2;
mod t3;

pub use sample::{draw, resolve, Overrides, Params, PARAM_NAMES};
pub use t1::{
    assemble_t1_case_i, construct_t1, t1_b_relation, t1_lc_target, BRelation, T1CaseI, T1Paired,
    T1Params, T1_B_RELATION,
};
pub use t2::{
    assemble_t2_case_i, construct_t2, t2_lc_target, PrefactorPower, T2CaseI, T2Paired, T2Params,
    T2_PREFACTOR_POWER,
};
pub use t3::{construct_t3, Parity, T3Params};

/// Largest relative defect accepted for any case relation.
pub const RELATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairedCase {
    II,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcase {
    A,
    B,
    C,
    D,
}

impl Subcase {
    pub const ALL: [Subcase; 4] = [Subcase::A, Subcase::B, Subcase::C, Subcase::D];

    fn letter(self) -> char {
        match self {
            Subcase::A => 'a',
            Subcase::B => 'b',
            Subcase::C => 'c',
            Subcase::D => 'd',
        }
    }
}

/// A theorem case as named on the command line, e.g. `t2.iii.c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    T1I,
    T1(PairedCase, Subcase),
    T2I,
    T2(PairedCase, Subcase),
    T3Odd,
    T3Even,
}

impl CaseLabel {
    /// Every label, in display order.
    pub fn all() -> Vec<CaseLabel> {
        let mut v = vec![CaseLabel::T1I];
        for case in [PairedCase::II, PairedCase::III] {
            v.extend(Subcase::ALL.iter().map(|&s| CaseLabel::T1(case, s)));
        }
        v.push(CaseLabel::T2I);
        for case in [PairedCase::II, PairedCase::III] {
            v.extend(Subcase::ALL.iter().map(|&s| CaseLabel::T2(case, s)));
        }
        v.push(CaseLabel::T3Odd);
        v.push(CaseLabel::T3Even);
        v
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roman = |c: &PairedCase| match c {
            PairedCase::II => "ii",
            PairedCase::III => "iii",
        };
        match self {
            CaseLabel::T1I => f.write_str("t1.i"),
            CaseLabel::T2I => f.write_str("t2.i"),
            CaseLabel::T1(c, s) => write!(f, "t1.{}.{}", roman(c), s.letter()),
            CaseLabel::T2(c, s) => write!(f, "t2.{}.{}", roman(c), s.letter()),
            CaseLabel::T3Odd => f.write_str("t3.odd"),
            CaseLabel::T3Even => f.write_str("t3.even"),
        }
    }
}

impl FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseLabel::all()
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| {
                Error::params(format!(
                    "unknown case label `{s}` (expected one of t1.i, t1.ii.a-d, t1.iii.a-d, \
                     t2.i, t2.ii.a-d, t2.iii.a-d, t3.odd, t3.even)"
                ))
            })
    }
}

/// One enforced relation: the achieved value, the value the case requires,
/// and their relative defect.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    #[serde(serialize_with = "ser_complex")]
    pub value: ComplexScalar,
    #[serde(serialize_with = "ser_complex")]
    pub required: ComplexScalar,
    pub defect: f64,
}

pub(crate) fn ser_complex<S: serde::Serializer>(
    z: &ComplexScalar,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// A checked manifest and the relations that were enforced to build it.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub manifest: SolutionManifest,
    pub relations: Vec<RelationCheck>,
}

impl Construction {
    /// One `name: value=.. required=.. defect=..` line per enforced relation.
    pub fn relation_lines(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|r| {
                format!(
                    "{}: value={} required={} defect={:.1e}",
                    r.name,
                    crate::parser::format_complex(r.value),
                    crate::parser::format_complex(r.required),
                    r.defect
                )
            })
            .collect()
    }
}

#[derive(Default)]
pub(crate) struct Relations(Vec<RelationCheck>);

impl Relations {
    /// Records the relation, failing if its relative defect exceeds
    /// [`RELATION_TOL`].
    pub(crate) fn require(
        &mut self,
        name: &str,
        value: ComplexScalar,
        required: ComplexScalar,
    ) -> Result<()> {
        let defect = rel_defect(value, required);
        if !(defect <= RELATION_TOL) {
            return Err(Error::RelationViolated {
                relation: name.to_string(),
                defect,
            });
        }
        self.0.push(RelationCheck {
            name: name.to_string(),
            value,
            required,
            defect,
        });
        Ok(())
    }

    /// Shift invariance `p(z + c) = p(z)`.
    pub(crate) fn invariant(
        &mut self,
        name: &str,
        p: &SparsePoly,
        c: &[ComplexScalar],
    ) -> Result<()> {
        let r = check_shift_invariant(p, c, SPAN_TOL);
        if !r.pass {
            return Err(Error::RelationViolated {
                relation: format!("{name}(z + c) = {name}(z)"),
                defect: r.max_defect,
            });
        }
        Ok(())
    }

    pub(crate) fn into_vec(self) -> Vec<RelationCheck> {
        self.0
    }
}

pub(crate) fn check_dim(what: &str, found: usize, n: usize) -> Result<()> {
    if found != n {
        return Err(Error::params(format!(
            "{what} has dimension {found}, expected {n}"
        )));
    }
    Ok(())
}

pub(crate) fn check_form(what: &str, l: &LinearForm, n: usize) -> Result<()> {
    check_dim(what, l.dim(), n)?;
    if l.constant != crate::algebra::ZERO {
        return Err(Error::params(format!(
            "{what} must be homogeneous; put constants into the B parameters"
        )));
    }
    if !l.is_finite() {
        return Err(Error::NonFinite("linear form"));
    }
    Ok(())
}

/// Principal logarithm with `arg` in `(-pi, pi]`; a negative zero imaginary
/// part counts as positive so `ln(-1) = pi i` however `-1` was produced.
pub(crate) fn ln(z: ComplexScalar) -> ComplexScalar {
    crate::algebra::cplx(z.re, z.im + 0.0).ln()
}

/// `c = t * direction` with `t = (log|target| + i arg(target) + 2 pi i branch) / L(direction)`,
/// so that `exp(L(c)) = target`.
pub fn solve_shift_constraint(
    l: &LinearForm,
    target: ComplexScalar,
    direction: &[ComplexScalar],
    branch: i64,
) -> Result<Vec<ComplexScalar>> {
    check_dim("direction", direction.len(), l.dim())?;
    if target.norm() == 0.0 || !target.re.is_finite() || !target.im.is_finite() {
        return Err(Error::params(
            "target of exp(L(c)) must be finite and non-zero",
        ));
    }
    let ld = l.linear_part(direction);
    let scale = l.max_coeff_modulus() * direction.iter().map(|d| d.norm()).fold(0.0, f64::max);
    if ld.norm() <= 1e-14 * scale || ld.norm() == 0.0 {
        return Err(Error::params("direction lies in the kernel of L"));
    }
    let t = (ln(target) + I * (std::f64::consts::TAU * branch as f64)) / ld;
    Ok(direction.iter().map(|d| d * t).collect())
}

/// Minimum-norm `c` with `exp(L1(c)) = target1` and `exp(L2(c)) = target2`
/// on the branches `m1`, `m2`.
pub fn solve_shift_pair(
    l1: &LinearForm,
    l2: &LinearForm,
    target1: ComplexScalar,
    target2: ComplexScalar,
    m1: i64,
    m2: i64,
) -> Result<Vec<ComplexScalar>> {
    let n = l1.dim();
    check_dim("L2", l2.dim(), n)?;
    if target1.norm() == 0.0 || target2.norm() == 0.0 {
        return Err(Error::params("targets must be non-zero"));
    }
    let tau = std::f64::consts::TAU;
    let w = [
        ln(target1) + I * (tau * m1 as f64),
        ln(target2) + I * (tau * m2 as f64),
    ];
    let a = [&l1.coeffs, &l2.coeffs];
    // G = A A^H (2x2 Hermitian)
    let g = |r: usize, s: usize| -> ComplexScalar {
        a[r].iter().zip(a[s]).map(|(x, y)| x * y.conj()).sum()
    };
    let (g11, g12, g21, g22) = (g(0, 0), g(0, 1), g(1, 0), g(1, 1));
    let det = g11 * g22 - g12 * g21;
    if det.norm() <= 1e-12 * (g11.norm() * g22.norm()).max(f64::MIN_POSITIVE) {
        return Err(Error::params(
            "L1 and L2 are linearly dependent; no shift satisfies both",
        ));
    }
    let y = [
        (g22 * w[0] - g12 * w[1]) / det,
        (g11 * w[1] - g21 * w[0]) / det,
    ];
    Ok((0..n)
        .map(|j| a[0][j].conj() * y[0] + a[1][j].conj() * y[1])
        .collect())
}

/// `(exp(L1(c)), exp(L2(c)), exp(B1 - B2), exp(B3 - B4))` required by a
/// paired subcase; for the second theorem the first two are further
/// multiplied by `a11^k` and `a21^k`.
pub fn paired_targets(theorem: u8, case: PairedCase, sub: Subcase) -> [ComplexScalar; 4] {
    let one = ONE;
    let i = I;
    let (l1, l2, b12, b34) = match (case, sub) {
        (PairedCase::II, Subcase::A) => (i, i, -one, one),
        (PairedCase::II, Subcase::B) => (i, -i, -one, -one),
        (PairedCase::II, Subcase::C) => (-i, i, one, one),
        (PairedCase::II, Subcase::D) => (-i, -i, one, -one),
        (PairedCase::III, s) => {
            let (l1, l2) = match s {
                Subcase::A => (one, one),
                Subcase::B => (one, -one),
                Subcase::C => (-one, one),
                Subcase::D => (-one, -one),
            };
            // The B-ratios of case iii are conjugate between the two theorems.
            let (b12, b34) = match s {
                Subcase::A => (-i, i),
                Subcase::B => (-i, -i),
                Subcase::C => (i, i),
                Subcase::D => (i, -i),
            };
            if theorem == 1 {
                (l1, l2, b12, b34)
            } else {
                (l1, l2, -b12, -b34)
            }
        }
    };
    [l1, l2, b12, b34]
}

/// Text form of a target used in relation names, e.g. `-i` or `i*a11^k`.
pub(crate) fn target_text(t: ComplexScalar, suffix: &str) -> String {
    let base = if t == ONE {
        ""
    } else if t == -ONE {
        "-"
    } else if t == I {
        "i"
    } else if t == -I {
        "-i"
    } else {
        unreachable!("targets are fourth roots of unity")
    };
    match (base, suffix) {
        ("", "") => "1".into(),
        ("-", "") => "-1".into(),
        (b, "") => b.into(),
        ("", s) => s.into(),
        ("-", s) => format!("-{s}"),
        (b, s) => format!("{b}*{s}"),
    }
}

pub(crate) fn half() -> ComplexScalar {
    cplx(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let all = CaseLabel::all();
        assert_eq!(all.len(), 20);
        for l in all {
            assert_eq!(l.to_string().parse::<CaseLabel>().unwrap(), l);
        }
        assert!("t4.i".parse::<CaseLabel>().is_err());
    }

    #[test]
    fn shift_constraint_example() {
        let l = LinearForm::from_real(&[1.0, 2.0]);
        let c =
            solve_shift_constraint(&l, cplx(-9.0 / 25.0, 0.0), &[ONE, cplx(0.0, 0.0)], 0).unwrap();
        assert!((c[0] - cplx((9.0f64 / 25.0).ln(), std::f64::consts::PI)).norm() < 1e-15);
        assert_eq!(c[1], cplx(0.0, 0.0));
        let e = l.linear_part(&c).exp();
        assert!((e - cplx(-9.0 / 25.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn shift_constraint_branches_differ_by_period() {
        let l = LinearForm::from_real(&[1.0, 1.0]);
        let d = [ONE, ONE];
        let c0 = solve_shift_constraint(&l, I, &d, 0).unwrap();
        let c1 = solve_shift_constraint(&l, I, &d, 1).unwrap();
        let step = I * std::f64::consts::TAU / cplx(2.0, 0.0);
        assert!((c1[0] - c0[0] - step).norm() < 1e-14);
        for c in [c0, c1] {
            assert!((l.linear_part(&c).exp() - I).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_direction_rejected() {
        let l = LinearForm::from_real(&[1.0, -1.0]);
        assert!(solve_shift_constraint(&l, I, &[ONE, ONE], 0).is_err());
        assert!(solve_shift_constraint(&l, cplx(0.0, 0.0), &[ONE, cplx(0.0, 0.0)], 0).is_err());
    }

    #[test]
    fn pair_solver_hits_both_targets() {
        let l1 = LinearForm::new(
            vec![cplx(0.3, 0.1), cplx(-0.7, 0.2), cplx(0.5, 0.5)],
            cplx(0.0, 0.0),
        );
        let l2 = LinearForm::new(
            vec![cplx(1.0, 0.0), cplx(0.2, -0.4), cplx(0.0, 0.9)],
            cplx(0.0, 0.0),
        );
        let c = solve_shift_pair(&l1, &l2, I, -ONE, 0, 1).unwrap();
        assert!((l1.linear_part(&c).exp() - I).norm() < 1e-12);
        assert!((l2.linear_part(&c).exp() + ONE).norm() < 1e-12);
    }
}
