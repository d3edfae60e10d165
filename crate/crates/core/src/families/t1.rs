//! Solutions of the difference system `f1(z)^2 + f2(z+c)^2 = exp(g1)`,
//! `f2(z)^2 + f1(z+c)^2 = exp(g2)` in any number of variables.

use super::{
    check_dim, check_form, half, paired_targets, target_text, CaseLabel, Construction, PairedCase,
    Relations, Subcase,
};
use crate::algebra::{cplx, powu, ComplexScalar, ExpSum, LinearForm, SparsePoly, I, ONE};
use crate::error::{Error, Result};
use crate::systems::{SolutionManifest, SystemKind};

/// Candidate formulas for `exp(B1 - B2)` in the single-exponential case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BRelation {
    /// `xi1^2 (xi2^4 - 1) / (xi2^2 (xi1^4 - 1))`
    Statement,
    /// `xi1^2 (xi2^4 - 1) / (xi2^2 (xi1^2 + 1))`
    ProofVariant,
}

/// The formula that makes constructed pairs verify; pinned by a regression
/// test that re-runs the oracle over random draws.
pub const T1_B_RELATION: BRelation = BRelation::Statement;

pub fn t1_b_relation(which: BRelation, xi1: ComplexScalar, xi2: ComplexScalar) -> ComplexScalar {
    let num = xi1 * xi1 * (powu(xi2, 4) - ONE);
    match which {
        BRelation::Statement => num / (xi2 * xi2 * (powu(xi1, 4) - ONE)),
        BRelation::ProofVariant => num / (xi2 * xi2 * (xi1 * xi1 + ONE)),
    }
}

/// Required `exp(L(c))` in the single-exponential case.
pub fn t1_lc_target(xi1: ComplexScalar, xi2: ComplexScalar) -> ComplexScalar {
    let (s1, s2) = (xi1 * xi1, xi2 * xi2);
    -((s1 - ONE) * (s2 - ONE)) / ((s1 + ONE) * (s2 + ONE))
}

/// `f_j = (xi_j^2 + 1)/(2 xi_j) exp((L + Phi + B_j)/2)`, `g_j = L + Phi + B_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct T1CaseI {
    pub c: Vec<ComplexScalar>,
    pub l: LinearForm,
    pub phi: SparsePoly,
    pub xi1: ComplexScalar,
    pub xi2: ComplexScalar,
    pub b1: ComplexScalar,
    pub b2: ComplexScalar,
}

/// `f1 = (exp(L1 + Phi + B1) + exp(L2 + Psi + B3))/2`,
/// `f2 = (exp(L1 + Phi + B2) + exp(L2 + Psi + B4))/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct T1Paired {
    pub case: PairedCase,
    pub sub: Subcase,
    pub c: Vec<ComplexScalar>,
    pub l1: LinearForm,
    pub l2: LinearForm,
    pub phi: SparsePoly,
    pub psi: SparsePoly,
    /// `[B1, B2, B3, B4]`
    pub b: [ComplexScalar; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub enum T1Params {
    CaseI(T1CaseI),
    Paired(T1Paired),
}

impl T1Params {
    pub fn label(&self) -> CaseLabel {
        match self {
            T1Params::CaseI(_) => CaseLabel::T1I,
            T1Params::Paired(p) => CaseLabel::T1(p.case, p.sub),
        }
    }
}

fn half_exp(base: &SparsePoly, b: ComplexScalar) -> SparsePoly {
    base.add_constant(b).scale(half())
}

/// Builds the case-I manifest without checking any relation.
pub fn assemble_t1_case_i(p: &T1CaseI) -> Result<SolutionManifest> {
    let n = p.c.len();
    if n == 0 {
        return Err(Error::params("dimension must be positive"));
    }
    check_form("L", &p.l, n)?;
    check_dim("Phi", p.phi.dim(), n)?;
    let base = &p.l.to_poly() + &p.phi;
    let amp = |xi: ComplexScalar| (xi * xi + ONE) / (xi * cplx(2.0, 0.0));
    let f1 = ExpSum::term(SparsePoly::constant(n, amp(p.xi1)), half_exp(&base, p.b1));
    let f2 = ExpSum::term(SparsePoly::constant(n, amp(p.xi2)), half_exp(&base, p.b2));
    Ok(SolutionManifest {
        kind: SystemKind::Difference,
        dim: n,
        c: p.c.clone(),
        f1,
        f2,
        g1: Some(base.add_constant(p.b1)),
        g2: Some(base.add_constant(p.b2)),
        provenance: Some(CaseLabel::T1I.to_string()),
    })
}

fn check_xi(name: &str, xi: ComplexScalar) -> Result<()> {
    if xi.norm() < 1e-12 || (powu(xi, 4) - ONE).norm() < 1e-12 {
        return Err(Error::params(format!(
            "{name} must be non-zero with {name}^4 != 1"
        )));
    }
    Ok(())
}

fn construct_case_i(p: &T1CaseI) -> Result<Construction> {
    check_xi("xi1", p.xi1)?;
    check_xi("xi2", p.xi2)?;
    let manifest = assemble_t1_case_i(p)?;
    let mut rel = Relations::default();
    rel.invariant("Phi", &p.phi, &p.c)?;

    let lc_target = t1_lc_target(p.xi1, p.xi2);
    // Both displayed relations come from two half-relations; their product
    // must reproduce the square of the first one.
    let h1 = (p.xi2 - p.xi2.inv()) / (I * (p.xi1 + p.xi1.inv()));
    let h2 = (p.xi1 - p.xi1.inv()) / (I * (p.xi2 + p.xi2.inv()));
    rel.require(
        "(e^{L(c)})^2 = e^{L(c)+B1-B2} * e^{L(c)-B1+B2}",
        lc_target * lc_target,
        h1 * h1 * h2 * h2,
    )?;
    rel.require(
        "e^{L(c)} = -(xi1^2-1)(xi2^2-1)/((xi1^2+1)(xi2^2+1))",
        p.l.linear_part(&p.c).exp(),
        lc_target,
    )?;
    rel.require(
        "e^{B1-B2} = xi1^2(xi2^4-1)/(xi2^2(xi1^4-1))",
        (p.b1 - p.b2).exp(),
        t1_b_relation(T1_B_RELATION, p.xi1, p.xi2),
    )?;
    Ok(Construction {
        manifest,
        relations: rel.into_vec(),
    })
}

fn construct_paired(p: &T1Paired) -> Result<Construction> {
    let n = p.c.len();
    if n == 0 {
        return Err(Error::params("dimension must be positive"));
    }
    check_form("L1", &p.l1, n)?;
    check_form("L2", &p.l2, n)?;
    check_dim("Phi", p.phi.dim(), n)?;
    check_dim("Psi", p.psi.dim(), n)?;
    let e1 = &p.l1.to_poly() + &p.phi;
    let e2 = &p.l2.to_poly() + &p.psi;
    let scale = 1.0 + e1.max_coeff_modulus().max(e2.max_coeff_modulus());
    if e1.max_coeff_distance(&e2) <= 1e-12 * scale {
        return Err(Error::params("L1 + Phi must differ from L2 + Psi"));
    }

    let mut rel = Relations::default();
    rel.invariant("Phi", &p.phi, &p.c)?;
    rel.invariant("Psi", &p.psi, &p.c)?;
    let [t1, t2, r12, r34] = paired_targets(1, p.case, p.sub);
    let [b1, b2, b3, b4] = p.b;
    rel.require(
        &format!("e^{{L1(c)}} = {}", target_text(t1, "")),
        p.l1.linear_part(&p.c).exp(),
        t1,
    )?;
    rel.require(
        &format!("e^{{L2(c)}} = {}", target_text(t2, "")),
        p.l2.linear_part(&p.c).exp(),
        t2,
    )?;
    rel.require(
        &format!("e^{{B1-B2}} = {}", target_text(r12, "")),
        (b1 - b2).exp(),
        r12,
    )?;
    rel.require(
        &format!("e^{{B3-B4}} = {}", target_text(r34, "")),
        (b3 - b4).exp(),
        r34,
    )?;

    let h = |b1: ComplexScalar, b3: ComplexScalar| {
        ExpSum::exp(e1.add_constant(b1))
            .add(&ExpSum::exp(e2.add_constant(b3)))
            .map(|s| s.scale(half()))
    };
    let sum = &e1 + &e2;
    let manifest = SolutionManifest {
        kind: SystemKind::Difference,
        dim: n,
        c: p.c.clone(),
        f1: h(b1, b3)?,
        f2: h(b2, b4)?,
        g1: Some(sum.add_constant(b1 + b3)),
        g2: Some(sum.add_constant(b2 + b4)),
        provenance: Some(CaseLabel::T1(p.case, p.sub).to_string()),
    };
    Ok(Construction {
        manifest,
        relations: rel.into_vec(),
    })
}

/// Builds a solution of the difference system, rejecting parameters that
/// break any relation of the chosen case.
pub fn construct_t1(params: &T1Params) -> Result<Construction> {
    match params {
        T1Params::CaseI(p) => construct_case_i(p),
        T1Params::Paired(p) => construct_paired(p),
    }
}
