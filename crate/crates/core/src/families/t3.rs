//! Solutions of `(d^k f1/dz1^k)^2 + (f2(z+c) - f2(z))^2 = 1` and its mirror.

use super::{check_dim, CaseLabel, Construction, Relations};
use crate::algebra::{cplx, powu, ComplexScalar, ExpSum, LinearForm, SparsePoly, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::systems::{SolutionManifest, SystemKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// sinh-type pair, `k` odd
    Odd,
    /// cosh-type pair, `k` even
    Even,
}

impl Parity {
    pub fn of(k: u32) -> Parity {
        if k % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn label(self) -> CaseLabel {
        match self {
            Parity::Odd => CaseLabel::T3Odd,
            Parity::Even => CaseLabel::T3Even,
        }
    }
}

/// With `p = alpha1 z1 + alpha2 z2 + H(z2) + beta`:
///
/// * odd: `f1 = (e^p - e^-p)/(2 alpha1^k)`, `f2 = (e^(p+eta) - e^-(p+eta))/(2 alpha1^k)`
/// * even: `f1 = (e^p + e^-p)/(2 alpha1^k)`, `f2 = (e^(-p+eta) + e^(p-eta))/(2 alpha1^k)`
#[derive(Clone, Debug, PartialEq)]
pub struct T3Params {
    pub k: u32,
    pub parity: Parity,
    pub alpha1: ComplexScalar,
    pub alpha2: ComplexScalar,
    pub beta: ComplexScalar,
    pub eta: ComplexScalar,
    /// Polynomial in `z2` only.
    pub h: SparsePoly,
    pub c: Vec<ComplexScalar>,
}

impl T3Params {
    pub fn l(&self) -> LinearForm {
        LinearForm::homogeneous(vec![self.alpha1, self.alpha2])
    }

    /// `exp(L(c))` demanded by the case relations.
    pub fn lc_target(&self) -> ComplexScalar {
        let ak = powu(self.alpha1, self.k);
        match self.parity {
            Parity::Odd => I * self.eta.exp() / (ak + I * self.eta.exp()),
            Parity::Even => ONE + I * (-self.eta).exp() * ak,
        }
    }
}

pub fn construct_t3(p: &T3Params) -> Result<Construction> {
    if p.k == 0 {
        return Err(Error::params("derivative order k must be at least 1"));
    }
    if Parity::of(p.k) != p.parity {
        return Err(Error::params(format!(
            "case {} requires {} k, got k={}",
            p.parity.label(),
            if p.parity == Parity::Odd {
                "odd"
            } else {
                "even"
            },
            p.k
        )));
    }
    if p.alpha1 == ZERO {
        return Err(Error::params("alpha1 must be non-zero"));
    }
    check_dim("c", p.c.len(), 2)?;
    check_dim("H", p.h.dim(), 2)?;
    if !p.h.depends_only_on(1) {
        return Err(Error::params("H must be a polynomial in z2 only"));
    }
    if p.c.iter().all(|&x| x == ZERO) {
        return Err(Error::ZeroShift);
    }

    let mut rel = Relations::default();
    rel.invariant("H", &p.h, &p.c)?;
    let ak = powu(p.alpha1, p.k);
    let two_eta = (p.eta * cplx(2.0, 0.0)).exp();
    match p.parity {
        Parity::Odd => {
            rel.require("e^{2eta} = 1", two_eta, ONE)?;
            rel.require(
                "alpha1^k = -2i e^{-eta}",
                ak,
                -cplx(2.0, 0.0) * I * (-p.eta).exp(),
            )?;
            rel.require(
                "e^{L(c)} = i e^{eta}/(alpha1^k + i e^{eta})",
                p.l().linear_part(&p.c).exp(),
                p.lc_target(),
            )?;
        }
        Parity::Even => {
            rel.require("e^{2eta} = -1", two_eta, -ONE)?;
            rel.require(
                "alpha1^k = 2i e^{eta}",
                ak,
                cplx(2.0, 0.0) * I * p.eta.exp(),
            )?;
            rel.require(
                "e^{L(c)} = 1 + i e^{-eta} alpha1^k",
                p.l().linear_part(&p.c).exp(),
                p.lc_target(),
            )?;
        }
    }

    let phase = &p.l().to_poly() + &p.h.add_constant(p.beta);
    let e = |q: SparsePoly| ExpSum::exp(q);
    let (f1, f2) = match p.parity {
        Parity::Odd => (
            e(phase.clone()).sub(&e(-&phase))?,
            e(phase.add_constant(p.eta)).sub(&e(-&phase.add_constant(p.eta)))?,
        ),
        Parity::Even => (
            e(phase.clone()).add(&e(-&phase))?,
            e((-&phase).add_constant(p.eta)).add(&e(phase.add_constant(-p.eta)))?,
        ),
    };
    let denom = (cplx(2.0, 0.0) * ak).inv();
    let manifest = SolutionManifest {
        kind: SystemKind::DiffPdd { k: p.k },
        dim: 2,
        c: p.c.clone(),
        f1: f1.scale(denom),
        f2: f2.scale(denom),
        g1: None,
        g2: None,
        provenance: Some(p.parity.label().to_string()),
    };
    Ok(Construction {
        manifest,
        relations: rel.into_vec(),
    })
}
