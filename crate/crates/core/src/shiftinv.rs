//! Polynomials invariant under the shift `z -> z + c`, built as polynomials in
//! linear forms `d . z` with `d . c = 0`.

use serde::Serialize;

use crate::algebra::{ComplexScalar, LinearForm, SparsePoly, ONE, ZERO};
use crate::error::{Error, Result};

/// Relative residual above which a block form is considered outside the
/// kernel span.
pub const SPAN_TOL: f64 = 1e-10;

/// Basis of the forms annihilating a shift vector `c`.
///
/// With `p` the index of the largest `|c_p|`, the forms are
/// `e_j - (c_j / c_p) e_p` for every `j != p`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub c: Vec<ComplexScalar>,
    pub pivot: usize,
    pub forms: Vec<LinearForm>,
}

/// One summand `coeff * form(z)^degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantBlock {
    pub form: LinearForm,
    pub degree: u32,
    pub coeff: ComplexScalar,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InvariantPolySpec {
    pub blocks: Vec<InvariantBlock>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub max_defect: f64,
    pub pass: bool,
}

impl InvariantPolySpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn block(mut self, form: LinearForm, degree: u32, coeff: ComplexScalar) -> Self {
        self.blocks.push(InvariantBlock {
            form,
            degree,
            coeff,
        });
        self
    }

    pub fn concat(&self, other: &InvariantPolySpec) -> InvariantPolySpec {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        InvariantPolySpec { blocks }
    }
}

pub fn kernel_basis(c: &[ComplexScalar]) -> Result<KernelBasis> {
    if c.is_empty() {
        return Err(Error::params("shift vector must have at least one entry"));
    }
    if !c.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::NonFinite("shift vector"));
    }
    let (pivot, cp) = c.iter().enumerate().fold((0, ZERO), |best, (j, &x)| {
        if x.norm() > best.1.norm() {
            (j, x)
        } else {
            best
        }
    });
    if cp == ZERO {
        return Err(Error::ZeroShift);
    }
    let n = c.len();
    let forms = (0..n)
        .filter(|&j| j != pivot)
        .map(|j| {
            let mut d = vec![ZERO; n];
            d[j] = ONE;
            d[pivot] = -c[j] / cp;
            LinearForm::homogeneous(d)
        })
        .collect();
    Ok(KernelBasis {
        c: c.to_vec(),
        pivot,
        forms,
    })
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Relative distance of `d` from the span of the basis forms, via
    /// Gram-Schmidt projection under the Hermitian inner product.
    pub fn span_residual(&self, d: &[ComplexScalar]) -> f64 {
        let norm = |v: &[ComplexScalar]| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let dn = norm(d);
        if dn == 0.0 {
            return 0.0;
        }
        let mut ortho: Vec<Vec<ComplexScalar>> = Vec::new();
        for f in &self.forms {
            let mut v = f.coeffs.clone();
            for q in &ortho {
                let h: ComplexScalar = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= h * y);
            }
            let vn = norm(&v);
            if vn > 0.0 {
                ortho.push(v.iter().map(|x| x / vn).collect());
            }
        }
        let mut r = d.to_vec();
        for q in &ortho {
            let h: ComplexScalar = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
            r.iter_mut().zip(q).for_each(|(x, y)| *x -= h * y);
        }
        norm(&r) / dn
    }

    /// `sum_j w_j forms[j]`.
    pub fn combine(&self, weights: &[ComplexScalar]) -> LinearForm {
        assert_eq!(weights.len(), self.forms.len(), "weight count");
        let mut d = vec![ZERO; self.dim()];
        for (w, f) in weights.iter().zip(&self.forms) {
            d.iter_mut().zip(&f.coeffs).for_each(|(x, a)| *x += w * a);
        }
        LinearForm::homogeneous(d)
    }
}

/// Expands `sum coeff * form(z)^degree` after checking that every form lies
/// in the kernel span.
pub fn build_invariant(spec: &InvariantPolySpec, basis: &KernelBasis) -> Result<SparsePoly> {
    let n = basis.dim();
    let mut out = SparsePoly::zero(n);
    for (idx, b) in spec.blocks.iter().enumerate() {
        if b.form.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.form.dim(),
            });
        }
        let residual = basis.span_residual(&b.form.coeffs);
        if residual >= SPAN_TOL {
            return Err(Error::NotInSpan {
                block: idx,
                residual,
            });
        }
        out = &out + &b.form.to_poly().pow(b.degree).scale(b.coeff);
    }
    Ok(out)
}

/// Coefficient-wise check of `p(z + c) - p(z) = 0`.
pub fn check_shift_invariant(p: &SparsePoly, c: &[ComplexScalar], tol: f64) -> InvarianceReport {
    let diff = &p.shift(c) - p;
    let max_defect = diff.max_coeff_modulus();
    InvarianceReport {
        max_defect,
        pass: max_defect <= tol * (1.0 + p.max_coeff_modulus()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cplx;

    #[test]
    fn two_dim_basis_is_proportional_to_swap_form() {
        let c = [cplx(0.3, 1.0), cplx(-2.0, 0.5)];
        let b = kernel_basis(&c).unwrap();
        assert_eq!(b.pivot, 1);
        assert_eq!(b.forms.len(), 1);
        let d = &b.forms[0].coeffs;
        // (c2, -c1) scaled by 1/c2
        assert!((d[0] - ONE).norm() < 1e-15);
        assert!((d[1] + c[0] / c[1]).norm() < 1e-15);
    }

    #[test]
    fn axis_shift_basis() {
        let b = kernel_basis(&[ONE, ZERO, ZERO]).unwrap();
        assert_eq!(b.forms[0].coeffs, vec![ZERO, ONE, ZERO]);
        assert_eq!(b.forms[1].coeffs, vec![ZERO, ZERO, ONE]);
    }

    #[test]
    fn zero_shift_rejected() {
        assert_eq!(kernel_basis(&[ZERO, ZERO]), Err(Error::ZeroShift));
    }

    #[test]
    fn swap_form_power_is_invariant() {
        let c = [cplx(1.2, -0.4), cplx(0.7, 2.0)];
        let b = kernel_basis(&c).unwrap();
        let form = LinearForm::homogeneous(vec![c[1], -c[0]]);
        let spec = InvariantPolySpec::new().block(form, 5, ONE);
        let p = build_invariant(&spec, &b).unwrap();
        assert_eq!(p.len(), 6);
        let r = check_shift_invariant(&p, &c, 1e-10);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn form_outside_span_is_rejected_with_index() {
        let c = [ONE, ZERO];
        let b = kernel_basis(&c).unwrap();
        let spec = InvariantPolySpec::new()
            .block(LinearForm::from_real(&[0.0, 1.0]), 2, ONE)
            .block(LinearForm::from_real(&[1.0, 0.0]), 2, ONE);
        match build_invariant(&spec, &b) {
            Err(Error::NotInSpan { block, .. }) => assert_eq!(block, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn plain_variable_is_not_invariant() {
        let r = check_shift_invariant(&SparsePoly::var(2, 0), &[ONE, ZERO], 1e-10);
        assert!(!r.pass);
        assert_eq!(r.max_defect, 1.0);
    }

    #[test]
    fn empty_spec_is_zero() {
        let b = kernel_basis(&[ONE, ONE]).unwrap();
        assert!(build_invariant(&InvariantPolySpec::new(), &b)
            .unwrap()
            .is_zero());
    }
}
