use super::index::MultiIndex;
use super::poly::SparsePoly;
use super::scalar::{is_finite, ComplexScalar, ZERO};
use crate::error::{Error, Result};

/// Affine form `sum_j coeffs[j] * z_j + constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    pub coeffs: Vec<ComplexScalar>,
    pub constant: ComplexScalar,
}

impl LinearForm {
    pub fn new(coeffs: Vec<ComplexScalar>, constant: ComplexScalar) -> Self {
        LinearForm { coeffs, constant }
    }

    pub fn homogeneous(coeffs: Vec<ComplexScalar>) -> Self {
        LinearForm {
            coeffs,
            constant: ZERO,
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::homogeneous(coeffs.iter().map(|&x| ComplexScalar::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, z: &[ComplexScalar]) -> ComplexScalar {
        self.linear_part(z) + self.constant
    }

    /// The homogeneous part applied to a vector, e.g. `L(c)` for a shift `c`.
    pub fn linear_part(&self, v: &[ComplexScalar]) -> ComplexScalar {
        assert_eq!(v.len(), self.dim(), "vector length");
        self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.constant) && self.coeffs.iter().all(|&c| is_finite(c))
    }

    pub fn to_poly(&self) -> SparsePoly {
        let n = self.dim();
        let mut p = SparsePoly::constant(n, self.constant);
        for (j, &a) in self.coeffs.iter().enumerate() {
            p = &p + &SparsePoly::monomial(n, a, MultiIndex::unit(n, j));
        }
        p
    }

    /// Reads a polynomial of degree at most one back as a form.
    pub fn from_poly(p: &SparsePoly) -> Result<Self> {
        if p.degree() > 1 {
            return Err(Error::params("expected a polynomial of degree at most one"));
        }
        let n = p.dim();
        let coeffs = (0..n).map(|j| p.coeff(&MultiIndex::unit(n, j))).collect();
        Ok(LinearForm {
            coeffs,
            constant: p.constant_term(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::cplx;

    #[test]
    fn poly_round_trip() {
        let l = LinearForm::new(vec![cplx(1.0, 2.0), ZERO, cplx(-3.0, 0.0)], cplx(0.5, 0.0));
        let p = l.to_poly();
        assert_eq!(p.len(), 3);
        assert_eq!(LinearForm::from_poly(&p).unwrap(), l);
        let z = [cplx(0.1, 0.2), cplx(1.0, 0.0), cplx(0.0, -1.0)];
        assert!((p.eval(&z) - l.eval(&z)).norm() < 1e-15);
    }
}
