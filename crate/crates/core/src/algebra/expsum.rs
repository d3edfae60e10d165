//! Exponential sums `sum_j Q_j(z) exp(P_j(z))` and their canonical form.

use std::cmp::Ordering;

use super::poly::{Accumulator, SparsePoly};
use super::scalar::{is_finite, ComplexScalar, EXP_OVERFLOW, ONE, ZERO};
use crate::error::{Error, Result};

/// Relative threshold below which coefficients are treated as zero and two
/// exponent polynomials as equal.
pub const PRUNE_REL: f64 = 1e-12;

/// Exponent pairs closer than this multiple of the merge threshold (but not
/// merged) are reported as borderline.
const BORDERLINE_FACTOR: f64 = 1e3;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub coeff: SparsePoly,
    pub exponent: SparsePoly,
}

impl ExpTerm {
    pub fn new(coeff: SparsePoly, exponent: SparsePoly) -> Self {
        ExpTerm { coeff, exponent }
    }

    fn canonical_cmp(&self, other: &ExpTerm) -> Ordering {
        self.exponent
            .canonical_cmp(&other.exponent)
            .then_with(|| self.coeff.canonical_cmp(&other.coeff))
    }
}

/// Finite sum of polynomial-times-exponential terms in a fixed number of
/// variables.
///
/// Every value handed out by the public operations is in canonical form:
/// exponents have no constant term and are pairwise distinct, no coefficient
/// is zero, and terms are sorted (descending leading exponent monomial, then
/// coefficient).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum {
    dim: usize,
    terms: Vec<ExpTerm>,
}

/// A canonical sum together with notes about merges that were close calls.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub value: ExpSum,
    pub warnings: Vec<String>,
}

impl ExpSum {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        ExpSum {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn constant(dim: usize, c: ComplexScalar) -> Self {
        Self::from_poly(SparsePoly::constant(dim, c))
    }

    /// A polynomial viewed as a single term with exponent zero.
    pub fn from_poly(p: SparsePoly) -> Self {
        let dim = p.dim();
        Self::term(p, SparsePoly::zero(dim))
    }

    /// `exp(P)` as a one-term sum.
    pub fn exp(p: SparsePoly) -> Self {
        let dim = p.dim();
        Self::term(SparsePoly::constant(dim, ONE), p)
    }

    /// `Q exp(P)` in canonical form.
    pub fn term(coeff: SparsePoly, exponent: SparsePoly) -> Self {
        assert_eq!(coeff.dim(), exponent.dim(), "term dimension mismatch");
        ExpSum {
            dim: coeff.dim(),
            terms: vec![ExpTerm::new(coeff, exponent)],
        }
        .normalize()
    }

    /// Builds a canonical sum from raw terms, checking dimensions.
    pub fn from_terms(dim: usize, terms: Vec<ExpTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::params("dimension must be positive"));
        }
        for t in &terms {
            for d in [t.coeff.dim(), t.exponent.dim()] {
                if d != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: d,
                    });
                }
            }
            if !t.coeff.is_finite() || !t.exponent.is_finite() {
                return Err(Error::NonFinite("exponential sum term"));
            }
        }
        Ok(ExpSum { dim, terms }.normalize())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient modulus over all terms.
    pub fn max_coeff_modulus(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.max_coeff_modulus())
            .fold(0.0, f64::max)
    }

    pub fn normalize(&self) -> ExpSum {
        self.normalize_with_report().value
    }

    /// Canonicalizes the sum:
    ///
    /// 1. the constant of each exponent is folded into its coefficient as
    ///    `exp(constant)` and exponent dust is chopped;
    /// 2. terms whose exponents agree to `PRUNE_REL` (relative to the larger
    ///    exponent coefficient) are merged;
    /// 3. coefficients below `PRUNE_REL * scale` are dropped, where
    ///    `scale` is the largest coefficient modulus seen before or after
    ///    merging;
    /// 4. terms are sorted.
    pub fn normalize_with_report(&self) -> Normalized {
        let dim = self.dim;
        let mut warnings = Vec::new();

        let mut folded: Vec<ExpTerm> = Vec::with_capacity(self.terms.len());
        let mut scale: f64 = 0.0;
        for t in &self.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let (k, rest) = t.exponent.split_constant();
            let rest = rest.chop(PRUNE_REL * (1.0 + rest.max_nonconstant_modulus()));
            let coeff = if k == ZERO {
                t.coeff.clone()
            } else {
                t.coeff.scale(k.exp())
            };
            scale = scale.max(coeff.max_coeff_modulus());
            folded.push(ExpTerm::new(coeff, rest));
        }
        folded.sort_by(|a, b| a.exponent.canonical_cmp(&b.exponent));

        // Greedy clustering around the first exponent of each cluster.
        let mut clusters: Vec<(SparsePoly, Accumulator)> = Vec::new();
        for t in folded {
            let mut target = None;
            for (idx, (rep, _)) in clusters.iter().enumerate() {
                let tol =
                    PRUNE_REL * (1.0 + rep.max_coeff_modulus().max(t.exponent.max_coeff_modulus()));
                let d = rep.max_coeff_distance(&t.exponent);
                if d <= tol {
                    target = Some(idx);
                    break;
                }
                if d <= BORDERLINE_FACTOR * tol {
                    warnings.push(format!(
                        "exponents differ by {d:.3e}, kept apart (merge threshold {tol:.3e})"
                    ));
                }
            }
            match target {
                Some(idx) => clusters[idx].1.push_poly(&t.coeff),
                None => {
                    let mut acc = Accumulator::new(dim);
                    acc.push_poly(&t.coeff);
                    clusters.push((t.exponent, acc));
                }
            }
        }

        let merged: Vec<ExpTerm> = clusters
            .into_iter()
            .map(|(exponent, acc)| ExpTerm::new(acc.finish(), exponent))
            .collect();
        for t in &merged {
            scale = scale.max(t.coeff.max_coeff_modulus());
        }
        let threshold = PRUNE_REL * scale;
        let mut terms: Vec<ExpTerm> = merged
            .into_iter()
            .map(|t| ExpTerm::new(t.coeff.chop(threshold), t.exponent))
            .filter(|t| !t.coeff.is_zero())
            .collect();
        terms.sort_by(|a, b| b.canonical_cmp(a));

        Normalized {
            value: ExpSum { dim, terms },
            warnings,
        }
    }

    fn check_dim(&self, other: &ExpSum) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExpSum) -> Result<ExpSum> {
        self.check_dim(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(ExpSum {
            dim: self.dim,
            terms,
        }
        .normalize())
    }

    pub fn sub(&self, other: &ExpSum) -> Result<ExpSum> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExpSum {
        self.scale(-ONE)
    }

    pub fn scale(&self, s: ComplexScalar) -> ExpSum {
        let terms = self
            .terms
            .iter()
            .map(|t| ExpTerm::new(t.coeff.scale(s), t.exponent.clone()))
            .collect();
        ExpSum {
            dim: self.dim,
            terms,
        }
        .normalize()
    }

    pub fn mul(&self, other: &ExpSum) -> Result<ExpSum> {
        self.check_dim(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(ExpTerm::new(&a.coeff * &b.coeff, &a.exponent + &b.exponent));
            }
        }
        Ok(ExpSum {
            dim: self.dim,
            terms,
        }
        .normalize())
    }

    pub fn square(&self) -> ExpSum {
        self.mul(self).expect("same dimension")
    }

    /// `order`-fold partial derivative in `z_axis` (axis is 1-based).
    pub fn derive(&self, axis: usize, order: u32) -> Result<ExpSum> {
        if axis == 0 || axis > self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let a = axis - 1;
        let mut cur = self.clone();
        for _ in 0..order {
            let terms = cur
                .terms
                .iter()
                .map(|t| {
                    let d = &t.coeff.derive(a) + &(&t.coeff * &t.exponent.derive(a));
                    ExpTerm::new(d, t.exponent.clone())
                })
                .collect();
            cur = ExpSum {
                dim: self.dim,
                terms,
            }
            .normalize();
        }
        Ok(cur)
    }

    /// `z -> self(z + c)`.
    pub fn shift(&self, c: &[ComplexScalar]) -> Result<ExpSum> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: c.len(),
            });
        }
        if !c.iter().all(|&x| is_finite(x)) {
            return Err(Error::NonFinite("shift vector"));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| ExpTerm::new(t.coeff.shift(c), t.exponent.shift(c)))
            .collect();
        Ok(ExpSum {
            dim: self.dim,
            terms,
        }
        .normalize())
    }

    /// Value at `z`. Reports overflow instead of returning infinities.
    pub fn evaluate(&self, z: &[ComplexScalar]) -> Result<ComplexScalar> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        let mut total = ZERO;
        for t in &self.terms {
            let e = t.exponent.eval(z);
            if e.re > EXP_OVERFLOW {
                return Err(Error::Overflow {
                    real_part: e.re,
                    limit: EXP_OVERFLOW,
                });
            }
            total += t.coeff.eval(z) * e.exp();
        }
        if !is_finite(total) {
            return Err(Error::NonFinite("evaluation"));
        }
        Ok(total)
    }

    /// Largest coefficient of `self - other` after normalization; zero for
    /// structurally equal sums.
    pub fn distance(&self, other: &ExpSum) -> Result<f64> {
        Ok(self.sub(other)?.max_coeff_modulus())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{cplx, I};
    use std::f64::consts::PI;

    fn z(dim: usize, axis: usize) -> SparsePoly {
        SparsePoly::var(dim, axis)
    }

    #[test]
    fn cancellation_gives_zero() {
        let x = ExpSum::constant(2, ONE)
            .add(&ExpSum::constant(2, -ONE))
            .unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn euler_constant_is_folded() {
        let p = z(2, 0).add_constant(cplx(0.0, PI));
        let x = ExpSum::exp(p);
        assert_eq!(x.len(), 1);
        let t = &x.terms()[0];
        assert_eq!(t.exponent, z(2, 0));
        assert!((t.coeff.constant_term() + ONE).norm() < 1e-15);
        assert_eq!(t.coeff.len(), 1);
    }

    #[test]
    fn square_and_inverse() {
        let p = &z(2, 0).scale(cplx(2.0, 0.0)) + &z(2, 1);
        let e = ExpSum::exp(p.clone());
        let sq = e.square();
        assert_eq!(sq, ExpSum::exp(p.scale(cplx(2.0, 0.0))));
        let inv = ExpSum::exp(-&p);
        assert_eq!(e.mul(&inv).unwrap(), ExpSum::constant(2, ONE));
    }

    #[test]
    fn product_rule() {
        let x = ExpSum::term(z(2, 0), z(2, 0));
        let d = x.derive(1, 1).unwrap();
        let expected = ExpSum::term(z(2, 0).add_constant(ONE), z(2, 0));
        assert_eq!(d, expected);
        assert!(matches!(x.derive(3, 1), Err(Error::AxisOutOfRange { .. })));
    }

    #[test]
    fn shift_by_pi_i_flips_sign() {
        let x = ExpSum::exp(z(2, 0));
        let s = x.shift(&[cplx(0.0, PI), ZERO]).unwrap();
        assert!(s.distance(&x.neg()).unwrap() < 1e-15);
        let five = ExpSum::constant(2, cplx(5.0, 0.0));
        assert_eq!(five.shift(&[cplx(3.0, 1.0), I]).unwrap(), five);
    }

    #[test]
    fn evaluate_reports_overflow() {
        let x = ExpSum::exp(z(1, 0));
        assert!(x.evaluate(&[cplx(800.0, 0.0)]).is_err());
        assert!((x.evaluate(&[ZERO]).unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let a = ExpSum::exp(z(2, 0));
        let b = ExpSum::exp(z(3, 0));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn near_equal_exponents_merge() {
        let p = z(2, 0);
        let q =
            &p + &SparsePoly::monomial(2, cplx(1e-14, 0.0), super::super::MultiIndex::unit(2, 1));
        let x = ExpSum::exp(p).add(&ExpSum::exp(q)).unwrap();
        assert_eq!(x.len(), 1);
    }
}
