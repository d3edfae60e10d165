//! Sparse multivariate polynomials over the complex numbers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::index::MultiIndex;
use super::scalar::{binomial, is_finite, powu, total_cmp, ComplexScalar, ONE, ZERO};
use crate::error::{Error, Result};

/// Accumulated sums whose modulus falls below this many machine epsilons of
/// the summed magnitudes are treated as exact cancellation.
const CANCEL_EPS: f64 = 64.0 * f64::EPSILON;

/// Polynomial in `dim` complex variables stored as a map from exponent
/// vector to coefficient. Zero coefficients are never stored.
///
/// The arithmetic operators panic on mixed dimensions; [`crate::algebra::ExpSum`]
/// checks dimensions up front and reports an error instead.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, ComplexScalar>,
}

/// Sum of contributions per monomial together with the total magnitude that
/// went into it, so catastrophic cancellation can be recognised.
pub(crate) struct Accumulator {
    dim: usize,
    map: BTreeMap<MultiIndex, (ComplexScalar, f64)>,
}

impl Accumulator {
    pub(crate) fn new(dim: usize) -> Self {
        Accumulator {
            dim,
            map: BTreeMap::new(),
        }
    }

    pub(crate) fn push(&mut self, idx: MultiIndex, value: ComplexScalar) {
        let slot = self.map.entry(idx).or_insert((ZERO, 0.0));
        slot.0 += value;
        slot.1 += value.norm();
    }

    pub(crate) fn push_poly(&mut self, p: &SparsePoly) {
        for (idx, &c) in &p.terms {
            self.push(idx.clone(), c);
        }
    }

    pub(crate) fn finish(self) -> SparsePoly {
        let terms = self
            .map
            .into_iter()
            .filter(|(_, (sum, mag))| *sum != ZERO && sum.norm() > CANCEL_EPS * mag)
            .map(|(idx, (sum, _))| (idx, sum))
            .collect();
        SparsePoly {
            dim: self.dim,
            terms,
        }
    }
}

impl SparsePoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "polynomial dimension must be positive");
        SparsePoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: ComplexScalar) -> Self {
        Self::monomial(dim, c, MultiIndex::zero(dim))
    }

    /// The coordinate `z_{axis+1}` (axis is 0-based).
    pub fn var(dim: usize, axis: usize) -> Self {
        assert!(axis < dim, "variable index out of range");
        Self::monomial(dim, ONE, MultiIndex::unit(dim, axis))
    }

    pub fn monomial(dim: usize, c: ComplexScalar, idx: MultiIndex) -> Self {
        assert_eq!(idx.dim(), dim);
        let mut p = Self::zero(dim);
        if c != ZERO {
            p.terms.insert(idx, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, ComplexScalar)>,
    {
        if dim == 0 {
            return Err(Error::params("polynomial dimension must be positive"));
        }
        let mut acc = Accumulator::new(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            if !is_finite(c) {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            acc.push(MultiIndex::new(e), c);
        }
        Ok(acc.finish())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &ComplexScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> ComplexScalar {
        self.terms.get(idx).copied().unwrap_or(ZERO)
    }

    pub fn constant_term(&self) -> ComplexScalar {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&MultiIndex, &ComplexScalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus ignoring the constant term.
    pub fn max_nonconstant_modulus(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(k, _)| !k.is_zero())
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.terms.values().all(|&c| is_finite(c))
    }

    /// True when every monomial only involves the variable `axis`.
    pub fn depends_only_on(&self, axis: usize) -> bool {
        self.terms.keys().all(|k| {
            k.exponents()
                .iter()
                .enumerate()
                .all(|(j, &e)| j == axis || e == 0)
        })
    }

    /// Splits off the constant term: `(constant, self - constant)`.
    pub fn split_constant(&self) -> (ComplexScalar, SparsePoly) {
        let mut rest = self.clone();
        let c = rest
            .terms
            .remove(&MultiIndex::zero(self.dim))
            .unwrap_or(ZERO);
        (c, rest)
    }

    /// Removes coefficients whose modulus is below `threshold`.
    pub fn chop(&self, threshold: f64) -> SparsePoly {
        SparsePoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() >= threshold)
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    pub fn scale(&self, s: ComplexScalar) -> SparsePoly {
        if s == ZERO {
            return SparsePoly::zero(self.dim);
        }
        SparsePoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * s))
                .filter(|(_, c)| *c != ZERO)
                .collect(),
        }
    }

    pub fn add_constant(&self, c: ComplexScalar) -> SparsePoly {
        self + &SparsePoly::constant(self.dim, c)
    }

    pub fn pow(&self, mut e: u32) -> SparsePoly {
        let mut base = self.clone();
        let mut acc = SparsePoly::constant(self.dim, ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to `z_{axis+1}`.
    pub fn derive(&self, axis: usize) -> SparsePoly {
        assert!(axis < self.dim, "axis out of range");
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.get(axis) > 0)
            .map(|(k, c)| {
                let e = k.get(axis);
                (k.with(axis, e - 1), c * f64::from(e))
            })
            .collect();
        SparsePoly {
            dim: self.dim,
            terms,
        }
    }

    /// Composition `p(z + c)`, expanded binomially.
    pub fn shift(&self, c: &[ComplexScalar]) -> SparsePoly {
        assert_eq!(c.len(), self.dim, "shift vector length");
        let mut acc = Accumulator::new(self.dim);
        for (idx, &coef) in &self.terms {
            let mut partial: Vec<(Vec<u32>, ComplexScalar)> = vec![(vec![0; self.dim], coef)];
            for (axis, &e) in idx.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (e as usize + 1));
                for (exps, v) in &partial {
                    for m in 0..=e {
                        let factor = powu(c[axis], e - m) * binomial(e, m);
                        if factor == ZERO {
                            continue;
                        }
                        let mut ne = exps.clone();
                        ne[axis] = m;
                        next.push((ne, v * factor));
                    }
                }
                partial = next;
            }
            for (exps, v) in partial {
                acc.push(MultiIndex::new(exps), v);
            }
        }
        acc.finish()
    }

    pub fn eval(&self, z: &[ComplexScalar]) -> ComplexScalar {
        assert_eq!(z.len(), self.dim, "evaluation point length");
        self.terms
            .iter()
            .map(|(k, &c)| {
                k.exponents().iter().zip(z).fold(
                    c,
                    |acc, (&e, &zj)| if e == 0 { acc } else { acc * powu(zj, e) },
                )
            })
            .sum()
    }

    /// Largest coefficient difference `max |a_m - b_m|` over the union of
    /// monomials.
    pub fn max_coeff_distance(&self, other: &SparsePoly) -> f64 {
        let mut d: f64 = 0.0;
        for (k, c) in &self.terms {
            d = d.max((c - other.coeff(k)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                d = d.max(c.norm());
            }
        }
        d
    }

    /// Deterministic total order: leading monomials first (descending
    /// graded-lex), then coefficients.
    pub fn canonical_cmp(&self, other: &SparsePoly) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ka, ca)), Some((kb, cb))) => {
                    let o = ka.cmp(kb).then_with(|| total_cmp(ca, cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }

    fn check_dim(&self, other: &SparsePoly) {
        assert_eq!(
            self.dim, other.dim,
            "polynomial dimension mismatch ({} vs {})",
            self.dim, other.dim
        );
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_dim(rhs);
        let mut acc = Accumulator::new(self.dim);
        acc.push_poly(self);
        acc.push_poly(rhs);
        acc.finish()
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        SparsePoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_dim(rhs);
        let mut acc = Accumulator::new(self.dim);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                acc.push(ka.add(kb), ca * cb);
            }
        }
        acc.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::cplx;

    fn z(dim: usize, axis: usize) -> SparsePoly {
        SparsePoly::var(dim, axis)
    }

    #[test]
    fn exact_cancellation_is_pruned() {
        let p = &z(2, 0) + &z(2, 1);
        let q = &p - &p;
        assert!(q.is_zero());
    }

    #[test]
    fn binomial_expansion() {
        let p = (&z(2, 0) + &z(2, 1)).pow(3);
        assert_eq!(p.len(), 4);
        assert_eq!(p.coeff(&MultiIndex::new(vec![2, 1])), cplx(3.0, 0.0));
    }

    #[test]
    fn shift_of_linear_form_in_kernel_is_identity() {
        // (c2 z1 - c1 z2)(z + c) = c2 z1 - c1 z2
        let c = [cplx(0.7, -1.1), cplx(-0.4, 2.0)];
        let form = &z(2, 0).scale(c[1]) - &z(2, 1).scale(c[0]);
        let p = form.pow(5);
        let shifted = p.shift(&c);
        assert!(shifted.max_coeff_distance(&p) < 1e-12);
        assert_eq!(shifted.len(), p.len());
    }

    #[test]
    fn shift_then_eval_matches_eval_at_shifted_point() {
        let p = &(&z(2, 0).pow(3) * &z(2, 1)) + &SparsePoly::constant(2, cplx(0.5, 0.5));
        let c = [cplx(0.2, 0.1), cplx(-0.3, 0.4)];
        let at = [cplx(0.1, -0.2), cplx(0.25, 0.05)];
        let lhs = p.shift(&c).eval(&at);
        let rhs = p.eval(&[at[0] + c[0], at[1] + c[1]]);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn derive_power() {
        let p = z(2, 0).pow(4).scale(cplx(2.0, 0.0));
        let d = p.derive(0);
        assert_eq!(d.coeff(&MultiIndex::new(vec![3, 0])), cplx(8.0, 0.0));
        assert!(p.derive(1).is_zero());
    }

    #[test]
    fn canonical_order_uses_leading_monomial() {
        let a = z(2, 0).pow(2);
        let b = &z(2, 0) + &z(2, 1).pow(2);
        // z2^2 outranks z1^2? both degree 2; [2,0] > [0,2] lexicographically
        assert_eq!(a.canonical_cmp(&b), Ordering::Greater);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mixed_dimension_panics() {
        let _ = &z(2, 0) + &z(3, 0);
    }
}
