use std::cmp::Ordering;

use num_complex::Complex64;

/// Double-precision complex number, the ground field for every polynomial
/// and exponential sum in the crate.
pub type ComplexScalar = Complex64;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Largest real part accepted by `exp` before reporting overflow.
pub const EXP_OVERFLOW: f64 = 709.0;

#[inline]
pub fn cplx(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Total order on complex numbers: real part first, then imaginary part.
pub fn total_cmp(a: &ComplexScalar, b: &ComplexScalar) -> Ordering {
    a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
}

/// Relative distance `|a - b| / (1 + |b|)`, used for every relation check.
#[inline]
pub fn rel_defect(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

/// Integer power by repeated squaring, exact for small exponents.
pub fn powu(z: ComplexScalar, mut e: u32) -> ComplexScalar {
    let mut base = z;
    let mut acc = ONE;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * f64::from(n - j) / f64::from(j + 1);
    }
    acc.round()
}
