//! Random generators shared by the integration tests.
#![allow(dead_code)]

use fermat_core::algebra::{cplx, ComplexScalar, ExpSum, MultiIndex, SparsePoly, ONE};
use fermat_core::families::{
    assemble_t1_case_i, assemble_t2_case_i, resolve, t1_b_relation, t2_lc_target, BRelation,
    CaseLabel, Overrides, Params, PrefactorPower, T1Params, T2Params, T2_PREFACTOR_POWER,
};
use fermat_core::systems::{verify, SolutionManifest, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut ChaCha8Rng, r: f64) -> ComplexScalar {
    cplx(rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

pub fn point(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> Vec<ComplexScalar> {
    (0..dim).map(|_| complex(rng, r)).collect()
}

fn index(rng: &mut ChaCha8Rng, dim: usize, min_deg: u32, max_deg: u32) -> MultiIndex {
    let deg = rng.gen_range(min_deg..=max_deg);
    let mut e = vec![0u32; dim];
    for _ in 0..deg {
        e[rng.gen_range(0..dim)] += 1;
    }
    MultiIndex::new(e)
}

/// Up to `terms` random monomials of degree `min_deg..=max_deg` with
/// coefficients in the square `|re|, |im| <= r`.
pub fn poly(
    rng: &mut ChaCha8Rng,
    dim: usize,
    min_deg: u32,
    max_deg: u32,
    terms: usize,
    r: f64,
) -> SparsePoly {
    let n = rng.gen_range(1..=terms);
    let mut p = SparsePoly::zero(dim);
    for _ in 0..n {
        let c = complex(rng, r);
        p = &p + &SparsePoly::monomial(dim, c, index(rng, dim, min_deg, max_deg));
    }
    p
}

/// A random exponential sum with one to three terms, polynomial
/// coefficients of degree at most two and non-constant exponents of degree
/// at most two. Kept small enough to evaluate on the unit polydisc.
pub fn expsum(rng: &mut ChaCha8Rng, dim: usize) -> ExpSum {
    let n = rng.gen_range(1..=3);
    let mut s = ExpSum::zero(dim);
    for _ in 0..n {
        let q = poly(rng, dim, 0, 2, 3, 1.0);
        let p = poly(rng, dim, 1, 2, 3, 0.8);
        s = s.add(&ExpSum::term(q, p)).unwrap();
    }
    s
}

/// Relative difference `|a - b| / (1 + |b|)`.
pub fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

/// Richardson-extrapolated central difference of `f` along `axis` (0-based).
pub fn richardson(f: &ExpSum, z: &[ComplexScalar], axis: usize, h: f64) -> ComplexScalar {
    let central = |h: f64| {
        let mut zp = z.to_vec();
        let mut zm = z.to_vec();
        zp[axis] += h;
        zm[axis] -= h;
        (f.evaluate(&zp).unwrap() - f.evaluate(&zm).unwrap()) / (2.0 * h)
    };
    (central(h / 2.0) * 4.0 - central(h)) / 3.0
}

pub fn passes(m: &SolutionManifest) -> bool {
    verify(m, &VerifyOptions::default()).unwrap().pass
}

/// Number of single-exponential difference draws (seeds `0..draws`) that
/// verify when `exp(B1 - B2)` follows each candidate, in the order
/// `[Statement, ProofVariant]`.
pub fn b_relation_wins(draws: u64) -> [usize; 2] {
    let mut wins = [0usize; 2];
    for seed in 0..draws {
        let Params::T1(T1Params::CaseI(p)) =
            resolve(CaseLabel::T1I, &Overrides::new(), seed).unwrap()
        else {
            unreachable!()
        };
        for (slot, which) in [BRelation::Statement, BRelation::ProofVariant]
            .into_iter()
            .enumerate()
        {
            let mut q = p.clone();
            q.b1 = q.b2 + t1_b_relation(which, q.xi1, q.xi2).ln();
            if passes(&assemble_t1_case_i(&q).unwrap()) {
                wins[slot] += 1;
            }
        }
    }
    wins
}

/// Number of single-exponential PDD draws that verify when `exp(L(c))`
/// carries each candidate power of `a1/2`, in the order `[K, TwoK]`.
pub fn prefactor_wins(draws: u64) -> [usize; 2] {
    let mut wins = [0usize; 2];
    for seed in 0..draws {
        let Params::T2(T2Params::CaseI(p)) =
            resolve(CaseLabel::T2I, &Overrides::new(), seed).unwrap()
        else {
            unreachable!()
        };
        let a1 = p.l.coeffs[0];
        let drawn = t2_lc_target(T2_PREFACTOR_POWER, a1, p.k, p.xi1, p.xi2);
        let lc = p.l.linear_part(&p.c);
        for (slot, which) in [PrefactorPower::K, PrefactorPower::TwoK]
            .into_iter()
            .enumerate()
        {
            // Rescaling c keeps H invariant and moves L(c) onto the candidate.
            let ratio = t2_lc_target(which, a1, p.k, p.xi1, p.xi2) / drawn;
            let t = ONE + ratio.ln() / lc;
            let mut q = p.clone();
            q.c = p.c.iter().map(|x| x * t).collect();
            if passes(&assemble_t2_case_i(&q).unwrap()) {
                wins[slot] += 1;
            }
        }
    }
    wins
}
