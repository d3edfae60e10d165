mod common;

use common::{complex, point, rng};
use fermat_core::algebra::{ComplexScalar, LinearForm, ZERO};
use fermat_core::shiftinv::{
    build_invariant, check_shift_invariant, kernel_basis, InvariantPolySpec, SPAN_TOL,
};
use fermat_core::Error;
use proptest::prelude::*;
use rand::Rng;

fn random_spec(g: &mut rand_chacha::ChaCha8Rng, c: &[ComplexScalar]) -> InvariantPolySpec {
    let basis = kernel_basis(c).unwrap();
    let mut spec = InvariantPolySpec::new();
    for _ in 0..g.gen_range(1..=3) {
        let w: Vec<_> = (0..basis.forms.len()).map(|_| complex(g, 1.0)).collect();
        spec = spec.block(basis.combine(&w), g.gen_range(1..=4), complex(g, 1.0));
    }
    spec
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_forms_annihilate_the_shift(seed in any::<u64>(), dim in 1usize..6) {
        let c = point(&mut rng(seed), dim, 2.0);
        let basis = kernel_basis(&c).unwrap();
        prop_assert_eq!(basis.forms.len(), dim - 1);
        let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for f in &basis.forms {
            prop_assert!(f.linear_part(&c).norm() <= 1e-14 * scale);
        }
    }

    #[test]
    fn kernel_has_full_rank(seed in any::<u64>(), dim in 2usize..6) {
        let mut g = rng(seed);
        let c = point(&mut g, dim, 2.0);
        let basis = kernel_basis(&c).unwrap();
        // conj(c) spans the Hermitian complement of the kernel, so it is
        // entirely outside the span while combinations are entirely inside.
        let conj: Vec<_> = c.iter().map(|x| x.conj()).collect();
        prop_assert!((basis.span_residual(&conj) - 1.0).abs() < 1e-12);
        let w: Vec<_> = (0..dim - 1).map(|_| complex(&mut g, 1.0)).collect();
        prop_assert!(basis.span_residual(&basis.combine(&w).coeffs) < 1e-13);
    }

    #[test]
    fn built_polynomials_are_invariant(seed in any::<u64>(), dim in 2usize..5) {
        let mut g = rng(seed);
        let c = point(&mut g, dim, 2.0);
        let p = build_invariant(&random_spec(&mut g, &c), &kernel_basis(&c).unwrap()).unwrap();
        let report = check_shift_invariant(&p, &c, 1e-10);
        prop_assert!(report.pass, "defect {}", report.max_defect);
    }

    #[test]
    fn build_is_linear_in_blocks(seed in any::<u64>(), dim in 2usize..5) {
        let mut g = rng(seed);
        let c = point(&mut g, dim, 2.0);
        let basis = kernel_basis(&c).unwrap();
        let (s1, s2) = (random_spec(&mut g, &c), random_spec(&mut g, &c));
        let whole = build_invariant(&s1.concat(&s2), &basis).unwrap();
        let parts = &build_invariant(&s1, &basis).unwrap() + &build_invariant(&s2, &basis).unwrap();
        let scale = 1.0 + whole.max_coeff_modulus();
        prop_assert!(whole.max_coeff_distance(&parts) <= 1e-13 * scale);
    }

    #[test]
    fn forms_outside_the_kernel_are_rejected(seed in any::<u64>(), dim in 2usize..5) {
        let mut g = rng(seed);
        let c = point(&mut g, dim, 2.0);
        let basis = kernel_basis(&c).unwrap();
        let conj: Vec<_> = c.iter().map(|x| x.conj()).collect();
        let spec = random_spec(&mut g, &c).block(LinearForm::homogeneous(conj), 2, complex(&mut g, 1.0));
        let last = spec.blocks.len() - 1;
        match build_invariant(&spec, &basis) {
            Err(Error::NotInSpan { block, residual }) => {
                prop_assert_eq!(block, last);
                prop_assert!(residual >= SPAN_TOL);
            }
            other => prop_assert!(false, "expected NotInSpan, got {:?}", other),
        }
    }
}

#[test]
fn zero_shift_has_no_kernel_basis() {
    assert!(matches!(kernel_basis(&[ZERO, ZERO]), Err(Error::ZeroShift)));
}

#[test]
fn one_variable_admits_only_constants() {
    let c = [complex(&mut rng(3), 1.0)];
    let basis = kernel_basis(&c).unwrap();
    assert!(basis.forms.is_empty());
    let p = build_invariant(&InvariantPolySpec::new(), &basis).unwrap();
    assert!(p.is_zero());
}
