use boundent::linalg::{hermitian_eig, ComplexMatrix, ComplexVector};
use boundent::product_opt::{sample_product_state, RngSeed};
use boundent::tensor::{HermitianOperator, TensorSpace};
use boundent::tiles::tiles_projector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_operator(space: TensorSpace, seed: u64) -> HermitianOperator {
    let n = space.dim();
    let mut rng = RngSeed(seed).stream(3);
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m, space).unwrap()
}

fn sorted_spectrum(op: &HermitianOperator) -> Vec<f64> {
    hermitian_eig(op.matrix()).unwrap().eigenvalues
}

#[test]
fn grouping_two_copies_keeps_spectrum() {
    let p = tiles_projector();
    let pp = p.kron(&p).unwrap();
    let grouped = pp.permute_factors(&pp.space().grouping_permutation()).unwrap();
    assert!(grouped.space().is_grouped());
    for (a, b) in sorted_spectrum(&pp).iter().zip(sorted_spectrum(&grouped)) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn tiles_projector_is_ppt() {
    let pt = tiles_projector().partial_transpose();
    assert!(hermitian_eig(pt.matrix()).unwrap().min_eigenvalue() >= -1e-10);
}

#[test]
fn contraction_bounded_by_local_dimension() {
    let p = tiles_projector();
    let mut rng = RngSeed(11).stream(0);
    for _ in 0..200 {
        let e = sample_product_state((3, 3), &mut rng).a_local;
        assert!(p.contract_party_a(&e).unwrap().trace().re <= 3.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_transpose_preserves_trace_and_hermiticity(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let op = random_operator(TensorSpace::bipartite(da, db).unwrap(), seed);
        let pt = op.partial_transpose();
        prop_assert!((pt.trace() - op.trace()).abs() <= 1e-12);
        prop_assert!(pt.matrix().hermiticity_defect() <= 1e-12);
        prop_assert_eq!(pt.partial_transpose(), op);
    }

    #[test]
    fn partial_transpose_factorizes_over_kron(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..3) {
        let x = random_operator(TensorSpace::bipartite(d1, d2).unwrap(), seed);
        let y = random_operator(TensorSpace::bipartite(d2, d1).unwrap(), seed.wrapping_mul(3));
        let joint = x.kron(&y).unwrap().partial_transpose();
        let split = x.partial_transpose().kron(&y.partial_transpose()).unwrap();
        prop_assert!(joint.matrix().distance(split.matrix()) <= 1e-12);
    }

    #[test]
    fn permutation_preserves_spectrum(seed in any::<u64>(), perm_index in 0usize..24) {
        let space = TensorSpace::bipartite(2, 3).unwrap().tensor(&TensorSpace::bipartite(2, 2).unwrap());
        let op = random_operator(space, seed);
        let mut perms = Vec::new();
        for a in 0..4 { for b in 0..4 { for c in 0..4 { for d in 0..4 {
            let p = [a, b, c, d];
            let mut s = p.to_vec(); s.sort(); s.dedup();
            if s.len() == 4 { perms.push(p.to_vec()); }
        }}}}
        let permuted = op.permute_factors(&perms[perm_index]).unwrap();
        for (a, b) in sorted_spectrum(&op).iter().zip(sorted_spectrum(&permuted)) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn contraction_matches_quadratic_form(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let op = random_operator(TensorSpace::bipartite(da, db).unwrap(), seed);
        let mut rng = RngSeed(seed).stream(7);
        let s = sample_product_state((da, db), &mut rng);
        let via_a = op.contract_party_a(&s.a_local).unwrap().quad_form(&s.b_local).re;
        let via_b = op.contract_party_b(&s.b_local).unwrap().quad_form(&s.a_local).re;
        let direct = op.expectation(&s.vector());
        prop_assert!((via_a - direct).abs() <= 1e-12);
        prop_assert!((via_b - direct).abs() <= 1e-12);
    }

    #[test]
    fn contraction_is_linear(seed in any::<u64>(), w in -2.0f64..2.0) {
        let space = TensorSpace::bipartite(3, 2).unwrap();
        let x = random_operator(space.clone(), seed);
        let y = random_operator(space, seed ^ 1);
        let e = ComplexVector::from_real(&[1.0, -2.0, 0.5]).normalized().unwrap();
        let combined = x.add(&y.scale(w)).unwrap().contract_party_a(&e).unwrap();
        let separate = x.contract_party_a(&e).unwrap().add(&y.contract_party_a(&e).unwrap().scale(w));
        prop_assert!(combined.distance(&separate) <= 1e-12);
    }
}
