mod common;

use num_traits::{Signed, Zero};
use pgl2a::abgrp::{
    smith_normal_form, ChainComplexFg, FgAbGroup, FreeChainComplex, Int, IntMatrix, PresentedGroup, SparseMatrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-15i64..=15, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| Int::from(v[i * c + j])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_is_a_factorization(m in matrix()) {
        let f = smith_normal_form(&m);
        prop_assert_eq!(f.u.mul(&m).mul(&f.v), f.s.clone());
        prop_assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m.cols()));
        let d = f.diag();
        prop_assert!(d.iter().all(|x| x.is_positive()));
        prop_assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }

    #[test]
    fn snf_agrees_with_minors(m in matrix()) {
        prop_assert_eq!(smith_normal_form(&m).diag(), invariant_factors_by_minors(&m));
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(m in matrix(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_unimodular(&mut rng, m.rows(), 8);
        let (b, _) = random_unimodular(&mut rng, m.cols(), 8);
        let before = PresentedGroup::new(m.clone()).canonical();
        let after = PresentedGroup::new(a.mul(&m).mul(&b)).canonical();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn direct_sum_is_commutative(a in proptest::collection::vec(0u64..12, 0..4), b in proptest::collection::vec(0u64..12, 0..4)) {
        let ga = FgAbGroup::from_cyclic_orders(&a);
        let gb = FgAbGroup::from_cyclic_orders(&b);
        prop_assert_eq!(ga.direct_sum(&gb), gb.direct_sum(&ga));
    }

    #[test]
    fn dense_and_sparse_routes_agree(seed in any::<u64>(), top in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, top);
        let groups = k.dims.iter().map(|&d| PresentedGroup::free(d)).collect();
        let dense = ChainComplexFg::new(groups, k.boundaries.clone()).unwrap();
        let sparse = FreeChainComplex::new(k.boundaries.iter().map(SparseMatrix::from_dense).collect()).unwrap();
        for n in 0..=top {
            prop_assert_eq!(&dense.homology_at(n), &k.homology[n]);
            prop_assert_eq!(&sparse.homology_at(n), &k.homology[n]);
        }
    }
}
