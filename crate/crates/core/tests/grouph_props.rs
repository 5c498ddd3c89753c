use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use pgl2a::abgrp::{AbHom, Int};
use pgl2a::grouph::{
    abelianization, bar_homology, cyclic, group_homology, induced_map, product, Ceilings, GroupHom,
};
use proptest::prelude::*;

/// `x -> k x` from `Z/n` to `Z/m`, which is a hom when `m | k n`.
fn scaling(n: usize, m: usize, k: usize) -> GroupHom {
    GroupHom::from_fn(cyclic(n), cyclic(m), |x| (k * x) % m).unwrap()
}

fn valid_scalars(n: usize, m: usize) -> Vec<usize> {
    (0..m).filter(|k| (k * n).is_multiple_of(m)).collect()
}

fn induced(f: &GroupHom, q: usize) -> AbHom {
    let c = Ceilings::default();
    let s = group_homology(f.source(), q, &c).unwrap();
    let t = group_homology(f.target(), q, &c).unwrap();
    induced_map(f, &s, &t).unwrap()
}

/// A composable pair `Z/a -> Z/b -> Z/c`.
fn chain() -> impl Strategy<Value = (GroupHom, GroupHom)> {
    (1usize..=6, 1usize..=6, 1usize..=6, any::<usize>(), any::<usize>()).prop_map(|(a, b, c, i, j)| {
        let ks = valid_scalars(a, b);
        let ls = valid_scalars(b, c);
        (scaling(a, b, ks[i % ks.len()]), scaling(b, c, ls[j % ls.len()]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn induced_maps_compose((f, g) in chain(), q in 0usize..=2) {
        let gf = g.compose(&f);
        let direct = induced(&gf, q);
        let stepwise = induced(&g, q).compose(&induced(&f, q)).unwrap();
        prop_assert!(direct.same_map(&stepwise));
    }

    #[test]
    fn identity_induces_identity(n in 1usize..=8, q in 0usize..=3) {
        let g = cyclic(n);
        let h = induced(&GroupHom::identity(&g), q);
        prop_assert!(h.same_map(&AbHom::identity(h.source())));
    }

    #[test]
    fn degree_one_kunneth(a in 1usize..=6, b in 1usize..=6) {
        prop_assume!(a * b <= 24);
        let (ga, gb) = (cyclic(a), cyclic(b));
        let p = Arc::new(product(&ga, &gb).unwrap());
        let c = Ceilings::default();
        let expected = bar_homology(&ga, 1, &c).unwrap().direct_sum(&bar_homology(&gb, 1, &c).unwrap());
        prop_assert_eq!(bar_homology(&p, 1, &c).unwrap(), expected.clone());
        prop_assert_eq!(abelianization(&p), expected);
    }

    #[test]
    fn degree_one_of_cyclic_scaling(n in 2usize..=8, k in 0usize..8) {
        // On H_1(Z/n) = Z/n the endomorphism x -> kx acts as multiplication by k.
        let h = induced(&scaling(n, n, k % n), 1);
        let diff = &h.matrix()[(0, 0)] - Int::from(k % n);
        prop_assert!(diff.mod_floor(&Int::from(n)).is_zero());
    }
}
