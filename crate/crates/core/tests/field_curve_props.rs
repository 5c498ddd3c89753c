mod common;

use std::sync::Arc;

use pgl2a::curve::{CurvePoint, Line, LineCase, WeierstrassCurve};
use pgl2a::field::{make_field, Element, FieldSpec};
use proptest::prelude::*;

use common::{abs_diff, isqrt_floor_times_two};

const FIELDS: [(u32, u32); 9] = [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (2, 2), (2, 3), (3, 2), (5, 2)];

fn field() -> impl Strategy<Value = Arc<FieldSpec>> {
    proptest::sample::select(FIELDS.to_vec()).prop_map(|(p, k)| Arc::new(make_field(p, k).unwrap()))
}

fn pick(f: &FieldSpec, i: usize) -> Element {
    let els = f.elements();
    els[i % els.len()].clone()
}

fn field_and_three() -> impl Strategy<Value = (Arc<FieldSpec>, Element, Element, Element)> {
    (field(), any::<usize>(), any::<usize>(), any::<usize>())
        .prop_map(|(f, a, b, c)| (f.clone(), pick(&f, a), pick(&f, b), pick(&f, c)))
}

fn curve() -> impl Strategy<Value = WeierstrassCurve> {
    (field(), proptest::array::uniform5(any::<usize>())).prop_filter_map("singular", |(f, idx)| {
        let a = idx.map(|i| pick(&f, i));
        WeierstrassCurve::new(f, a).ok()
    })
}

/// Affine solutions on `x = l` by substituting every `y`.
fn brute_points_over(f: &FieldSpec, a: &[Element; 5], x: &Element) -> Vec<Element> {
    let [a1, a2, a3, a4, a6] = a;
    f.elements()
        .into_iter()
        .filter(|y| {
            let lhs = f.add(&f.mul(y, y), &f.add(&f.mul(a1, &f.mul(x, y)), &f.mul(a3, y)));
            let x2 = f.mul(x, x);
            let rhs = f.add(&f.add(&f.mul(&x2, x), &f.mul(a2, &x2)), &f.add(&f.mul(a4, x), a6));
            lhs == rhs
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn field_axioms((f, a, b, c) in field_and_three()) {
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        prop_assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
        match f.inv(&a) {
            Some(i) => prop_assert_eq!(f.mul(&a, &i), f.one()),
            None => prop_assert_eq!(&a, &f.zero()),
        }
        prop_assert_eq!(f.pow(&a, f.order() as u64), a.clone());
    }

    #[test]
    fn frobenius_is_a_ring_automorphism((f, a, b, _c) in field_and_three()) {
        prop_assert_eq!(f.frobenius(&f.add(&a, &b)), f.add(&f.frobenius(&a), &f.frobenius(&b)));
        prop_assert_eq!(f.frobenius(&f.mul(&a, &b)), f.mul(&f.frobenius(&a), &f.frobenius(&b)));
        prop_assert_eq!(f.frobenius(&a), f.pow(&a, f.characteristic() as u64));
        let mut x = a.clone();
        for _ in 0..f.degree() {
            x = f.frobenius(&x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn sqrt_matches_search((f, a, _b, _c) in field_and_three()) {
        let roots: Vec<Element> = f.elements().into_iter().filter(|y| f.mul(y, y) == a).collect();
        match f.sqrt(&a) {
            Some(r) => prop_assert!(roots.contains(&r)),
            None => prop_assert!(roots.is_empty()),
        }
    }

    #[test]
    fn quadratic_roots_match_search((f, b, c, _d) in field_and_three()) {
        let mut found: Vec<Element> = f
            .elements()
            .into_iter()
            .filter(|y| f.add(&f.mul(y, y), &f.add(&f.mul(&b, y), &c)) == f.zero())
            .collect();
        let mut got = f.solve_monic_quadratic(&b, &c);
        found.sort_by_key(|e| e.coeffs().to_vec());
        got.sort_by_key(|e| e.coeffs().to_vec());
        prop_assert_eq!(got, found);
    }

    #[test]
    fn negation_is_an_involution_on_points(c in curve()) {
        for p in c.enumerate_points() {
            prop_assert!(c.contains(&p));
            let n = c.negate(&p);
            prop_assert!(c.contains(&n));
            prop_assert_eq!(c.negate(&n), p);
        }
    }

    #[test]
    fn hasse_bound(c in curve()) {
        let q = c.field().order() as usize;
        let n = c.enumerate_points().len();
        prop_assert!(abs_diff(n, q + 1) <= isqrt_floor_times_two(q as u64));
    }

    #[test]
    fn classification_matches_substitution(idx in proptest::array::uniform5(any::<usize>()), f in field()) {
        let a = idx.map(|i| pick(&f, i));
        let Ok(c) = WeierstrassCurve::new(f.clone(), a.clone()) else { return Ok(()); };
        let s = c.classify_all();
        prop_assert_eq!(s.lines.len(), f.order() as usize + 1);
        let mut points = 1;
        for lc in &s.lines {
            let Line::Finite(x) = &lc.line else {
                let at_infinity = matches!(lc.case, LineCase::Case2 { point: CurvePoint::Infinity });
                prop_assert!(at_infinity);
                continue;
            };
            let ys = brute_points_over(&f, &a, x);
            points += ys.len();
            prop_assert_eq!(lc.case.number() as usize, ys.len() + 1);
            match &lc.case {
                LineCase::Case2 { point } => prop_assert!(c.is_two_torsion(point)),
                LineCase::Case3 { p, q } => {
                    prop_assert_eq!(&c.negate(p), q);
                    prop_assert!(p != q);
                }
                LineCase::Case1 => {}
            }
        }
        prop_assert_eq!(points, s.point_count());
        prop_assert_eq!(s.two_torsion().len(), s.lines.iter().filter(|l| l.case.number() == 2).count());
        prop_assert!([1, 2, 4].contains(&s.two_torsion().len()));
    }
}
