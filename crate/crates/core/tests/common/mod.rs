//! Test oracles built independently of the library's elimination routines.
#![allow(dead_code)]

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use pgl2a::abgrp::{FgAbGroup, Int, IntMatrix};
use pgl2a::curve::WeierstrassCurve;
use pgl2a::field::{make_field, FieldSpec};
use rand::Rng;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with);
    out
}

/// Invariant factors as quotients of determinantal divisors: `D_k` is the
/// gcd of all `k x k` minors and `d_k = D_k / D_{k-1}`.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> Vec<Int> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Vec::new();
    let mut prev = Int::one();
    for k in 1..=r.min(c) {
        let mut g = Int::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect())
                    .collect();
                g = g.gcd(&det(sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| Int::from(rng.random_range(-bound..=bound)))
}

/// A random unimodular matrix and its inverse from elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.random_bool(0.5) {
            u[(0, 0)] = Int::from(-1);
            inv[(0, 0)] = Int::from(-1);
        }
        return (u, inv);
    }
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = Int::from(rng.random_range(-2i64..=2));
        // u <- (I + c e_ij) u and inv <- inv (I - c e_ij)
        for col in 0..n {
            let v = &u[(j, col)] * &c;
            u[(i, col)] += v;
        }
        for row in 0..n {
            let v = &inv[(row, i)] * &c;
            inv[(row, j)] -= v;
        }
    }
    assert_eq!(u.mul(&inv), IntMatrix::identity(n));
    (u, inv)
}

/// A free chain complex with prescribed homology, disguised by unimodular
/// changes of basis in every degree.
pub struct KnownComplex {
    pub dims: Vec<usize>,
    /// `boundaries[n]` maps degree `n + 1` to degree `n`.
    pub boundaries: Vec<IntMatrix>,
    pub homology: Vec<FgAbGroup>,
}

pub fn random_complex(rng: &mut impl Rng, top: usize) -> KnownComplex {
    let mut dims = vec![0usize; top + 1];
    let mut free = vec![0usize; top + 1];
    let mut torsion: Vec<Vec<u64>> = vec![vec![]; top + 1];
    // (degree n, d) means Z --d--> Z from n + 1 to n; d = 1 is acyclic.
    let mut pairs: Vec<(usize, i64)> = Vec::new();
    for n in 0..=top {
        free[n] = rng.random_range(0..=2);
        if n < top {
            for _ in 0..rng.random_range(0..=2) {
                let d = rng.random_range(1i64..=6);
                pairs.push((n, d));
                if d > 1 {
                    torsion[n].push(d as u64);
                }
            }
        }
    }
    let mut cells: Vec<Vec<(&'static str, usize)>> = vec![vec![]; top + 1];
    for (n, f) in free.iter().enumerate() {
        for _ in 0..*f {
            cells[n].push(("free", 0));
        }
    }
    for (idx, &(n, _)) in pairs.iter().enumerate() {
        cells[n].push(("low", idx));
        cells[n + 1].push(("high", idx));
    }
    for n in 0..=top {
        dims[n] = cells[n].len();
    }
    let mut boundaries = Vec::new();
    for n in 0..top {
        let mut b = IntMatrix::zeros(dims[n], dims[n + 1]);
        for (j, (kind, idx)) in cells[n + 1].iter().enumerate() {
            if *kind != "high" {
                continue;
            }
            let i = cells[n].iter().position(|c| *c == ("low", *idx)).unwrap();
            b[(i, j)] = Int::from(pairs[*idx].1);
        }
        boundaries.push(b);
    }
    let changes: Vec<(IntMatrix, IntMatrix)> = dims.iter().map(|&d| random_unimodular(rng, d, 3 * d + 2)).collect();
    let boundaries = boundaries
        .iter()
        .enumerate()
        .map(|(n, b)| changes[n].0.mul(b).mul(&changes[n + 1].1))
        .collect();
    let homology = (0..=top)
        .map(|n| FgAbGroup::free(free[n]).direct_sum(&FgAbGroup::from_cyclic_orders(&torsion[n])))
        .collect();
    KnownComplex {
        dims,
        boundaries,
        homology,
    }
}

pub fn curve(p: u32, k: u32, a: [i64; 5]) -> Option<WeierstrassCurve> {
    let f = Arc::new(make_field(p, k).ok()?);
    WeierstrassCurve::from_ints(f, a).ok()
}

/// Discriminant of a Weierstrass equation over the integers.
pub fn integer_discriminant(a: [i64; 5]) -> i64 {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
}

pub struct CorpusCurve {
    pub name: &'static str,
    pub a: [i64; 5],
    pub curve: WeierstrassCurve,
}

/// The acceptance corpus, keeping the candidates whose discriminant is a
/// unit mod p.
pub fn corpus() -> Vec<CorpusCurve> {
    let candidates: [(&'static str, u32, [i64; 5]); 6] = [
        ("y^2=x^3-x over F3", 3, [0, 0, 0, -1, 0]),
        ("y^2=x^3-x over F5", 5, [0, 0, 0, -1, 0]),
        ("y^2=x^3-x over F7", 7, [0, 0, 0, -1, 0]),
        ("y^2=x^3+x+1 over F5", 5, [0, 0, 0, 1, 1]),
        ("y^2+y=x^3 over F2", 2, [0, 0, 1, 0, 0]),
        ("y^2+xy=x^3+1 over F2", 2, [1, 0, 0, 0, 1]),
    ];
    candidates
        .iter()
        .filter(|(_, p, a)| integer_discriminant(*a).rem_euclid(*p as i64) != 0)
        .map(|&(name, p, a)| CorpusCurve {
            name,
            a,
            curve: curve(p, 1, a).expect("nonsingular"),
        })
        .collect()
}

/// Affine points per vertical line `x = l`, by substitution.
pub fn points_per_line(f: &FieldSpec, a: [i64; 5]) -> Vec<usize> {
    let c: Vec<_> = a.iter().map(|&x| f.from_int(x)).collect();
    let els = f.elements();
    els.iter()
        .map(|x| {
            els.iter()
                .filter(|y| {
                    let lhs = f.add(&f.add(&f.mul(y, y), &f.mul(&c[0], &f.mul(x, y))), &f.mul(&c[2], y));
                    let x2 = f.mul(x, x);
                    let rhs = f.add(
                        &f.add(&f.mul(&x2, x), &f.mul(&c[1], &x2)),
                        &f.add(&f.mul(&c[3], x), &c[4]),
                    );
                    lhs == rhs
                })
                .count()
        })
        .collect()
}

/// Shape of the closed-form answer: (2-torsion points, pairs, lines
/// without points), from the per-line counts plus the point at infinity.
pub fn brute_shape(f: &FieldSpec, a: [i64; 5]) -> (usize, usize, usize) {
    let per = points_per_line(f, a);
    let ones = per.iter().filter(|&&n| n == 1).count();
    let twos = per.iter().filter(|&&n| n == 2).count();
    let zeros = per.iter().filter(|&&n| n == 0).count();
    (ones + 1, twos, zeros)
}

/// Projective point count by direct substitution into the equation.
pub fn brute_point_count(f: &FieldSpec, a: [i64; 5]) -> usize {
    1 + points_per_line(f, a).iter().sum::<usize>()
}

pub fn isqrt_floor_times_two(q: u64) -> u64 {
    // floor(2 sqrt(q))
    let mut r = 0u64;
    while (r + 1) * (r + 1) <= 4 * q {
        r += 1;
    }
    r
}

pub fn abs_diff(a: usize, b: usize) -> u64 {
    (a as i64 - b as i64).unsigned_abs()
}
