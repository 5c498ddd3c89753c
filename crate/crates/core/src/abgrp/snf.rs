//! Smith normal form with optional tracking of both transforms and their
//! inverses.
//!
//! Pivoting: at each diagonal position the least nonzero entry (absolute
//! value, ties by row-major position) of the remaining block is chosen; while
//! clearing its row and column, the least remainder in that row or column
//! becomes the next pivot.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// `U · M · V = S` with `U`, `V` unimodular and `S` diagonal, `s_1 | s_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries, all positive.
    pub fn diag(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut st = Reducer::new(m.clone(), true);
    let rank = st.run();
    let Reducer { a, u, u_inv, v, v_inv } = st;
    SmithForm {
        u: u.unwrap(),
        u_inv: u_inv.unwrap(),
        s: a,
        v: v.unwrap(),
        v_inv: v_inv.unwrap(),
        rank,
    }
}

/// The nonzero invariant factors of `m`, without transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<Int> {
    let mut st = Reducer::new(m.clone(), false);
    let rank = st.run();
    (0..rank).map(|i| st.a[(i, i)].clone()).collect()
}

struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reducer {
    fn new(a: IntMatrix, track: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let eye = |k| track.then(|| IntMatrix::identity(k));
        Reducer {
            u: eye(m),
            u_inv: eye(m),
            v: eye(n),
            v_inv: eye(n),
            a,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// `row[dst] += c * row[src]`
    fn row_op(&mut self, dst: usize, src: usize, c: &Int) {
        self.a.add_row_multiple(dst, src, c);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, c);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(src, dst, &-c);
        }
    }

    /// `col[dst] += c * col[src]`
    fn col_op(&mut self, dst: usize, src: usize, c: &Int) {
        self.a.add_col_multiple(dst, src, c);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, c);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(src, dst, &-c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    fn least_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => x.magnitude() < self.a[b].magnitude(),
                };
                if better {
                    best = Some((i, j));
                    if x.magnitude().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Least nonzero entry in column `t` (rows > t) or row `t` (cols > t).
    fn least_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let cands = (t + 1..self.a.rows())
            .map(|i| (i, t))
            .chain((t + 1..self.a.cols()).map(|j| (t, j)));
        let mut best: Option<(usize, usize)> = None;
        for pos in cands {
            let x = &self.a[pos];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|b| x.magnitude() < self.a[b].magnitude()) {
                best = Some(pos);
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = self.least_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.a[(t, t)].clone();
                for i in t + 1..m {
                    if !self.a[(i, t)].is_zero() {
                        let q = self.a[(i, t)].div_floor(&pivot);
                        self.row_op(i, t, &-q);
                    }
                }
                for j in t + 1..n {
                    if !self.a[(t, j)].is_zero() {
                        let q = self.a[(t, j)].div_floor(&pivot);
                        self.col_op(j, t, &-q);
                    }
                }
                if let Some((pi, pj)) = self.least_in_cross(t) {
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                if pivot.magnitude().is_one() {
                    break;
                }
                let offending = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offending {
                    Some(i) => self.row_op(t, i, &Int::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Membership and solving in the lattice spanned by the columns of a matrix.
#[derive(Clone, Debug)]
pub struct ColumnLattice {
    rows: usize,
    u: IntMatrix,
    v: IntMatrix,
    diag: Vec<Int>,
}

impl ColumnLattice {
    pub fn new(generators: &IntMatrix) -> Self {
        let snf = smith_normal_form(generators);
        let diag = snf.diag();
        ColumnLattice {
            rows: generators.rows(),
            u: snf.u,
            v: snf.v,
            diag,
        }
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Coefficients `x` with `generators · x = y`, if `y` lies in the lattice.
    pub fn solve(&self, y: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(y.len(), self.rows);
        let uy = self.u.mul_vec(y);
        let mut z = vec![Int::zero(); self.v.rows()];
        for (i, c) in uy.iter().enumerate() {
            if i < self.diag.len() {
                let (q, r) = c.div_rem(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&z))
    }

    pub fn contains(&self, y: &[Int]) -> bool {
        let uy = self.u.mul_vec(y);
        uy.iter().enumerate().all(|(i, c)| {
            if i < self.diag.len() {
                c.is_multiple_of(&self.diag[i])
            } else {
                c.is_zero()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s);
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m.cols()));
        f
    }

    #[test]
    fn diag_2_3() {
        let f = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(f.diag(), ints(&[1, 6]));
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::zeros(3, 2);
        let f = check(&z);
        assert_eq!(f.rank, 0);
        assert_eq!(f.s, z);
        assert_eq!(f.u, IntMatrix::identity(3));
    }

    #[test]
    fn example_4_6_2_2() {
        let f = check(&IntMatrix::from_rows(&[[4, 6], [2, 2]]));
        assert_eq!(f.diag(), ints(&[2, 2]));
        assert_eq!(
            invariant_factors(&IntMatrix::from_rows(&[[4, 6], [2, 2]])),
            ints(&[2, 2])
        );
    }

    #[test]
    fn negative_and_rectangular() {
        let f = check(&IntMatrix::from_rows(&[[-6, 4, 0], [10, -8, 14]]));
        assert_eq!(f.diag(), ints(&[2, 2]));
        let f = check(&IntMatrix::from_rows(&[[0], [-5], [15]]));
        assert_eq!(f.diag(), ints(&[5]));
    }

    #[test]
    fn lattice_membership() {
        let l = ColumnLattice::new(&IntMatrix::from_rows(&[[2, 0], [0, 3], [0, 0]]));
        assert!(l.contains(&ints(&[4, -3, 0])));
        assert!(!l.contains(&ints(&[1, 0, 0])));
        assert!(!l.contains(&ints(&[0, 0, 1])));
        assert_eq!(l.solve(&ints(&[4, -3, 0])), Some(ints(&[2, -1])));
    }
}
