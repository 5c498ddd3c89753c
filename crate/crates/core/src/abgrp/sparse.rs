//! Chain complexes of free abelian groups with sparse boundaries.
//!
//! Homology is computed on the window `C_{n-1} <- C_n <- C_{n+1}` after
//! eliminating every unit entry of both boundaries. Each elimination removes
//! a pair of cells and is a chain homotopy equivalence; the projection and
//! inclusion maps are recorded so cycles of the original complex can be
//! expressed in the reduced one and back. The remaining blocks are small and
//! go through the dense [`ChainComplexFg::homology`].

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::complex::{ChainComplexFg, Homology};
use super::groups::{FgAbGroup, PresentedGroup};
use super::matrix::{Int, IntMatrix};
use super::AbError;

/// Sparse vector as sorted `(index, value)` pairs without zeros.
pub type SparseVec = Vec<(usize, Int)>;

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

fn normalize(mut v: Vec<(usize, Int)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

impl SparseMatrix {
    /// Entries may be unsorted and contain duplicates, which are summed.
    pub fn new(rows: usize, columns: Vec<Vec<(usize, Int)>>) -> Self {
        let columns: Vec<SparseVec> = columns.into_iter().map(normalize).collect();
        assert!(
            columns.iter().flatten().all(|(i, _)| *i < rows),
            "row index out of range"
        );
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (j, x) in v {
            for (i, y) in &self.columns[*j] {
                acc.push((*i, x * y));
            }
        }
        normalize(acc)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                m[(*i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            columns,
        }
    }
}

/// `0 <- C_0 <- C_1 <- ... <- C_top` with `C_i = Z^{dims[i]}`.
#[derive(Clone, Debug)]
pub struct FreeChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl FreeChainComplex {
    /// `boundaries[i]` is `C_{i+1} -> C_i`. Verifies `d d = 0`.
    pub fn new(boundaries: Vec<SparseMatrix>) -> Result<Self, AbError> {
        let mut dims = Vec::with_capacity(boundaries.len() + 1);
        dims.push(boundaries.first().map_or(0, |b| b.rows()));
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[i] {
                return Err(AbError::NotComposable);
            }
            dims.push(b.cols());
        }
        for i in 1..boundaries.len() {
            let (lower, upper) = (&boundaries[i - 1], &boundaries[i]);
            if upper.columns.iter().any(|c| !lower.apply(c).is_empty()) {
                return Err(AbError::NotAComplex { degree: i + 1 });
            }
        }
        Ok(FreeChainComplex { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, n: usize) -> &SparseMatrix {
        &self.boundaries[n - 1]
    }

    pub fn homology_at(&self, n: usize) -> FgAbGroup {
        self.homology(n).group
    }

    pub fn homology(&self, n: usize) -> FreeHomology {
        assert!(n < self.dims.len(), "degree {n} out of range");
        let lower = (n > 0).then(|| &self.boundaries[n - 1]);
        let upper = self.boundaries.get(n);
        let mut h = Reduction::new(self.dims[n], lower, upper).finish();
        h.lower = lower.cloned();
        h
    }
}

enum ProjOp {
    /// `x <- x - x_cell * sign * boundary`, then forget `cell`.
    Eliminate {
        cell: usize,
        sign: Int,
        boundary: SparseVec,
    },
    Drop(usize),
}

struct Reduction {
    upper_cols: Vec<Option<BTreeMap<usize, Int>>>,
    upper_rows: Vec<BTreeSet<usize>>,
    lower_cols: Vec<Option<BTreeMap<usize, Int>>>,
    lower_rows: Vec<BTreeSet<usize>>,
    lifts: Vec<Option<BTreeMap<usize, Int>>>,
    ops: Vec<ProjOp>,
}

fn sub_scaled(
    target: &mut BTreeMap<usize, Int>,
    factor: &Int,
    source: &BTreeMap<usize, Int>,
    mut on_change: impl FnMut(usize, bool),
) {
    for (r, v) in source {
        let e = target.entry(*r).or_insert_with(Int::zero);
        *e -= factor * v;
        if e.is_zero() {
            target.remove(r);
            on_change(*r, false);
        } else {
            on_change(*r, true);
        }
    }
}

fn unit_pivot(col: &BTreeMap<usize, Int>, weights: &[BTreeSet<usize>]) -> Option<(usize, Int)> {
    col.iter()
        .filter(|(_, v)| v.abs() == Int::from(1))
        .min_by_key(|(r, _)| (weights[**r].len(), **r))
        .map(|(r, v)| (*r, v.clone()))
}

impl Reduction {
    fn new(cells: usize, lower: Option<&SparseMatrix>, upper: Option<&SparseMatrix>) -> Self {
        let to_map = |c: &SparseVec| c.iter().cloned().collect::<BTreeMap<_, _>>();
        let upper_cols: Vec<_> = upper
            .map(|m| m.columns.iter().map(|c| Some(to_map(c))).collect())
            .unwrap_or_default();
        let mut upper_rows = vec![BTreeSet::new(); cells];
        for (j, c) in upper_cols.iter().enumerate() {
            for r in c.as_ref().unwrap().keys() {
                upper_rows[*r].insert(j);
            }
        }
        let (lower_cols, lower_rows) = match lower {
            Some(m) => {
                let cols: Vec<_> = m.columns.iter().map(|c| Some(to_map(c))).collect();
                let mut rows = vec![BTreeSet::new(); m.rows()];
                for (j, c) in cols.iter().enumerate() {
                    for r in c.as_ref().unwrap().keys() {
                        rows[*r].insert(j);
                    }
                }
                (cols, rows)
            }
            None => (vec![Some(BTreeMap::new()); cells], Vec::new()),
        };
        let lifts = (0..cells)
            .map(|i| Some(BTreeMap::from([(i, Int::from(1))])))
            .collect();
        let mut red = Reduction {
            upper_cols,
            upper_rows,
            lower_cols,
            lower_rows,
            lifts,
            ops: Vec::new(),
        };
        red.reduce_upper();
        red.reduce_lower();
        red
    }

    fn reduce_upper(&mut self) {
        loop {
            let mut progress = false;
            for b in 0..self.upper_cols.len() {
                let Some(col) = &self.upper_cols[b] else { continue };
                if let Some((a, sign)) = unit_pivot(col, &self.upper_rows) {
                    self.eliminate_upper(a, b, sign);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }

    fn eliminate_upper(&mut self, a: usize, b: usize, sign: Int) {
        let col_b = self.upper_cols[b].take().unwrap();
        for r in col_b.keys() {
            self.upper_rows[*r].remove(&b);
        }
        let others: Vec<usize> = self.upper_rows[a].iter().copied().collect();
        for c in others {
            let col_c = self.upper_cols[c].as_mut().unwrap();
            let factor = &col_c[&a] * &sign;
            let rows = &mut self.upper_rows;
            sub_scaled(col_c, &factor, &col_b, |r, present| {
                if present {
                    rows[r].insert(c);
                } else {
                    rows[r].remove(&c);
                }
            });
        }
        debug_assert!(self.upper_rows[a].is_empty());
        if let Some(lc) = self.lower_cols[a].take() {
            for r in lc.keys() {
                self.lower_rows[*r].remove(&a);
            }
        }
        self.lifts[a] = None;
        self.ops.push(ProjOp::Eliminate {
            cell: a,
            sign,
            boundary: col_b.into_iter().collect(),
        });
    }

    fn reduce_lower(&mut self) {
        loop {
            let mut progress = false;
            for b in 0..self.lower_cols.len() {
                let Some(col) = &self.lower_cols[b] else { continue };
                if let Some((a, sign)) = unit_pivot(col, &self.lower_rows) {
                    self.eliminate_lower(a, b, sign);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }

    fn eliminate_lower(&mut self, a: usize, b: usize, sign: Int) {
        let col_b = self.lower_cols[b].take().unwrap();
        for r in col_b.keys() {
            self.lower_rows[*r].remove(&b);
        }
        let lift_b = self.lifts[b].take().unwrap();
        let others: Vec<usize> = self.lower_rows[a].iter().copied().collect();
        for x in others {
            let col_x = self.lower_cols[x].as_mut().unwrap();
            let factor = &col_x[&a] * &sign;
            let rows = &mut self.lower_rows;
            sub_scaled(col_x, &factor, &col_b, |r, present| {
                if present {
                    rows[r].insert(x);
                } else {
                    rows[r].remove(&x);
                }
            });
            sub_scaled(self.lifts[x].as_mut().unwrap(), &factor, &lift_b, |_, _| {});
        }
        debug_assert!(self.lower_rows[a].is_empty());
        for c in std::mem::take(&mut self.upper_rows[b]) {
            self.upper_cols[c].as_mut().unwrap().remove(&b);
        }
        self.ops.push(ProjOp::Drop(b));
    }

    fn finish(self) -> FreeHomology {
        let alive: Vec<usize> = (0..self.lifts.len())
            .filter(|&i| self.lifts[i].is_some())
            .collect();
        let mut position = vec![None; self.lifts.len()];
        for (k, &i) in alive.iter().enumerate() {
            position[i] = Some(k);
        }

        let lower_rows: Vec<usize> = alive
            .iter()
            .flat_map(|&b| self.lower_cols[b].as_ref().unwrap().keys().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut lower = IntMatrix::zeros(lower_rows.len(), alive.len());
        for (k, &b) in alive.iter().enumerate() {
            for (r, v) in self.lower_cols[b].as_ref().unwrap() {
                let i = lower_rows.binary_search(r).unwrap();
                lower[(i, k)] = v.clone();
            }
        }
        let upper_cols: Vec<&BTreeMap<usize, Int>> = self
            .upper_cols
            .iter()
            .flatten()
            .filter(|c| !c.is_empty())
            .collect();
        let mut upper = IntMatrix::zeros(alive.len(), upper_cols.len());
        for (j, c) in upper_cols.iter().enumerate() {
            for (r, v) in c.iter() {
                upper[(position[*r].expect("live row"), j)] = v.clone();
            }
        }

        let window = ChainComplexFg::new(
            vec![
                PresentedGroup::free(lower_rows.len()),
                PresentedGroup::free(alive.len()),
                PresentedGroup::free(upper_cols.len()),
            ],
            vec![lower, upper],
        )
        .expect("reduction preserves d d = 0");
        let inner = window.homology(1);

        let representatives = (0..inner.representatives.cols())
            .map(|g| {
                let mut acc = Vec::new();
                for (k, &cell) in alive.iter().enumerate() {
                    let c = &inner.representatives[(k, g)];
                    if c.is_zero() {
                        continue;
                    }
                    for (i, v) in self.lifts[cell].as_ref().unwrap() {
                        acc.push((*i, c * v));
                    }
                }
                normalize(acc)
            })
            .collect();

        FreeHomology {
            group: inner.group.clone(),
            presentation: inner.presentation.clone(),
            representatives,
            reduced_cells: alive.len(),
            lower: None,
            position,
            ops: self.ops,
            inner,
        }
    }
}

/// Homology of a free complex with representatives in the original basis.
pub struct FreeHomology {
    pub group: FgAbGroup,
    pub presentation: PresentedGroup,
    /// Original-basis cycle representing each presentation generator.
    pub representatives: Vec<SparseVec>,
    reduced_cells: usize,
    lower: Option<SparseMatrix>,
    position: Vec<Option<usize>>,
    ops: Vec<ProjOp>,
    inner: Homology,
}

impl FreeHomology {
    /// Number of cells left in degree `n` after unit eliminations.
    pub fn reduced_cells(&self) -> usize {
        self.reduced_cells
    }

    /// Coordinates of the class of an original-basis cycle.
    pub fn coordinates(&self, chain: &SparseVec) -> Option<Vec<Int>> {
        if self.lower.as_ref().is_some_and(|d| !d.apply(chain).is_empty()) {
            return None;
        }
        let mut v: BTreeMap<usize, Int> = chain.iter().cloned().collect();
        for op in &self.ops {
            match op {
                ProjOp::Eliminate {
                    cell,
                    sign,
                    boundary,
                } => {
                    let Some(x) = v.remove(cell) else { continue };
                    let factor = x * sign;
                    for (r, b) in boundary {
                        if r == cell {
                            continue;
                        }
                        let e = v.entry(*r).or_insert_with(Int::zero);
                        *e -= &factor * b;
                        if e.is_zero() {
                            v.remove(r);
                        }
                    }
                }
                ProjOp::Drop(b) => {
                    v.remove(b);
                }
            }
        }
        let mut dense = vec![Int::zero(); self.reduced_cells];
        for (r, x) in v {
            dense[self.position[r]?] = x;
        }
        self.inner.coordinates(&dense)
    }
}
