use num_integer::Integer;
use num_traits::{One, Zero};

use super::groups::{AbHom, FgAbGroup, PresentedGroup};
use super::matrix::{Int, IntMatrix};
use super::snf::smith_normal_form;
use super::AbError;

/// A bounded chain complex `C_0 <- C_1 <- ... <- C_top` of presented groups.
/// `boundaries[i]` is the map `C_{i+1} -> C_i`.
#[derive(Clone, Debug)]
pub struct ChainComplexFg {
    groups: Vec<PresentedGroup>,
    boundaries: Vec<AbHom>,
}

impl ChainComplexFg {
    pub fn new(groups: Vec<PresentedGroup>, boundaries: Vec<IntMatrix>) -> Result<Self, AbError> {
        if groups.len() != boundaries.len() + 1 {
            return Err(AbError::Length {
                groups: groups.len(),
                boundaries: boundaries.len(),
            });
        }
        let homs = boundaries
            .into_iter()
            .enumerate()
            .map(|(i, m)| AbHom::new(groups[i + 1].clone(), groups[i].clone(), m))
            .collect::<Result<Vec<_>, _>>()?;
        ChainComplexFg::from_homs(groups, homs)
    }

    pub fn from_homs(groups: Vec<PresentedGroup>, boundaries: Vec<AbHom>) -> Result<Self, AbError> {
        for (i, d) in boundaries.iter().enumerate() {
            if d.source() != &groups[i + 1] || d.target() != &groups[i] {
                return Err(AbError::NotComposable);
            }
        }
        for i in 1..boundaries.len() {
            if !boundaries[i - 1].compose(&boundaries[i])?.is_zero() {
                return Err(AbError::NotAComplex { degree: i + 1 });
            }
        }
        Ok(ChainComplexFg { groups, boundaries })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, n: usize) -> &PresentedGroup {
        &self.groups[n]
    }

    /// The boundary `C_n -> C_{n-1}`, for `n >= 1`.
    pub fn boundary(&self, n: usize) -> &AbHom {
        &self.boundaries[n - 1]
    }

    pub fn homology_at(&self, n: usize) -> FgAbGroup {
        self.homology(n).group
    }

    /// `ker(d_n) / im(d_{n+1})` with explicit cycle representatives.
    ///
    /// Cycles are lifted to the generators of `C_n`: a vector `x` is a cycle
    /// when `d_n x` lies in the relation lattice of `C_{n-1}`.
    pub fn homology(&self, n: usize) -> Homology {
        assert!(n < self.groups.len(), "degree {n} out of range");
        let g = self.groups[n].gens();
        // Generators of the lifted cycle lattice.
        let cycles = if n == 0 {
            IntMatrix::identity(g)
        } else {
            let d = self.boundary(n).matrix();
            let a = d.hstack(self.groups[n - 1].relations());
            let snf = smith_normal_form(&a);
            let kernel: Vec<usize> = (snf.rank..a.cols()).collect();
            let rows: Vec<usize> = (0..g).collect();
            snf.v.select_cols(&kernel).select_rows(&rows)
        };
        let basis = smith_normal_form(&cycles);
        let basis_rank = basis.rank;
        let basis_diag = basis.diag();

        // Relations of C_n and boundaries from C_{n+1}, in cycle coordinates.
        let mut spanning = self.groups[n].relations().clone();
        if n + 1 < self.groups.len() {
            spanning = spanning.hstack(self.boundary(n + 1).matrix());
        }
        let projected = basis.u.mul(&spanning);
        let x = IntMatrix::from_fn(basis_rank, spanning.cols(), |i, j| {
            let (q, r) = projected[(i, j)].div_rem(&basis_diag[i]);
            debug_assert!(r.is_zero(), "boundary is not a cycle");
            q
        });
        let snf_x = smith_normal_form(&x);
        let d = snf_x.diag();

        let mut selected = Vec::new();
        let mut orders = Vec::new();
        for i in snf_x.rank..basis_rank {
            selected.push(i);
            orders.push(Int::zero());
        }
        for (i, di) in d.iter().enumerate() {
            if !di.is_one() {
                selected.push(i);
                orders.push(di.clone());
            }
        }

        let scaled_basis = IntMatrix::from_fn(g, basis_rank, |i, j| {
            &basis.u_inv[(i, j)] * &basis_diag[j]
        });
        let representatives = scaled_basis.mul(&snf_x.u_inv.select_cols(&selected));
        let group = FgAbGroup::from_cyclic_ints(&orders);
        let h = orders.len();
        let mut rel = Vec::new();
        for (i, o) in orders.iter().enumerate() {
            if !o.is_zero() {
                let mut col = vec![Int::zero(); h];
                col[i] = o.clone();
                rel.push(col);
            }
        }
        Homology {
            group,
            presentation: PresentedGroup::new(IntMatrix::from_columns(h, &rel)),
            representatives,
            orders,
            basis_u: basis.u,
            basis_diag,
            reduce: snf_x.u.select_rows(&selected),
        }
    }
}

/// A homology group with generator representatives and a coordinate map
/// from cycles to the presentation's generators.
#[derive(Clone, Debug)]
pub struct Homology {
    pub group: FgAbGroup,
    /// One generator per cyclic summand, diagonal relations.
    pub presentation: PresentedGroup,
    /// Column `i` is a cycle representing generator `i`.
    pub representatives: IntMatrix,
    orders: Vec<Int>,
    basis_u: IntMatrix,
    basis_diag: Vec<Int>,
    reduce: IntMatrix,
}

impl Homology {
    /// Coordinates of the class of `cycle`, reduced modulo each generator's
    /// order. `None` if `cycle` is not a cycle.
    pub fn coordinates(&self, cycle: &[Int]) -> Option<Vec<Int>> {
        let u = self.basis_u.mul_vec(cycle);
        let mut y = Vec::with_capacity(self.basis_diag.len());
        for (i, c) in u.iter().enumerate() {
            if i < self.basis_diag.len() {
                let (q, r) = c.div_rem(&self.basis_diag[i]);
                if !r.is_zero() {
                    return None;
                }
                y.push(q);
            } else if !c.is_zero() {
                return None;
            }
        }
        let mut z = self.reduce.mul_vec(&y);
        for (zi, o) in z.iter_mut().zip(&self.orders) {
            if !o.is_zero() {
                *zi = zi.mod_floor(o);
            }
        }
        Some(z)
    }

    pub fn generator_orders(&self) -> &[Int] {
        &self.orders
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(n: usize) -> PresentedGroup {
        PresentedGroup::free(n)
    }

    #[test]
    fn zero_map_complex() {
        let c = ChainComplexFg::new(vec![free(1), free(1)], vec![IntMatrix::zeros(1, 1)]).unwrap();
        assert_eq!(c.homology_at(0), FgAbGroup::free(1));
        assert_eq!(c.homology_at(1), FgAbGroup::free(1));
    }

    #[test]
    fn times_two() {
        let c = ChainComplexFg::new(vec![free(1), free(1)], vec![IntMatrix::from_rows(&[[2]])])
            .unwrap();
        assert_eq!(c.homology_at(0), FgAbGroup::cyclic(2));
        assert_eq!(c.homology_at(1), FgAbGroup::trivial());
    }

    #[test]
    fn triangle() {
        // Vertices 0,1,2; edges 01, 12, 20 with d(ab) = b - a.
        let d = IntMatrix::from_rows(&[[-1, 0, 1], [1, -1, 0], [0, 1, -1]]);
        let c = ChainComplexFg::new(vec![free(3), free(3)], vec![d]).unwrap();
        assert_eq!(c.homology_at(0), FgAbGroup::free(1));
        let h1 = c.homology(1);
        assert_eq!(h1.group, FgAbGroup::free(1));
        let rep = h1.representatives.column(0);
        assert_eq!(h1.coordinates(&rep), Some(vec![Int::one()]));
        let minus: Vec<Int> = rep.iter().map(|x| -x).collect();
        assert_eq!(h1.coordinates(&minus), Some(vec![-Int::one()]));
        assert_eq!(h1.coordinates(&[Int::one(), Int::zero(), Int::zero()]), None);
    }

    #[test]
    fn not_a_complex() {
        let err = ChainComplexFg::new(
            vec![free(1), free(1), free(1)],
            vec![IntMatrix::from_rows(&[[1]]), IntMatrix::from_rows(&[[1]])],
        )
        .unwrap_err();
        assert_eq!(err, AbError::NotAComplex { degree: 2 });
    }

    #[test]
    fn presented_terms() {
        // Z/4 --(x4)--> Z/8 : kernel Z/2 generated by 2, cokernel Z/4.
        let z4 = PresentedGroup::new(IntMatrix::from_rows(&[[4]]));
        let z8 = PresentedGroup::new(IntMatrix::from_rows(&[[8]]));
        let c = ChainComplexFg::new(vec![z8, z4], vec![IntMatrix::from_rows(&[[4]])]).unwrap();
        assert_eq!(c.homology_at(0), FgAbGroup::cyclic(4));
        let h1 = c.homology(1);
        assert_eq!(h1.group, FgAbGroup::cyclic(2));
        assert_eq!(h1.coordinates(&[Int::from(2)]), Some(vec![Int::one()]));
        assert_eq!(h1.coordinates(&[Int::from(4)]), Some(vec![Int::zero()]));
        assert_eq!(h1.coordinates(&[Int::from(1)]), None);
    }
}
