use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{Int, IntMatrix};
use super::snf::{invariant_factors, ColumnLattice};
use super::AbError;

/// A finitely generated abelian group in invariant-factor form:
/// `Z^rank + Z/d_1 + ... + Z/d_m` with `d_1 | d_2 | ... | d_m`, all `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<Int>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        FgAbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        FgAbGroup::from_cyclic_orders(&[n])
    }

    /// The direct sum of cyclic groups of the given orders (`0` means `Z`).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let ints: Vec<Int> = orders.iter().map(|&n| Int::from(n)).collect();
        FgAbGroup::from_cyclic_ints(&ints)
    }

    pub fn from_cyclic_ints(orders: &[Int]) -> Self {
        let rank = orders.iter().filter(|d| d.is_zero()).count();
        let finite: Vec<Int> = orders
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.abs())
            .filter(|d| !d.is_one())
            .collect();
        let diag = IntMatrix::diagonal(finite.len(), finite.len(), &finite);
        let torsion = invariant_factors(&diag)
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        FgAbGroup { rank, torsion }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of elements, or `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::sum_all([self, other])
    }

    pub fn sum_all<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> FgAbGroup {
        let mut orders = Vec::new();
        for g in groups {
            orders.extend(std::iter::repeat_n(Int::zero(), g.rank));
            orders.extend(g.torsion.iter().cloned());
        }
        FgAbGroup::from_cyclic_ints(&orders)
    }

    pub fn iso_eq(&self, other: &FgAbGroup) -> bool {
        self == other
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct FgAbGroupRepr {
    rank: usize,
    torsion: Vec<serde_json::Value>,
}

impl Serialize for FgAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let torsion = self
            .torsion
            .iter()
            .map(|d| match d.to_u64() {
                Some(n) => serde_json::Value::from(n),
                None => serde_json::Value::from(d.to_string()),
            })
            .collect();
        FgAbGroupRepr {
            rank: self.rank,
            torsion,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = FgAbGroupRepr::deserialize(d)?;
        let mut orders = vec![Int::zero(); repr.rank];
        for v in repr.torsion {
            let n = match &v {
                serde_json::Value::Number(n) => n.as_u64().map(Int::from),
                serde_json::Value::String(s) => s.parse::<Int>().ok(),
                _ => None,
            }
            .filter(|n| *n >= Int::from(2))
            .ok_or_else(|| D::Error::custom(format!("bad invariant factor {v}")))?;
            orders.push(n);
        }
        let g = FgAbGroup::from_cyclic_ints(&orders);
        if g.rank != repr.rank {
            return Err(D::Error::custom("torsion entries must be nonzero"));
        }
        Ok(g)
    }
}

/// The cokernel of a relation matrix: `Z^gens / (column span of relations)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresentedGroup {
    gens: usize,
    relations: IntMatrix,
}

impl PresentedGroup {
    pub fn new(relations: IntMatrix) -> Self {
        PresentedGroup {
            gens: relations.rows(),
            relations,
        }
    }

    pub fn free(gens: usize) -> Self {
        PresentedGroup::new(IntMatrix::zeros(gens, 0))
    }

    pub fn trivial() -> Self {
        PresentedGroup::free(0)
    }

    /// Generators in the order: free summands first, then the torsion
    /// summands in invariant-factor order.
    pub fn from_canonical(g: &FgAbGroup) -> Self {
        let gens = g.rank + g.torsion.len();
        let mut rel = IntMatrix::zeros(gens, g.torsion.len());
        for (i, d) in g.torsion.iter().enumerate() {
            rel[(g.rank + i, i)] = d.clone();
        }
        PresentedGroup::new(rel)
    }

    /// Orders of the generators when the relation matrix is diagonal
    /// (`0` for free generators). `None` otherwise.
    pub fn diagonal_orders(&self) -> Option<Vec<Int>> {
        let mut orders = vec![Int::zero(); self.gens];
        for j in 0..self.relations.cols() {
            let nz: Vec<usize> = (0..self.gens)
                .filter(|&i| !self.relations[(i, j)].is_zero())
                .collect();
            match nz.as_slice() {
                [] => {}
                [i] if orders[*i].is_zero() => orders[*i] = self.relations[(*i, j)].abs(),
                [i] => orders[*i] = orders[*i].gcd(&self.relations[(*i, j)]),
                _ => return None,
            }
        }
        Some(orders)
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn canonical(&self) -> FgAbGroup {
        let diag = invariant_factors(&self.relations);
        let rank = self.gens - diag.len();
        FgAbGroup {
            rank,
            torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn direct_sum(groups: &[&PresentedGroup]) -> PresentedGroup {
        let rels: Vec<&IntMatrix> = groups.iter().map(|g| &g.relations).collect();
        PresentedGroup::new(IntMatrix::block_diag(&rels))
    }

    pub fn iso_eq(&self, other: &PresentedGroup) -> bool {
        self.canonical() == other.canonical()
    }

    pub(crate) fn lattice(&self) -> ColumnLattice {
        ColumnLattice::new(&self.relations)
    }
}

/// A homomorphism between presented groups, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    source: PresentedGroup,
    target: PresentedGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks that every source relation maps into the target relations.
    pub fn new(
        source: PresentedGroup,
        target: PresentedGroup,
        matrix: IntMatrix,
    ) -> Result<AbHom, AbError> {
        if matrix.rows() != target.gens || matrix.cols() != source.gens {
            return Err(AbError::Shape {
                expected: (target.gens, source.gens),
                got: (matrix.rows(), matrix.cols()),
            });
        }
        let images = matrix.mul(&source.relations);
        if !images.is_zero() {
            let lattice = target.lattice();
            for j in 0..images.cols() {
                if !lattice.contains(&images.column(j)) {
                    return Err(AbError::IllDefined { relation: j });
                }
            }
        }
        Ok(AbHom {
            source,
            target,
            matrix,
        })
    }

    /// For matrices assembled from blocks that were each checked by [`AbHom::new`].
    pub(crate) fn from_checked_blocks(
        source: PresentedGroup,
        target: PresentedGroup,
        matrix: IntMatrix,
    ) -> AbHom {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (target.gens, source.gens));
        AbHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &PresentedGroup) -> AbHom {
        AbHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.gens),
        }
    }

    pub fn zero(source: &PresentedGroup, target: &PresentedGroup) -> AbHom {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.gens, source.gens),
        }
    }

    pub fn source(&self) -> &PresentedGroup {
        &self.source
    }

    pub fn target(&self) -> &PresentedGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AbHom) -> Result<AbHom, AbError> {
        if first.target != self.source {
            return Err(AbError::NotComposable);
        }
        Ok(AbHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    pub fn is_zero(&self) -> bool {
        if self.matrix.is_zero() {
            return true;
        }
        let lattice = self.target.lattice();
        (0..self.matrix.cols()).all(|j| lattice.contains(&self.matrix.column(j)))
    }

    /// Equality as maps of groups (matrices may differ by target relations).
    pub fn same_map(&self, other: &AbHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let lattice = self.target.lattice();
        (0..self.matrix.cols()).all(|j| {
            let diff: Vec<Int> = self
                .matrix
                .column(j)
                .iter()
                .zip(other.matrix.column(j))
                .map(|(a, b)| a - b)
                .collect();
            lattice.contains(&diff)
        })
    }

    pub fn is_surjective(&self) -> bool {
        let coker = PresentedGroup::new(self.matrix.hstack(&self.target.relations));
        coker.canonical().is_trivial()
    }

    /// Surjective between isomorphic finitely generated abelian groups,
    /// which suffices since such groups are Hopfian.
    pub fn is_iso(&self) -> bool {
        self.is_surjective() && self.source.iso_eq(&self.target)
    }

    pub fn direct_sum(homs: &[&AbHom]) -> AbHom {
        let sources: Vec<&PresentedGroup> = homs.iter().map(|h| &h.source).collect();
        let targets: Vec<&PresentedGroup> = homs.iter().map(|h| &h.target).collect();
        let mats: Vec<&IntMatrix> = homs.iter().map(|h| &h.matrix).collect();
        AbHom {
            source: PresentedGroup::direct_sum(&sources),
            target: PresentedGroup::direct_sum(&targets),
            matrix: IntMatrix::block_diag(&mats),
        }
    }
}
