//! Finite groups given by multiplication tables, their integral homology via
//! normalized bar complexes, and the stabilizer groups of the domain tree.

mod bar;
mod build;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::abgrp::{AbError, FgAbGroup};
use crate::exec;

pub use bar::{bar_complex, bar_homology, group_homology, induced_map, Ceilings, GroupHomology};
pub use build::{
    additive_group, borel_inclusion, cyclic, gl2, pad_inclusion, pgl2, product,
    quadratic_units_mod_units, scalar_subgroup, triangular_group, unit_group, Triangular,
};

/// Largest group the constructors will tabulate.
pub const CONSTRUCTION_CEILING: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("{what} is {size}, above the ceiling {ceiling}")]
    TooLarge {
        what: String,
        size: u64,
        ceiling: u64,
    },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a subgroup")]
    NotASubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not central")]
    NotCentral,
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotAHom(usize, usize),
    #[error("map does not descend to the quotients")]
    DoesNotDescend,
    #[error(transparent)]
    Ab(#[from] AbError),
}

/// A finite group on the elements `0..order`.
///
/// Every element carries a sort key (the constructors use encoded matrix or
/// field entries) and a display label. Elements are numbered in key order.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    keys: Vec<Vec<u32>>,
    labels: Vec<String>,
    generators: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl FiniteGroup {
    /// A group from an explicit multiplication table, `table[a][b] = ab`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::NotAGroup("table is not square".into()));
        }
        let flat = table.iter().flatten().map(|&x| x as u32).collect();
        let keys = (0..n).map(|i| vec![i as u32]).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::validate(n, flat, keys, labels)
    }

    /// Tabulates the closure under `mul` of the given elements. The element
    /// list must already be closed.
    pub(crate) fn from_keys<F>(mut elems: Vec<(Vec<u32>, String)>, mul: F) -> Result<Self, GroupError>
    where
        F: Fn(&[u32], &[u32]) -> Vec<u32> + Sync + Send,
    {
        let n = elems.len();
        if n > CONSTRUCTION_CEILING {
            return Err(GroupError::TooLarge {
                what: "group order".into(),
                size: n as u64,
                ceiling: CONSTRUCTION_CEILING as u64,
            });
        }
        elems.sort();
        let (keys, labels): (Vec<_>, Vec<_>) = elems.into_iter().unzip();
        let rows = exec::map_range(n, |a| {
            (0..n)
                .map(|b| {
                    let k = mul(&keys[a], &keys[b]);
                    keys.binary_search(&k).map(|i| i as u32)
                })
                .collect::<Result<Vec<u32>, _>>()
        });
        let mut table = Vec::with_capacity(n * n);
        for r in rows {
            table.extend(r.map_err(|_| GroupError::NotAGroup("not closed".into()))?);
        }
        Self::validate(n, table, keys, labels)
    }

    fn validate(
        n: usize,
        table: Vec<u32>,
        keys: Vec<Vec<u32>>,
        labels: Vec<String>,
    ) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::NotAGroup("empty".into()));
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for (a, label) in labels.iter().enumerate() {
            let b = (0..n)
                .find(|&b| at(a, b) == identity)
                .ok_or_else(|| GroupError::NotAGroup(format!("{label} has no inverse")))?;
            if at(b, a) != identity {
                return Err(GroupError::NotAGroup(format!("{label} has no two-sided inverse")));
            }
            inverse.push(b);
        }
        let mut g = FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            keys,
            labels,
            generators: Vec::new(),
        };
        g.generators = g.greedy_generators();
        // Light's test: associativity against a generating set implies it
        // for every product of generators, hence for all elements.
        for &s in &g.generators {
            for a in 0..n {
                for b in 0..n {
                    if g.mul(g.mul(a, b), s) != g.mul(a, g.mul(b, s)) {
                        return Err(GroupError::NotAGroup(format!(
                            "not associative at ({}, {}, {})",
                            g.labels[a], g.labels[b], g.labels[s]
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec![vec![0]]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn key(&self, a: usize) -> &[u32] {
        &self.keys[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, key: &[u32]) -> Option<usize> {
        self.keys.binary_search_by(|k| k.as_slice().cmp(key)).ok()
    }

    /// A generating set, chosen greedily in element order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        for g in 0..self.order {
            if !span[g] {
                gens.push(g);
                for x in self.closure(&gens) {
                    span[x] = true;
                }
            }
        }
        gens
    }

    /// The subgroup generated by `gens`, as sorted element indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| self.generators.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in elems {
            member[x] = true;
        }
        member[self.identity]
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| member[self.mul(a, b)]))
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in elems {
            member[x] = true;
        }
        self.generators.iter().all(|&g| {
            elems
                .iter()
                .all(|&z| member[self.mul(self.mul(g, z), self.inv(g))])
        })
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)));
                comms.push(c);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.closure(&comms)
    }
}

/// A homomorphism, checked for multiplicativity on all pairs.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: Vec<usize>,
    ) -> Result<Self, GroupError> {
        assert_eq!(images.len(), source.order());
        for a in 0..source.order() {
            for b in 0..source.order() {
                if images[source.mul(a, b)] != target.mul(images[a], images[b]) {
                    return Err(GroupError::NotAHom(a, b));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    pub fn from_fn(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self, GroupError> {
        let images = (0..source.order()).map(f).collect();
        GroupHom::new(source, target, images)
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            images: (0..g.order()).collect(),
        }
    }

    pub fn trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            images: vec![target.identity(); source.order()],
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        assert!(first.target == self.source, "homomorphisms are not composable");
        GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            images: first.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let e = self.target.identity();
        (0..self.source.order())
            .filter(|&a| self.images[a] == e)
            .count()
            == 1
    }

    pub fn image(&self) -> Vec<usize> {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The induced map `source/N -> target/M`, if `self(N) ⊆ M`.
    pub fn descend(&self, from: &Quotient, to: &Quotient) -> Result<GroupHom, GroupError> {
        if from.projection.source() != &self.source || to.projection.source() != &self.target {
            return Err(GroupError::DoesNotDescend);
        }
        let mut images = vec![usize::MAX; from.group.order()];
        for g in 0..self.source.order() {
            let coset = from.projection.apply(g);
            let img = to.projection.apply(self.images[g]);
            if images[coset] == usize::MAX {
                images[coset] = img;
            } else if images[coset] != img {
                return Err(GroupError::DoesNotDescend);
            }
        }
        GroupHom::new(from.group.clone(), to.group.clone(), images)
    }
}

/// A quotient group with its projection. Cosets are represented by their
/// least element.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Arc<FiniteGroup>,
    pub projection: GroupHom,
    pub representatives: Vec<usize>,
}

pub fn quotient_by_normal(g: &Arc<FiniteGroup>, n: &[usize]) -> Result<Quotient, GroupError> {
    if !g.is_subgroup(n) {
        return Err(GroupError::NotASubgroup);
    }
    if !g.is_normal(n) {
        return Err(GroupError::NotNormal);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] == usize::MAX {
            for &z in n {
                coset_of[g.mul(x, z)] = reps.len();
            }
            reps.push(x);
        }
    }
    let m = reps.len();
    let table: Vec<u32> = (0..m * m)
        .map(|i| coset_of[g.mul(reps[i / m], reps[i % m])] as u32)
        .collect();
    let keys = reps.iter().map(|&r| g.key(r).to_vec()).collect();
    let labels = reps.iter().map(|&r| g.label(r).to_string()).collect();
    let group = Arc::new(FiniteGroup::validate(m, table, keys, labels)?);
    // Keys of representatives are increasing, so coset numbering is key order.
    let projection = GroupHom::new(g.clone(), group.clone(), coset_of)?;
    Ok(Quotient {
        group,
        projection,
        representatives: reps,
    })
}

pub fn quotient_by_central(g: &Arc<FiniteGroup>, z: &[usize]) -> Result<Quotient, GroupError> {
    if !g.is_subgroup(z) {
        return Err(GroupError::NotASubgroup);
    }
    let center = g.center();
    if z.iter().any(|x| center.binary_search(x).is_err()) {
        return Err(GroupError::NotCentral);
    }
    quotient_by_normal(g, z)
}

/// `G / [G, G]`, computed from the commutator subgroup and the element
/// orders of the quotient.
pub fn abelianization(g: &Arc<FiniteGroup>) -> FgAbGroup {
    let q = quotient_by_normal(g, &g.commutator_subgroup()).expect("commutator subgroup is normal");
    abelian_invariants(&q.group)
}

/// Invariant factors of a finite abelian group from the counts of elements
/// killed by each prime power.
pub fn abelian_invariants(a: &FiniteGroup) -> FgAbGroup {
    let n = a.order() as u64;
    let orders: Vec<u64> = (0..a.order()).map(|x| a.element_order(x) as u64).collect();
    let mut cyclic = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        if !rest.is_multiple_of(p) {
            p += 1;
            continue;
        }
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        // s_j = log_p #{x : x^(p^j) = 1} = sum_i min(j, e_i).
        let mut s = vec![0u32];
        let mut pj = 1u64;
        for _ in 1..=e {
            pj *= p;
            let count = orders.iter().filter(|&&o| pj.is_multiple_of(o)).count() as u64;
            s.push(count.ilog(p));
        }
        // Number of cyclic factors of exponent >= j is s_j - s_{j-1}.
        let at_least: Vec<u32> = (1..s.len()).map(|j| s[j] - s[j - 1]).collect();
        let mut exps: BTreeMap<u32, u32> = BTreeMap::new();
        for j in 0..at_least.len() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            let exact = at_least[j] - next;
            if exact > 0 {
                exps.insert(j as u32 + 1, exact);
            }
        }
        for (exp, count) in exps {
            for _ in 0..count {
                cyclic.push(p.pow(exp));
            }
        }
    }
    FgAbGroup::from_cyclic_orders(&cyclic)
}
