//! Integral homology of finite groups from the normalized bar complex.
//!
//! `C_n` is free on tuples `[g1|...|gn]` of non-identity elements, indexed
//! in base `|G| - 1` with `g1` most significant. The boundary is
//! `[g2|...|gn] + sum_i (-1)^i [..|g_i g_{i+1}|..] + (-1)^n [g1|...|g_{n-1}]`
//! with tuples containing the identity dropped.

use std::sync::Arc;

use num_traits::Zero;

use super::{FiniteGroup, GroupError, GroupHom};
use crate::abgrp::{
    AbHom, FgAbGroup, FreeChainComplex, FreeHomology, Int, IntMatrix, PresentedGroup, SparseMatrix,
    SparseVec,
};
use crate::exec;

/// Resource limits for bar homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ceilings {
    pub max_order: usize,
    pub max_degree: usize,
    /// Bound on `(|G| - 1)^(q + 1)`, the rank of the top chain group.
    pub max_tuples: u64,
}

impl Default for Ceilings {
    fn default() -> Self {
        Ceilings {
            max_order: 24,
            max_degree: 3,
            max_tuples: 20_000,
        }
    }
}

impl Ceilings {
    pub fn unlimited() -> Self {
        Ceilings {
            max_order: usize::MAX,
            max_degree: usize::MAX,
            max_tuples: u64::MAX,
        }
    }

    pub fn check(&self, g: &FiniteGroup, q: usize) -> Result<(), GroupError> {
        if g.order() > self.max_order {
            return Err(GroupError::TooLarge {
                what: "group order".into(),
                size: g.order() as u64,
                ceiling: self.max_order as u64,
            });
        }
        if q > self.max_degree {
            return Err(GroupError::TooLarge {
                what: "homological degree".into(),
                size: q as u64,
                ceiling: self.max_degree as u64,
            });
        }
        let tuples = (g.order() as u64 - 1)
            .checked_pow(q as u32 + 1)
            .unwrap_or(u64::MAX);
        if tuples > self.max_tuples {
            return Err(GroupError::TooLarge {
                what: "bar tuple count".into(),
                size: tuples,
                ceiling: self.max_tuples,
            });
        }
        Ok(())
    }
}

struct Tuples {
    /// Position among non-identity elements, `None` for the identity.
    position: Vec<Option<usize>>,
    nonidentity: Vec<usize>,
}

impl Tuples {
    fn new(g: &FiniteGroup) -> Self {
        let nonidentity: Vec<usize> = (0..g.order()).filter(|&x| x != g.identity()).collect();
        let mut position = vec![None; g.order()];
        for (i, &x) in nonidentity.iter().enumerate() {
            position[x] = Some(i);
        }
        Tuples {
            position,
            nonidentity,
        }
    }

    fn base(&self) -> usize {
        self.nonidentity.len()
    }

    fn count(&self, n: usize) -> usize {
        self.base().pow(n as u32)
    }

    fn decode(&self, mut index: usize, n: usize) -> Vec<usize> {
        let m = self.base();
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = self.nonidentity[index % m];
            index /= m;
        }
        t
    }

    /// Index of a tuple of group elements, `None` if it is degenerate.
    fn encode(&self, t: impl IntoIterator<Item = usize>) -> Option<usize> {
        let m = self.base();
        let mut index = 0;
        for x in t {
            index = index * m + self.position[x]?;
        }
        Some(index)
    }
}

fn boundary_column(g: &FiniteGroup, tuples: &Tuples, n: usize, index: usize) -> Vec<(usize, Int)> {
    let t = tuples.decode(index, n);
    let mut col = Vec::with_capacity(n + 1);
    let mut push = |idx: Option<usize>, sign: i64| {
        if let Some(i) = idx {
            col.push((i, Int::from(sign)));
        }
    };
    push(tuples.encode(t[1..].iter().copied()), 1);
    for i in 1..n {
        let merged = g.mul(t[i - 1], t[i]);
        let face = t[..i - 1]
            .iter()
            .copied()
            .chain(std::iter::once(merged))
            .chain(t[i + 1..].iter().copied());
        push(tuples.encode(face), if i % 2 == 0 { 1 } else { -1 });
    }
    push(tuples.encode(t[..n - 1].iter().copied()), if n.is_multiple_of(2) { 1 } else { -1 });
    col
}

/// The normalized bar complex in degrees `0..=top`.
pub fn bar_complex(g: &FiniteGroup, top: usize) -> FreeChainComplex {
    let tuples = Tuples::new(g);
    let boundaries = (1..=top)
        .map(|n| {
            let cols = exec::map_range(tuples.count(n), |j| boundary_column(g, &tuples, n, j));
            SparseMatrix::new(tuples.count(n - 1), cols)
        })
        .collect();
    FreeChainComplex::new(boundaries).expect("bar complex satisfies d d = 0")
}

/// `H_q(G, Z)` with cycle representatives on bar tuples.
pub struct GroupHomology {
    group: Arc<FiniteGroup>,
    degree: usize,
    homology: FreeHomology,
}

impl GroupHomology {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn canonical(&self) -> &FgAbGroup {
        &self.homology.group
    }

    pub fn presentation(&self) -> &PresentedGroup {
        &self.homology.presentation
    }

    pub fn representatives(&self) -> &[SparseVec] {
        &self.homology.representatives
    }

    /// Coordinates of the class of a bar cycle of degree `q`.
    pub fn coordinates(&self, chain: &SparseVec) -> Option<Vec<Int>> {
        self.homology.coordinates(chain)
    }
}

pub fn group_homology(
    g: &Arc<FiniteGroup>,
    q: usize,
    ceilings: &Ceilings,
) -> Result<GroupHomology, GroupError> {
    ceilings.check(g, q)?;
    let complex = bar_complex(g, q + 1);
    Ok(GroupHomology {
        group: g.clone(),
        degree: q,
        homology: complex.homology(q),
    })
}

pub fn bar_homology(g: &Arc<FiniteGroup>, q: usize, ceilings: &Ceilings) -> Result<FgAbGroup, GroupError> {
    Ok(group_homology(g, q, ceilings)?.canonical().clone())
}

/// The map `H_q(f)` between the given homologies of source and target.
pub fn induced_map(
    f: &GroupHom,
    source: &GroupHomology,
    target: &GroupHomology,
) -> Result<AbHom, GroupError> {
    assert_eq!(source.degree, target.degree, "degrees differ");
    assert!(
        f.source() == source.group() && f.target() == target.group(),
        "homology does not belong to the map's groups"
    );
    let q = source.degree;
    let from = Tuples::new(f.source());
    let to = Tuples::new(f.target());
    let columns: Vec<Vec<Int>> = source
        .representatives()
        .iter()
        .map(|rep| {
            let mut image: Vec<(usize, Int)> = Vec::new();
            for (idx, c) in rep {
                let t = from.decode(*idx, q);
                if let Some(j) = to.encode(t.into_iter().map(|x| f.apply(x))) {
                    image.push((j, c.clone()));
                }
            }
            image.sort_by_key(|(j, _)| *j);
            let mut merged: SparseVec = Vec::with_capacity(image.len());
            for (j, c) in image {
                match merged.last_mut() {
                    Some((k, d)) if *k == j => *d += c,
                    _ => merged.push((j, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            target
                .coordinates(&merged)
                .expect("chain maps send cycles to cycles")
        })
        .collect();
    let rows = target.presentation().gens();
    let m = IntMatrix::from_columns(rows, &columns);
    Ok(AbHom::new(source.presentation().clone(), target.presentation().clone(), m)?)
}
