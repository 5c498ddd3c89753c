//! Coefficient systems `sigma -> H_q(Gamma_sigma)` on the domain tree, the
//! two-column E1 page, its homology, and the comparison with the closed-form
//! decomposition.

mod concrete;
mod report;

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::abgrp::{
    AbError, AbHom, ChainComplexFg, FgAbGroup, FreeChainComplex, Int, IntMatrix, PresentedGroup,
    SparseMatrix,
};
use crate::curve::{Line, LineCase};
use crate::domain::{DomainError, DomainTree, VertexId};
use crate::grouph::GroupError;

pub use concrete::{concrete_system, ConcreteCatalog, ConcreteLevel, MapMeasurement, NessusFlag};
pub use report::{
    assemble, compare, run_concrete, run_symbolic, run_symbolic_with, theorem_rhs, Assembled, ConcreteRun,
    DecompositionReport, DegreeEntry, DegreeZero, E2, Measurements, Mode, RhsEntry, SubtreeDiagnostic,
    SymbolicRun, Verdict,
};

/// Symbolic names for the homology groups of the stabilizers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Token {
    HqPGL2k,
    HqUnits,
    HqQuadUnitsModUnits(Line),
    HqAdditive,
    Zero,
    Z0,
}

impl Token {
    pub fn name(&self) -> &'static str {
        match self {
            Token::HqPGL2k => "HqPGL2k",
            Token::HqUnits => "HqUnits",
            Token::HqQuadUnitsModUnits(_) => "HqQuadUnitsModUnits",
            Token::HqAdditive => "HqAdditive",
            Token::Zero => "Zero",
            Token::Z0 => "Z0",
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::HqQuadUnitsModUnits(l) => write!(f, "HqQuadUnitsModUnits({l})"),
            t => f.write_str(t.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapTag {
    Iso,
    ZeroMap,
    Unconstrained,
}

/// The maps from an edge group to its two endpoint groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence<M> {
    pub toward_tail: M,
    pub toward_head: M,
}

#[derive(Clone, Debug)]
pub struct CoefficientSystem<G, M> {
    tree: DomainTree,
    vertex_groups: Vec<G>,
    edge_groups: Vec<G>,
    maps: Vec<Incidence<M>>,
}

pub type SymbolicSystem = CoefficientSystem<Token, MapTag>;
pub type ConcreteSystem = CoefficientSystem<PresentedGroup, AbHom>;

impl<G, M> CoefficientSystem<G, M> {
    pub fn tree(&self) -> &DomainTree {
        &self.tree
    }

    pub fn vertex_group(&self, v: usize) -> &G {
        &self.vertex_groups[v]
    }

    pub fn edge_group(&self, e: usize) -> &G {
        &self.edge_groups[e]
    }

    pub fn incidence(&self, e: usize) -> &Incidence<M> {
        &self.maps[e]
    }

    pub fn set_map(&mut self, e: usize, toward_head: bool, map: M) {
        let inc = &mut self.maps[e];
        if toward_head {
            inc.toward_head = map;
        } else {
            inc.toward_tail = map;
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CoeffError {
    #[error("stabilizer of {simplex} is beyond the ceilings: {source}")]
    TooLarge { simplex: String, source: GroupError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ab(#[from] AbError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("tokens {0} and {1} are instantiated by isomorphic groups")]
    Undetectable(String, String),
    #[error("coefficient degree must be at least 1")]
    Degree,
}

fn line_case(tree: &DomainTree, v: usize) -> &LineCase {
    &tree.line_of(v).expect("vertex belongs to a line").case
}

/// The tagged system for a fixed degree `q >= 1`.
pub fn symbolic_system(tree: &DomainTree, q: usize) -> Result<SymbolicSystem, CoeffError> {
    if q == 0 {
        return Err(CoeffError::Degree);
    }
    let vertex_groups = (0..tree.vertices().len())
        .map(|v| match tree.vertex(v) {
            VertexId::O => Token::Zero,
            VertexId::V(l) => match line_case(tree, v) {
                LineCase::Case1 => Token::HqQuadUnitsModUnits(l.clone()),
                LineCase::Case2 { .. } => Token::HqAdditive,
                LineCase::Case3 { .. } => Token::HqUnits,
            },
            VertexId::C(..) => Token::HqUnits,
            VertexId::E(_) => Token::HqPGL2k,
        })
        .collect();
    let mut edge_groups = Vec::new();
    let mut maps = Vec::new();
    for &(tail, head) in tree.edges() {
        let (token, toward_tail, toward_head) = match (tree.vertex(tail), tree.vertex(head)) {
            (VertexId::O, _) => (Token::Zero, MapTag::ZeroMap, MapTag::ZeroMap),
            (VertexId::V(_), _) => match line_case(tree, tail) {
                LineCase::Case2 { .. } => (Token::HqAdditive, MapTag::Iso, MapTag::ZeroMap),
                _ => (Token::HqUnits, MapTag::Iso, MapTag::Iso),
            },
            (_, VertexId::E(_)) => (Token::HqUnits, MapTag::Iso, MapTag::Unconstrained),
            _ => (Token::HqUnits, MapTag::Iso, MapTag::Iso),
        };
        edge_groups.push(token);
        maps.push(Incidence {
            toward_tail,
            toward_head,
        });
    }
    Ok(CoefficientSystem {
        tree: tree.clone(),
        vertex_groups,
        edge_groups,
        maps,
    })
}

/// The constant system `Z` with identity maps: `H_0` of every stabilizer.
pub fn degree_zero_system(tree: &DomainTree) -> SymbolicSystem {
    CoefficientSystem {
        tree: tree.clone(),
        vertex_groups: vec![Token::Z0; tree.vertices().len()],
        edge_groups: vec![Token::Z0; tree.edges().len()],
        maps: vec![
            Incidence {
                toward_tail: MapTag::Iso,
                toward_head: MapTag::Iso,
            };
            tree.edges().len()
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Battery {
    Primary,
    Permuted,
}

impl Battery {
    pub const ALL: [Battery; 2] = [Battery::Primary, Battery::Permuted];

    pub fn name(self) -> &'static str {
        match self {
            Battery::Primary => "primary",
            Battery::Permuted => "permuted",
        }
    }
}

/// How an `Unconstrained` map is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resolution {
    ZeroMap,
    Iso,
}

/// Concrete groups for the symbolic tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instantiation {
    pub pgl2: FgAbGroup,
    pub units: FgAbGroup,
    pub quad: FgAbGroup,
    pub additive: FgAbGroup,
    pub unconstrained: Resolution,
}

impl Instantiation {
    /// Rejects assignments where two tokens get isomorphic groups.
    pub fn new(
        pgl2: FgAbGroup,
        units: FgAbGroup,
        quad: FgAbGroup,
        additive: FgAbGroup,
        unconstrained: Resolution,
    ) -> Result<Self, CoeffError> {
        let named = [
            ("HqPGL2k", &pgl2),
            ("HqUnits", &units),
            ("HqQuadUnitsModUnits", &quad),
            ("HqAdditive", &additive),
        ];
        for (i, (a, ga)) in named.iter().enumerate() {
            if ga.is_trivial() {
                return Err(CoeffError::Undetectable(a.to_string(), "Zero".into()));
            }
            for (b, gb) in &named[i + 1..] {
                if ga.iso_eq(gb) {
                    return Err(CoeffError::Undetectable(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(Instantiation {
            pgl2,
            units,
            quad,
            additive,
            unconstrained,
        })
    }

    pub fn battery(b: Battery, unconstrained: Resolution) -> Self {
        let z_3 = FgAbGroup::free(1).direct_sum(&FgAbGroup::cyclic(3));
        let (pgl2, units, quad, additive) = match b {
            Battery::Primary => (z_3, FgAbGroup::cyclic(5), FgAbGroup::cyclic(7), FgAbGroup::cyclic(11)),
            Battery::Permuted => (FgAbGroup::cyclic(5), z_3, FgAbGroup::cyclic(11), FgAbGroup::cyclic(7)),
        };
        Instantiation::new(pgl2, units, quad, additive, unconstrained).expect("battery is detectable")
    }

    pub fn group(&self, t: &Token) -> FgAbGroup {
        match t {
            Token::HqPGL2k => self.pgl2.clone(),
            Token::HqUnits => self.units.clone(),
            Token::HqQuadUnitsModUnits(_) => self.quad.clone(),
            Token::HqAdditive => self.additive.clone(),
            Token::Zero => FgAbGroup::trivial(),
            Token::Z0 => FgAbGroup::free(1),
        }
    }
}

/// Generator orders of a canonical presentation, `0` for free generators.
fn canonical_orders(g: &FgAbGroup) -> Vec<Int> {
    let mut v = vec![Int::zero(); g.rank()];
    v.extend(g.torsion().iter().cloned());
    v
}

/// The generator-wise map between canonical presentations: generator `i`
/// goes to the least multiple of generator `i` that is well defined. This
/// is the identity between equal groups.
pub fn canonical_map(source: &FgAbGroup, target: &FgAbGroup) -> AbHom {
    let a = canonical_orders(source);
    let b = canonical_orders(target);
    let mut m = IntMatrix::zeros(b.len(), a.len());
    for i in 0..a.len().min(b.len()) {
        m[(i, i)] = if b[i].is_zero() {
            if a[i].is_zero() {
                Int::from(1)
            } else {
                Int::zero()
            }
        } else if a[i].is_zero() {
            Int::from(1)
        } else {
            &b[i] / a[i].gcd(&b[i])
        };
    }
    AbHom::new(
        PresentedGroup::from_canonical(source),
        PresentedGroup::from_canonical(target),
        m,
    )
    .expect("generator-wise map is well defined")
}

fn resolve(tag: MapTag, source: &FgAbGroup, target: &FgAbGroup, inst: &Instantiation) -> AbHom {
    let zero = || {
        AbHom::zero(
            &PresentedGroup::from_canonical(source),
            &PresentedGroup::from_canonical(target),
        )
    };
    match tag {
        MapTag::Iso => canonical_map(source, target),
        MapTag::ZeroMap => zero(),
        MapTag::Unconstrained => match inst.unconstrained {
            Resolution::ZeroMap => zero(),
            Resolution::Iso => canonical_map(source, target),
        },
    }
}

/// Degree 0 is the sum over vertices, degree 1 the sum over edges, and an
/// edge `u -> w` has boundary `(map toward w) - (map toward u)`.
fn assemble_page(
    tree: &DomainTree,
    vertex_groups: Vec<PresentedGroup>,
    edge_groups: Vec<PresentedGroup>,
    maps: Vec<Incidence<&IntMatrix>>,
) -> ChainComplexFg {
    let offsets = |gs: &[PresentedGroup]| {
        let mut acc = vec![0];
        for g in gs {
            acc.push(acc.last().unwrap() + g.gens());
        }
        acc
    };
    let vo = offsets(&vertex_groups);
    let eo = offsets(&edge_groups);
    let mut d = IntMatrix::zeros(*vo.last().unwrap(), *eo.last().unwrap());
    for (e, &(tail, head)) in tree.edges().iter().enumerate() {
        let inc = &maps[e];
        for j in 0..edge_groups[e].gens() {
            for i in 0..vertex_groups[head].gens() {
                d[(vo[head] + i, eo[e] + j)] += &inc.toward_head[(i, j)];
            }
            for i in 0..vertex_groups[tail].gens() {
                d[(vo[tail] + i, eo[e] + j)] -= &inc.toward_tail[(i, j)];
            }
        }
    }
    let c0 = PresentedGroup::direct_sum(&vertex_groups.iter().collect::<Vec<_>>());
    let c1 = PresentedGroup::direct_sum(&edge_groups.iter().collect::<Vec<_>>());
    let boundary = AbHom::from_checked_blocks(c1.clone(), c0.clone(), d);
    ChainComplexFg::from_homs(vec![c0, c1], vec![boundary]).expect("two-term complex")
}

/// The E1 row of a tagged system under an instantiation.
pub fn e1_page(sys: &SymbolicSystem, inst: &Instantiation) -> ChainComplexFg {
    let vg: Vec<FgAbGroup> = sys.vertex_groups.iter().map(|t| inst.group(t)).collect();
    let eg: Vec<FgAbGroup> = sys.edge_groups.iter().map(|t| inst.group(t)).collect();
    let homs: Vec<Incidence<AbHom>> = sys
        .tree
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(tail, head))| Incidence {
            toward_tail: resolve(sys.maps[e].toward_tail, &eg[e], &vg[tail], inst),
            toward_head: resolve(sys.maps[e].toward_head, &eg[e], &vg[head], inst),
        })
        .collect();
    assemble_page(
        &sys.tree,
        vg.iter().map(PresentedGroup::from_canonical).collect(),
        eg.iter().map(PresentedGroup::from_canonical).collect(),
        homs.iter()
            .map(|h| Incidence {
                toward_tail: h.toward_tail.matrix(),
                toward_head: h.toward_head.matrix(),
            })
            .collect(),
    )
}

/// The E1 row of a concrete system.
pub fn concrete_e1_page(sys: &ConcreteSystem) -> ChainComplexFg {
    assemble_page(
        &sys.tree,
        sys.vertex_groups.clone(),
        sys.edge_groups.clone(),
        sys.maps
            .iter()
            .map(|h| Incidence {
                toward_tail: h.toward_tail.matrix(),
                toward_head: h.toward_head.matrix(),
            })
            .collect(),
    )
}

/// `H_0` and `H_1` of a two-column page.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageHomology {
    pub h0: FgAbGroup,
    pub h1: FgAbGroup,
}

/// Relation columns with a single nonzero entry on distinct rows, as
/// `(row, value)` per column.
fn diagonal_relations(g: &PresentedGroup) -> Option<Vec<(usize, Int)>> {
    let r = g.relations();
    let mut used = vec![false; g.gens()];
    let mut out = Vec::with_capacity(r.cols());
    for j in 0..r.cols() {
        let nz: Vec<usize> = (0..r.rows()).filter(|&i| !r[(i, j)].is_zero()).collect();
        match nz.as_slice() {
            [i] if !used[*i] => {
                used[*i] = true;
                out.push((*i, r[(*i, j)].clone()));
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Homology of a two-column page through a free resolution of its terms
/// and sparse unit elimination. Pages whose degree-0 relations are not
/// diagonal go through the dense route instead.
pub fn page_homology(page: &ChainComplexFg) -> PageHomology {
    let c0 = page.group(0);
    let c1 = page.group(1);
    let Some(r0) = diagonal_relations(c0) else {
        return PageHomology {
            h0: page.homology_at(0),
            h1: page.homology_at(1),
        };
    };
    let d = page.boundary(1).matrix();
    let (g0, g1) = (c0.gens(), c1.gens());
    // Free complex Z^{g0} <- Z^{g1 + r0} <- Z^{r1} with
    // d1 = [d | R0] and d2 = [R1; -Y], where R0 Y = d R1.
    let mut d1_cols: Vec<Vec<(usize, Int)>> = (0..g1)
        .map(|j| {
            (0..g0)
                .filter(|&i| !d[(i, j)].is_zero())
                .map(|i| (i, d[(i, j)].clone()))
                .collect()
        })
        .collect();
    d1_cols.extend(r0.iter().map(|(i, v)| vec![(*i, v.clone())]));
    let dr1 = d.mul(c1.relations());
    let row_to_rel: std::collections::HashMap<usize, usize> =
        r0.iter().enumerate().map(|(k, (i, _))| (*i, k)).collect();
    let r1 = c1.relations();
    let d2_cols: Vec<Vec<(usize, Int)>> = (0..r1.cols())
        .map(|k| {
            let mut col: Vec<(usize, Int)> = (0..g1)
                .filter(|&j| !r1[(j, k)].is_zero())
                .map(|j| (j, r1[(j, k)].clone()))
                .collect();
            for i in 0..g0 {
                let x = &dr1[(i, k)];
                if x.is_zero() {
                    continue;
                }
                let rel = row_to_rel[&i];
                let (q, rem) = x.div_rem(&r0[rel].1);
                debug_assert!(rem.is_zero(), "boundary is not well defined");
                col.push((g1 + rel, -q));
            }
            col
        })
        .collect();
    let free = FreeChainComplex::new(vec![
        SparseMatrix::new(g0, d1_cols),
        SparseMatrix::new(g1 + r0.len(), d2_cols),
    ])
    .expect("resolution of a well-defined boundary");
    PageHomology {
        h0: free.homology_at(0),
        h1: free.homology_at(1),
    }
}
