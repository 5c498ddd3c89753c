//! Concrete coefficient systems over a finite field: every simplex gets the
//! bar homology of its stabilizer modulo scalars, every incidence the map
//! induced by the explicit inclusion.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CoeffError, CoefficientSystem, ConcreteSystem, Incidence};
use crate::abgrp::{AbHom, FgAbGroup};
use crate::curve::LineCase;
use crate::domain::{DomainTree, VertexId};
use crate::field::FieldSpec;
use crate::grouph::{
    additive_group, borel_inclusion, group_homology, induced_map, pad_inclusion, pgl2,
    quadratic_units_mod_units, triangular_group, unit_group, Ceilings, FiniteGroup, GroupError,
    GroupHom, GroupHomology, Quotient,
};

/// Stabilizer types, modulo scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kind {
    Trivial,
    Additive,
    Units,
    Quad,
    Pgl2,
    Torus,
    /// `k^n x| k^x`, the cusp stabilizer at depth `n`.
    Tri(usize),
}

impl Kind {
    fn simplex(self) -> String {
        match self {
            Kind::Trivial => "o".into(),
            Kind::Additive => "v(l) on a case 2 line".into(),
            Kind::Units => "v(l) on a case 3 line".into(),
            Kind::Quad => "v(l) on a case 1 line".into(),
            Kind::Pgl2 => "e(p)".into(),
            Kind::Torus => "the diagonal torus".into(),
            Kind::Tri(n) => format!("c(p,{n})"),
        }
    }
}

/// Inclusions between stabilizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Arrow {
    Identity(Kind),
    FromTrivial(Kind),
    /// `t -> [1 t; 0 1]`.
    AdditiveToTri,
    /// `u -> [u 0; 0 1]`.
    UnitsToTriFirst,
    /// `u -> [1 0; 0 u]`.
    UnitsToTriSecond,
    /// Depth `n` into depth `n + 1`.
    Pad(usize),
    /// Depth-one Borel into `PGL2`.
    Borel,
    TorusToTri(usize),
}

impl Arrow {
    fn ends(self) -> (Kind, Kind) {
        match self {
            Arrow::Identity(k) => (k, k),
            Arrow::FromTrivial(k) => (Kind::Trivial, k),
            Arrow::AdditiveToTri => (Kind::Additive, Kind::Tri(1)),
            Arrow::UnitsToTriFirst | Arrow::UnitsToTriSecond => (Kind::Units, Kind::Tri(1)),
            Arrow::Pad(n) => (Kind::Tri(n), Kind::Tri(n + 1)),
            Arrow::Borel => (Kind::Tri(1), Kind::Pgl2),
            Arrow::TorusToTri(n) => (Kind::Torus, Kind::Tri(n)),
        }
    }
}

fn vertex_kind(tree: &DomainTree, v: usize) -> Kind {
    match tree.vertex(v) {
        VertexId::O => Kind::Trivial,
        VertexId::V(_) => match &tree.line_of(v).expect("line vertex").case {
            LineCase::Case1 => Kind::Quad,
            LineCase::Case2 { .. } => Kind::Additive,
            LineCase::Case3 { .. } => Kind::Units,
        },
        VertexId::C(_, n) => Kind::Tri(*n),
        VertexId::E(_) => Kind::Pgl2,
    }
}

/// Edge stabilizer and the inclusions toward tail and head.
fn edge_arrows(tree: &DomainTree, e: usize) -> (Kind, Arrow, Arrow) {
    let (tail, head) = tree.edges()[e];
    let tk = vertex_kind(tree, tail);
    let hk = vertex_kind(tree, head);
    match (tree.vertex(tail), tree.vertex(head)) {
        (VertexId::O, _) => (Kind::Trivial, Arrow::Identity(Kind::Trivial), Arrow::FromTrivial(hk)),
        (VertexId::V(_), VertexId::C(p, _)) => match &tree.line_of(tail).expect("line vertex").case {
            LineCase::Case2 { .. } => (Kind::Additive, Arrow::Identity(tk), Arrow::AdditiveToTri),
            LineCase::Case3 { p: first, .. } => {
                let to_head = if p == first {
                    Arrow::UnitsToTriFirst
                } else {
                    Arrow::UnitsToTriSecond
                };
                (Kind::Units, Arrow::Identity(tk), to_head)
            }
            LineCase::Case1 => unreachable!("case 1 lines have no cusps"),
        },
        (VertexId::C(_, n), VertexId::C(..)) => (tk, Arrow::Identity(tk), Arrow::Pad(*n)),
        (VertexId::C(_, n), VertexId::E(_)) => {
            let toward_c = if *n == 1 { Arrow::Identity(tk) } else { Arrow::Pad(1) };
            (Kind::Tri(1), toward_c, Arrow::Borel)
        }
        (t, h) => unreachable!("no edge {t} -> {h}"),
    }
}

fn tag(kind: Kind) -> impl Fn(GroupError) -> CoeffError {
    move |source| match source {
        GroupError::TooLarge { .. } => CoeffError::TooLarge {
            simplex: kind.simplex(),
            source,
        },
        other => CoeffError::Group(other),
    }
}

/// `f` on cosets, provided it is constant on them.
fn factor(f: &GroupHom, from: &Quotient) -> Result<GroupHom, GroupError> {
    let mut images = vec![usize::MAX; from.group.order()];
    for g in 0..f.source().order() {
        let c = from.projection.apply(g);
        let img = f.apply(g);
        if images[c] == usize::MAX {
            images[c] = img;
        } else if images[c] != img {
            return Err(GroupError::DoesNotDescend);
        }
    }
    GroupHom::new(from.group.clone(), f.target().clone(), images)
}

/// The stabilizer groups and inclusions needed for one tree over one field.
pub struct ConcreteCatalog {
    tree: DomainTree,
    groups: BTreeMap<Kind, Arc<FiniteGroup>>,
    arrows: BTreeMap<Arrow, GroupHom>,
    ceilings: Ceilings,
}

impl ConcreteCatalog {
    pub fn new(field: &FieldSpec, tree: &DomainTree, ceilings: Ceilings) -> Result<Self, CoeffError> {
        let mut wanted: Vec<Arrow> = (0..tree.edges().len())
            .flat_map(|e| {
                let (_, a, b) = edge_arrows(tree, e);
                [a, b]
            })
            .collect();
        let has_cusp = tree.cusp_count() > 0;
        if has_cusp {
            wanted.extend((1..=tree.depth()).map(Arrow::TorusToTri));
        }
        wanted.sort();
        wanted.dedup();
        let mut kinds: Vec<Kind> = (0..tree.vertices().len()).map(|v| vertex_kind(tree, v)).collect();
        kinds.extend(wanted.iter().flat_map(|a| {
            let (s, t) = a.ends();
            [s, t]
        }));
        kinds.sort();
        kinds.dedup();

        let mut triangular = BTreeMap::new();
        let mut groups = BTreeMap::new();
        for &k in &kinds {
            let g = match k {
                Kind::Trivial => Arc::new(FiniteGroup::trivial()),
                Kind::Additive => additive_group(field).map_err(tag(k))?,
                Kind::Units => unit_group(field).map_err(tag(k))?,
                Kind::Quad => quadratic_units_mod_units(field).map_err(tag(k))?.group,
                Kind::Pgl2 => pgl2(field).map_err(tag(k))?,
                Kind::Torus | Kind::Tri(_) => {
                    let n = if let Kind::Tri(n) = k { n } else { 0 };
                    let t = triangular_group(field, n).map_err(tag(k))?;
                    let q = t.modulo_scalars()?;
                    let g = q.group.clone();
                    triangular.insert(n, (t, q));
                    g
                }
            };
            groups.insert(k, g);
        }

        let one = field.encode(&field.one());
        let zero = field.encode(&field.zero());
        let tri_hom = |src: Kind, key: &dyn Fn(u32) -> Vec<u32>| -> Result<GroupHom, GroupError> {
            let s = &groups[&src];
            let (t, q) = &triangular[&1];
            GroupHom::from_fn(s.clone(), q.group.clone(), |x| {
                let i = t.group.index_of(&key(s.key(x)[0])).expect("triangular element");
                q.projection.apply(i)
            })
        };
        let mut arrows = BTreeMap::new();
        for &a in &wanted {
            let (s, t) = a.ends();
            let h = match a {
                Arrow::Identity(k) => GroupHom::identity(&groups[&k]),
                Arrow::FromTrivial(k) => GroupHom::trivial(&groups[&Kind::Trivial], &groups[&k]),
                Arrow::AdditiveToTri => tri_hom(s, &|x| vec![one, one, x])?,
                Arrow::UnitsToTriFirst => tri_hom(s, &|u| vec![u, one, zero])?,
                Arrow::UnitsToTriSecond => tri_hom(s, &|u| vec![one, u, zero])?,
                Arrow::Pad(n) => {
                    let (small, qs) = &triangular[&n];
                    let (large, ql) = &triangular[&(n + 1)];
                    pad_inclusion(&small.group, &large.group)?.descend(qs, ql)?
                }
                Arrow::Borel => {
                    let (b, qb) = &triangular[&1];
                    factor(&borel_inclusion(field, &b.group, &groups[&t], true)?, qb)?
                }
                Arrow::TorusToTri(n) => {
                    let (torus, qt) = &triangular[&0];
                    let (tri, qn) = &triangular[&n];
                    let inc = pad_inclusion(&torus.group, &tri.group)?;
                    debug_assert_eq!(inc.images(), tri.diagonal_inclusion.images());
                    inc.descend(qt, qn)?
                }
            };
            arrows.insert(a, h);
        }
        Ok(ConcreteCatalog {
            tree: tree.clone(),
            groups,
            arrows,
            ceilings,
        })
    }

    pub fn tree(&self) -> &DomainTree {
        &self.tree
    }

    /// All homologies and induced maps in degree `q`.
    pub fn level(&self, q: usize) -> Result<ConcreteLevel, CoeffError> {
        let kinds: Vec<(Kind, Arc<FiniteGroup>)> =
            self.groups.iter().map(|(k, g)| (*k, g.clone())).collect();
        let mut homology = BTreeMap::new();
        for (k, g) in kinds {
            let h = group_homology(&g, q, &self.ceilings).map_err(tag(k))?;
            homology.insert(k, h);
        }
        let mut maps = BTreeMap::new();
        for (a, f) in &self.arrows {
            let (s, t) = a.ends();
            maps.insert(*a, induced_map(f, &homology[&s], &homology[&t])?);
        }
        Ok(ConcreteLevel { q, homology, maps })
    }
}

/// Whether the torus inclusion into the depth-`depth` cusp stabilizer is
/// an isomorphism on `H_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NessusFlag {
    pub q: usize,
    pub depth: usize,
    pub torus: FgAbGroup,
    pub triangular: FgAbGroup,
    pub iso: bool,
}

/// A measured induced map that the decomposition does not pin down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapMeasurement {
    pub q: usize,
    pub name: String,
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: Vec<Vec<String>>,
    pub zero: bool,
    pub iso: bool,
    pub surjective: bool,
}

pub struct ConcreteLevel {
    q: usize,
    homology: BTreeMap<Kind, GroupHomology>,
    maps: BTreeMap<Arrow, AbHom>,
}

impl ConcreteLevel {
    pub fn q(&self) -> usize {
        self.q
    }

    fn group(&self, k: Kind) -> Option<FgAbGroup> {
        self.homology.get(&k).map(|h| h.canonical().clone())
    }

    pub fn pgl2(&self) -> Option<FgAbGroup> {
        self.group(Kind::Pgl2)
    }

    pub fn units(&self) -> Option<FgAbGroup> {
        self.group(Kind::Units).or_else(|| self.group(Kind::Torus))
    }

    pub fn quad(&self) -> Option<FgAbGroup> {
        self.group(Kind::Quad)
    }

    pub fn nessus_flags(&self) -> Vec<NessusFlag> {
        self.maps
            .iter()
            .filter_map(|(a, m)| match a {
                Arrow::TorusToTri(n) => Some(NessusFlag {
                    q: self.q,
                    depth: *n,
                    torus: m.source().canonical(),
                    triangular: m.target().canonical(),
                    iso: m.is_iso(),
                }),
                _ => None,
            })
            .collect()
    }

    pub fn measurements(&self) -> Vec<MapMeasurement> {
        let named = [
            (Arrow::Borel, "borel->pgl2"),
            (Arrow::AdditiveToTri, "additive->c(p,1)"),
        ];
        named
            .iter()
            .filter_map(|(a, name)| {
                let m = self.maps.get(a)?;
                let mx = m.matrix();
                Some(MapMeasurement {
                    q: self.q,
                    name: name.to_string(),
                    source: m.source().canonical(),
                    target: m.target().canonical(),
                    matrix: (0..mx.rows())
                        .map(|i| mx.row(i).iter().map(|x| x.to_string()).collect())
                        .collect(),
                    zero: m.is_zero(),
                    iso: m.is_iso(),
                    surjective: m.is_surjective(),
                })
            })
            .collect()
    }
}

/// The concrete system of `tree` in degree `q` from a prepared level.
pub fn concrete_system(level: &ConcreteLevel, tree: &DomainTree) -> ConcreteSystem {
    let pres = |k: Kind| level.homology[&k].presentation().clone();
    let vertex_groups = (0..tree.vertices().len()).map(|v| pres(vertex_kind(tree, v))).collect();
    let mut edge_groups = Vec::new();
    let mut maps = Vec::new();
    for e in 0..tree.edges().len() {
        let (k, a, b) = edge_arrows(tree, e);
        edge_groups.push(pres(k));
        maps.push(Incidence {
            toward_tail: level.maps[&a].clone(),
            toward_head: level.maps[&b].clone(),
        });
    }
    CoefficientSystem {
        tree: tree.clone(),
        vertex_groups,
        edge_groups,
        maps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Attachment;
    use crate::coeffsys::{concrete_e1_page, page_homology};
    use crate::curve::WeierstrassCurve;
    use crate::domain::{build_domain, build_domain_with};
    use crate::field::make_field;

    fn setup(p: u32, a: [i64; 5], depth: usize, att: Attachment) -> (Arc<FieldSpec>, DomainTree) {
        let f = Arc::new(make_field(p, 1).unwrap());
        let c = WeierstrassCurve::from_ints(f.clone(), a).unwrap();
        let t = build_domain_with(&c.classify_all(), depth, att).unwrap();
        (f, t)
    }

    #[test]
    fn f2_degree_one_values() {
        let (f, t) = setup(2, [0, 0, 1, 0, 0], 2, Attachment::First);
        let cat = ConcreteCatalog::new(&f, &t, Ceilings::default()).unwrap();
        let lvl = cat.level(1).unwrap();
        assert_eq!(lvl.pgl2(), Some(FgAbGroup::cyclic(2)));
        if let Some(q) = lvl.quad() {
            assert_eq!(q, FgAbGroup::cyclic(3));
        }
        let sys = concrete_system(&lvl, &t);
        assert!(sys.vertex_group(0).canonical().is_trivial());
        let page = concrete_e1_page(&sys);
        let h = page_homology(&page);
        assert_eq!(h.h0, page.homology_at(0));
        assert_eq!(h.h1, page.homology_at(1));
    }

    #[test]
    fn degree_zero_is_constant() {
        let (f, t) = setup(3, [0, 0, 0, -1, 0], 2, Attachment::Second);
        let cat = ConcreteCatalog::new(&f, &t, Ceilings::default()).unwrap();
        let lvl = cat.level(0).unwrap();
        let h = page_homology(&concrete_e1_page(&concrete_system(&lvl, &t)));
        assert_eq!(h.h0, FgAbGroup::free(1));
        assert!(h.h1.is_trivial());
    }

    #[test]
    fn oversized_stabilizer_names_simplex() {
        let (f, t) = setup(3, [0, 0, 0, -1, 0], 3, Attachment::First);
        let cat = ConcreteCatalog::new(&f, &t, Ceilings::default()).unwrap();
        match cat.level(1) {
            Err(CoeffError::TooLarge { simplex, .. }) => assert_eq!(simplex, "c(p,3)"),
            other => panic!("expected TooLarge, got {:?}", other.map(|l| l.q())),
        }
    }

    #[test]
    fn empty_tree_catalog() {
        let f = make_field(2, 1).unwrap();
        let t = build_domain(&crate::curve::ClassificationSummary::new(vec![]), 1).unwrap();
        let cat = ConcreteCatalog::new(&f, &t, Ceilings::default()).unwrap();
        assert!(cat.level(1).unwrap().nessus_flags().is_empty());
    }
}
