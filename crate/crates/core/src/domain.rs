//! The fundamental-domain tree for PGL2 over an affine elliptic coordinate
//! ring, truncated at a finite cusp depth.
//!
//! The tree has a root `o`, one vertex `v(l)` per line, and for each line a
//! subtree determined by its case: nothing more for Case 1, a cusp
//! `c(p,1..N)` plus an extra vertex `e(p)` for Case 2, and two cusps for
//! Case 3.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::{ClassificationSummary, CurvePoint, Line, LineCase, LineClass};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VertexId {
    O,
    V(Line),
    C(CurvePoint, usize),
    E(CurvePoint),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::O => write!(f, "o"),
            VertexId::V(l) => write!(f, "v({l})"),
            VertexId::C(p, n) => write!(f, "c({p},{n})"),
            VertexId::E(p) => write!(f, "e({p})"),
        }
    }
}

/// Where `e(p)` joins its cusp.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attachment {
    #[default]
    First,
    Second,
}

impl Attachment {
    pub fn depth(self) -> usize {
        match self {
            Attachment::First => 1,
            Attachment::Second => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("truncation depth must be at least {0}")]
    Depth(usize),
    #[error("no line {0} in the tree")]
    UnknownLine(String),
}

/// A tree with vertices in construction order and edges `(tail, head)`
/// oriented away from `o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainTree {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    edges: Vec<(usize, usize)>,
    depth: usize,
    attachment: Attachment,
    lines: Vec<LineClass>,
}

pub fn build_domain(summary: &ClassificationSummary, depth: usize) -> Result<DomainTree, DomainError> {
    build_domain_with(summary, depth, Attachment::First)
}

pub fn build_domain_with(
    summary: &ClassificationSummary,
    depth: usize,
    attachment: Attachment,
) -> Result<DomainTree, DomainError> {
    if depth < attachment.depth() {
        return Err(DomainError::Depth(attachment.depth()));
    }
    let mut t = DomainTree {
        vertices: Vec::new(),
        index: HashMap::new(),
        edges: Vec::new(),
        depth,
        attachment,
        lines: summary.lines.clone(),
    };
    let o = t.add(VertexId::O);
    for lc in &summary.lines {
        let v = t.add(VertexId::V(lc.line.clone()));
        t.edges.push((o, v));
        t.add_line_subtree(v, lc);
    }
    Ok(t)
}

impl DomainTree {
    fn add(&mut self, id: VertexId) -> usize {
        let i = self.vertices.len();
        self.index.insert(id.clone(), i);
        self.vertices.push(id);
        i
    }

    fn add_cusp(&mut self, v: usize, p: &CurvePoint) -> Vec<usize> {
        let mut prev = v;
        let mut chain = Vec::with_capacity(self.depth);
        for n in 1..=self.depth {
            let c = self.add(VertexId::C(p.clone(), n));
            self.edges.push((prev, c));
            chain.push(c);
            prev = c;
        }
        chain
    }

    fn add_line_subtree(&mut self, v: usize, lc: &LineClass) {
        match &lc.case {
            LineCase::Case1 => {}
            LineCase::Case2 { point } => {
                let chain = self.add_cusp(v, point);
                let e = self.add(VertexId::E(point.clone()));
                self.edges.push((chain[self.attachment.depth() - 1], e));
            }
            LineCase::Case3 { p, q } => {
                self.add_cusp(v, p);
                self.add_cusp(v, q);
            }
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    pub fn index_of(&self, id: &VertexId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn attachment(&self) -> Attachment {
        self.attachment
    }

    pub fn lines(&self) -> &[LineClass] {
        &self.lines
    }

    pub fn has_root(&self) -> bool {
        self.vertices.first() == Some(&VertexId::O)
    }

    /// The line class owning a vertex, `None` for `o`.
    pub fn line_of(&self, i: usize) -> Option<&LineClass> {
        let point_matches = |p: &CurvePoint, lc: &LineClass| match &lc.case {
            LineCase::Case1 => false,
            LineCase::Case2 { point } => point == p,
            LineCase::Case3 { p: a, q: b } => a == p || b == p,
        };
        match &self.vertices[i] {
            VertexId::O => None,
            VertexId::V(l) => self.lines.iter().find(|lc| &lc.line == l),
            VertexId::C(p, _) | VertexId::E(p) => self.lines.iter().find(|lc| point_matches(p, lc)),
        }
    }

    /// Number of maximal `c`-chains.
    pub fn cusp_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v, VertexId::C(_, 1)))
            .count()
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// The component of the tree minus `o` containing `v(l)`.
    pub fn subtree(&self, line: &Line) -> Result<DomainTree, DomainError> {
        let lc = self
            .lines
            .iter()
            .find(|lc| &lc.line == line)
            .ok_or_else(|| DomainError::UnknownLine(line.to_string()))?;
        let mut t = DomainTree {
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            depth: self.depth,
            attachment: self.attachment,
            lines: vec![lc.clone()],
        };
        let v = t.add(VertexId::V(line.clone()));
        t.add_line_subtree(v, lc);
        Ok(t)
    }

    /// The same tree with every cusp cut at depth `n`.
    pub fn truncate(&self, n: usize) -> Result<DomainTree, DomainError> {
        if n < self.attachment.depth() {
            return Err(DomainError::Depth(self.attachment.depth()));
        }
        let keep: Vec<bool> = self
            .vertices
            .iter()
            .map(|v| !matches!(v, VertexId::C(_, m) if *m > n))
            .collect();
        let mut t = DomainTree {
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            depth: n.min(self.depth),
            attachment: self.attachment,
            lines: self.lines.clone(),
        };
        let mut map = vec![usize::MAX; self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            if keep[i] {
                map[i] = t.add(v.clone());
            }
        }
        t.edges = self
            .edges
            .iter()
            .filter(|(a, b)| keep[*a] && keep[*b])
            .map(|(a, b)| (map[*a], map[*b]))
            .collect();
        Ok(t)
    }

    /// `vertex <id> <tag>` and `edge <id> <id>` lines in construction order.
    pub fn graph_dump(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("vertex {i} {v}\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("edge {a} {b}\n"));
        }
        out
    }
}
