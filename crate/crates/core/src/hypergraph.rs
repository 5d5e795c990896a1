//! Hinge-based hypergraphs.
//!
//! A hypergraph is a set of vertices, a set of edges, and a set of hinges.
//! Every hinge attaches one edge to one vertex. An edge may meet the same
//! vertex through several hinges, so the *size* of an edge (distinct
//! vertices) and its *hinge count* are separate quantities.
//!
//! Hinges are addressed as `(edge, ordinal)`; the hinge map of an edge is
//! the vertex list stored on it. Amalgamation and detachment only rewrite
//! those vertex lists, so edge and hinge ids are stable across both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

/// A hinge, identified by its edge and its position on that edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HingeId {
    pub edge: EdgeId,
    pub ordinal: u32,
}

impl HingeId {
    pub fn new(edge: EdgeId, ordinal: u32) -> Self {
        HingeId { edge, ordinal }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for HingeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h({},{})", self.edge, self.ordinal)
    }
}

/// A finite multiset of vertices in canonical form: sorted by vertex id,
/// one entry per vertex, every multiplicity at least one.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexMultiset {
    entries: Vec<(VertexId, u32)>,
}

impl VertexMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a multiset from `(vertex, multiplicity)` pairs in any order.
    /// Repeated vertices are merged and zero multiplicities dropped.
    pub fn from_counts(pairs: impl IntoIterator<Item = (VertexId, u32)>) -> Self {
        let mut merged: BTreeMap<VertexId, u32> = BTreeMap::new();
        for (v, m) in pairs {
            *merged.entry(v).or_default() += m;
        }
        VertexMultiset {
            entries: merged.into_iter().filter(|&(_, m)| m > 0).collect(),
        }
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Self::from_counts(vertices.into_iter().map(|v| (v, 1)))
    }

    pub fn entries(&self) -> &[(VertexId, u32)] {
        &self.entries
    }

    /// `μ_U(v)`
    pub fn multiplicity(&self, v: VertexId) -> u32 {
        self.entries
            .binary_search_by_key(&v, |&(u, _)| u)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// `|U|`, counting multiplicity.
    pub fn total(&self) -> u32 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn union(&self, other: &VertexMultiset) -> VertexMultiset {
        Self::from_counts(self.entries.iter().chain(other.entries.iter()).copied())
    }

    /// The multiset with every occurrence of `v` removed.
    pub fn without(&self, v: VertexId) -> VertexMultiset {
        VertexMultiset {
            entries: self.entries.iter().copied().filter(|&(u, _)| u != v).collect(),
        }
    }
}

impl fmt::Display for VertexMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if *m == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{m}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Number function `g`: how many subvertices each vertex splits into.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NumberFunction(BTreeMap<VertexId, u32>);

impl NumberFunction {
    pub fn new(values: BTreeMap<VertexId, u32>) -> Result<Self> {
        if let Some((&v, _)) = values.iter().find(|&(_, &g)| g == 0) {
            return Err(Error::ZeroNumber(v));
        }
        Ok(NumberFunction(values))
    }

    pub fn uniform(vertices: impl IntoIterator<Item = VertexId>, value: u32) -> Result<Self> {
        Self::new(vertices.into_iter().map(|v| (v, value)).collect())
    }

    pub fn get(&self, v: VertexId) -> Option<u32> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.0.iter().map(|(&v, &g)| (v, g))
    }

    /// `Σ (g(v) − 1)`: the number of single-vertex splits still to perform.
    pub fn excess(&self) -> u64 {
        self.0.values().map(|&g| (g - 1) as u64).sum()
    }

    pub(crate) fn set(&mut self, v: VertexId, g: u32) {
        debug_assert!(g >= 1);
        self.0.insert(v, g);
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, u32> {
        &self.0
    }
}

/// Amalgamation function `Ψ` from the vertices of a detachment onto the
/// vertices of the amalgamated hypergraph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmalgamationMap(BTreeMap<VertexId, VertexId>);

impl AmalgamationMap {
    pub fn new(map: BTreeMap<VertexId, VertexId>) -> Self {
        AmalgamationMap(map)
    }

    pub fn identity(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        AmalgamationMap(vertices.into_iter().map(|v| (v, v)).collect())
    }

    pub fn image(&self, v: VertexId) -> Option<VertexId> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0.iter().map(|(&a, &b)| (a, b))
    }

    /// `Ψ⁻¹(u)`, sorted.
    pub fn preimage(&self, u: VertexId) -> Vec<VertexId> {
        self.0.iter().filter(|&(_, &t)| t == u).map(|(&s, _)| s).collect()
    }

    /// The induced number function `g(w) = |Ψ⁻¹(w)|`.
    pub fn number_function(&self) -> NumberFunction {
        let mut counts: BTreeMap<VertexId, u32> = BTreeMap::new();
        for &t in self.0.values() {
            *counts.entry(t).or_default() += 1;
        }
        NumberFunction(counts)
    }

    pub(crate) fn insert(&mut self, from: VertexId, to: VertexId) {
        self.0.insert(from, to);
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    color: Option<u32>,
    hinges: Vec<VertexId>,
}

impl Edge {
    pub fn color(&self) -> Option<u32> {
        self.color
    }

    /// `ψ` restricted to this edge's hinges, indexed by hinge ordinal.
    pub fn hinges(&self) -> &[VertexId] {
        &self.hinges
    }

    /// `|φ⁻¹(e)|`
    pub fn hinge_count(&self) -> usize {
        self.hinges.len()
    }

    /// `|e|`: number of distinct incident vertices.
    pub fn size(&self) -> usize {
        self.hinges.iter().collect::<BTreeSet<_>>().len()
    }

    /// The multiset `U` with `e ∈ E(U)`.
    pub fn signature(&self) -> VertexMultiset {
        VertexMultiset::from_vertices(self.hinges.iter().copied())
    }

    /// `|H(v,e)|`
    pub fn hinges_at(&self, v: VertexId) -> usize {
        self.hinges.iter().filter(|&&u| u == v).count()
    }
}

/// A finite hypergraph with first-class hinges and an optional
/// `k`-edge-coloring with colors `1..=k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    colors: Option<u32>,
}

impl Hypergraph {
    /// An empty uncolored hypergraph.
    pub fn new() -> Self {
        Self::default()
    }

    /// An empty hypergraph whose edges will carry colors `1..=k`.
    pub fn colored(k: u32) -> Self {
        Hypergraph {
            colors: Some(k),
            ..Self::default()
        }
    }

    pub fn with_vertices(mut self, vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        for v in vertices {
            self.add_vertex(v)?;
        }
        Ok(self)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<()> {
        if !self.vertices.insert(v) {
            return Err(Error::DuplicateVertex(v));
        }
        Ok(())
    }

    /// Adds edge `id` with one hinge per listed vertex, in order.
    pub fn add_edge(
        &mut self,
        id: EdgeId,
        hinges: impl IntoIterator<Item = VertexId>,
        color: Option<u32>,
    ) -> Result<()> {
        if self.edges.contains_key(&id) {
            return Err(Error::DuplicateEdge(id));
        }
        let hinges: Vec<VertexId> = hinges.into_iter().collect();
        if hinges.is_empty() {
            return Err(Error::EmptyEdge(id));
        }
        if let Some(&v) = hinges.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        match (self.colors, color) {
            (Some(k), Some(c)) if c == 0 || c > k => {
                return Err(Error::ColorOutOfRange { color: c, colors: k })
            }
            (Some(k), None) => return Err(Error::UncoloredEdge { edge: id, colors: k }),
            (None, Some(_)) => return Err(Error::UnexpectedColor { edge: id }),
            _ => {}
        }
        self.edges.insert(id, Edge { color, hinges });
        Ok(())
    }

    pub fn num_colors(&self) -> Option<u32> {
        self.colors
    }

    /// Number of color classes, treating an uncolored hypergraph as a
    /// single class.
    pub fn class_count(&self) -> u32 {
        self.colors.unwrap_or(1)
    }

    /// Color class of an edge, `1` when uncolored.
    pub fn class_of(&self, edge: &Edge) -> u32 {
        edge.color.unwrap_or(1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_hinges(&self) -> usize {
        self.edges.values().map(Edge::hinge_count).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().map(|(&id, e)| (id, e))
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(&id).ok_or(Error::UnknownEdge(id))
    }

    /// All hinges with their vertex `ψ(h)`, in hinge-id order.
    pub fn hinges(&self) -> impl Iterator<Item = (HingeId, VertexId)> + '_ {
        self.edges.iter().flat_map(|(&id, e)| {
            e.hinges
                .iter()
                .enumerate()
                .map(move |(i, &v)| (HingeId::new(id, i as u32), v))
        })
    }

    /// `ψ(h)`
    pub fn psi(&self, h: HingeId) -> Result<VertexId> {
        let e = self.edge(h.edge)?;
        e.hinges
            .get(h.ordinal as usize)
            .copied()
            .ok_or(Error::UnknownEdge(h.edge))
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.vertices.contains(&v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// `d(v) = |ψ⁻¹(v)|`
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.values().map(|e| e.hinges_at(v)).sum())
    }

    /// Degrees of all vertices, including isolated ones.
    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        let mut out: BTreeMap<VertexId, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for e in self.edges.values() {
            for v in &e.hinges {
                *out.entry(*v).or_default() += 1;
            }
        }
        out
    }

    /// `|e|`: distinct vertices, not hinges.
    pub fn edge_size(&self, e: EdgeId) -> Result<usize> {
        Ok(self.edge(e)?.size())
    }

    pub fn hinge_count(&self, e: EdgeId) -> Result<usize> {
        Ok(self.edge(e)?.hinge_count())
    }

    /// `H(v)` when `edge` is `None`, otherwise `H(v,e)`.
    pub fn hinge_set(&self, v: VertexId, edge: Option<EdgeId>) -> Result<BTreeSet<HingeId>> {
        self.check_vertex(v)?;
        if let Some(e) = edge {
            self.edge(e)?;
        }
        Ok(self
            .hinges()
            .filter(|&(h, u)| u == v && edge.is_none_or(|e| h.edge == e))
            .map(|(h, _)| h)
            .collect())
    }

    /// `E(U)`: edges whose hinge distribution over vertices is exactly `U`.
    pub fn edges_joining(&self, u: &VertexMultiset) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, e)| e.hinge_count() == u.total() as usize && e.signature() == *u)
            .map(|(&id, _)| id)
            .collect()
    }

    /// `H(u^r, U)`: hinges at `u` on edges of `E(u^r, U)`.
    pub fn hinges_toward(&self, u: VertexId, r: u32, rest: &VertexMultiset) -> BTreeSet<HingeId> {
        let target = VertexMultiset::from_counts([(u, r)]).union(rest);
        self.edges_joining(&target)
            .into_iter()
            .flat_map(|e| {
                self.edges[&e]
                    .hinges
                    .iter()
                    .enumerate()
                    .filter(move |&(_, &w)| w == u)
                    .map(move |(i, _)| HingeId::new(e, i as u32))
            })
            .collect()
    }

    /// `m(U) = |E(U)|`
    pub fn multiplicity(&self, u: &VertexMultiset) -> usize {
        self.edges_joining(u).len()
    }

    /// `m(U)` for every realized multiset `U`.
    pub fn census(&self) -> BTreeMap<VertexMultiset, usize> {
        let mut out = BTreeMap::new();
        for e in self.edges.values() {
            *out.entry(e.signature()).or_insert(0) += 1;
        }
        out
    }

    /// The spanning sub-hypergraph `G(j)` of color-`j` edges.
    pub fn color_class(&self, j: u32) -> Result<Hypergraph> {
        let k = self.colors.ok_or(Error::MissingColoring)?;
        if j == 0 || j > k {
            return Err(Error::ColorOutOfRange { color: j, colors: k });
        }
        Ok(Hypergraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(_, e)| e.color == Some(j))
                .map(|(&id, e)| (id, e.clone()))
                .collect(),
            colors: self.colors,
        })
    }

    /// The first `(v, e)` with `|H(v,e)| > g(v)`, if any.
    pub fn simplicity_violation(&self, g: &NumberFunction) -> Result<Option<(VertexId, EdgeId, usize)>> {
        for (&id, e) in &self.edges {
            for (v, m) in e.signature().entries() {
                let gv = g.get(*v).ok_or(Error::MissingNumber(*v))?;
                if *m > gv {
                    return Ok(Some((*v, id, *m as usize)));
                }
            }
        }
        Ok(None)
    }

    /// Whether `|H(v,e)| ≤ g(v)` for every vertex and edge.
    pub fn is_simple_function(&self, g: &NumberFunction) -> bool {
        matches!(self.simplicity_violation(g), Ok(None))
    }

    /// No edge meets any vertex through more than one hinge.
    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|e| e.size() == e.hinge_count())
    }

    /// The amalgamation `(W, E, H, Ψ∘ψ, φ)`. The vertex set becomes the
    /// image of `Ψ`; edges, hinges and colors are unchanged.
    pub fn amalgamate(&self, psi: &AmalgamationMap) -> Result<Hypergraph> {
        let mut vertices = BTreeSet::new();
        for &v in &self.vertices {
            vertices.insert(psi.image(v).ok_or(Error::MissingImage(v))?);
        }
        let edges = self
            .edges
            .iter()
            .map(|(&id, e)| {
                let hinges = e.hinges.iter().map(|&v| psi.image(v).expect("checked above")).collect();
                (id, Edge { color: e.color, hinges })
            })
            .collect();
        Ok(Hypergraph {
            vertices,
            edges,
            colors: self.colors,
        })
    }

    pub(crate) fn reseat(&mut self, h: HingeId, to: VertexId) {
        debug_assert!(self.vertices.contains(&to));
        let e = self.edges.get_mut(&h.edge).expect("hinge of a known edge");
        e.hinges[h.ordinal as usize] = to;
    }

    pub(crate) fn insert_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Smallest vertex id not yet in use.
    pub fn fresh_vertex(&self) -> VertexId {
        VertexId(self.vertices.iter().next_back().map_or(0, |v| v.0 + 1))
    }
}
