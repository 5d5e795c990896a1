//! Fair detachments by repeated single-vertex splitting.
//!
//! Each step picks a vertex `α` with `g(α) ≥ 2`, builds two laminar
//! families over the hinges at `α`, and moves a fair subset `Z` of those
//! hinges onto a fresh vertex. The first family fixes the share of the
//! whole hinge set, of each color class, and of each single edge; the
//! second fixes the share of every group of edges that meet the rest of
//! the hypergraph in the same way. After `Σ (g(v) − 1)` steps every
//! subvertex has `g = 1` and the result is a simple `g`-detachment whose
//! degrees and multiplicities are fair shares of the original ones.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audit::{audit_cumulative, audit_step, StepAudit};
use crate::error::{Error, Result};
use crate::hypergraph::{AmalgamationMap, HingeId, Hypergraph, NumberFunction, VertexId, VertexMultiset};
use crate::laminar::{fair_split, LaminarFamily};

/// A partially detached hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetachmentState {
    pub graph: Hypergraph,
    /// Remaining number function on the current vertices.
    pub g: NumberFunction,
    /// Maps each current vertex to its vertex in the original hypergraph.
    pub ancestry: AmalgamationMap,
    pub step: usize,
}

impl DetachmentState {
    /// Step 0. Fails if `g` is missing a vertex or is not simple.
    pub fn new(graph: Hypergraph, g: NumberFunction) -> Result<Self> {
        for v in graph.vertices() {
            g.get(v).ok_or(Error::MissingNumber(v))?;
        }
        if let Some((vertex, edge, hinges)) = graph.simplicity_violation(&g)? {
            let g = g.get(vertex).unwrap_or(0);
            return Err(Error::NotSimple { vertex, edge, hinges, g });
        }
        let g = NumberFunction::new(graph.vertices().map(|v| (v, g.get(v).unwrap())).collect())?;
        Ok(DetachmentState {
            ancestry: AmalgamationMap::identity(graph.vertices()),
            graph,
            g,
            step: 0,
        })
    }

    /// Splits still to perform.
    pub fn remaining(&self) -> u64 {
        self.g.excess()
    }

    pub fn is_complete(&self) -> bool {
        self.remaining() == 0
    }

    /// Vertices that still need splitting, in id order.
    pub fn splittable(&self) -> Vec<VertexId> {
        self.g.iter().filter(|&(_, g)| g >= 2).map(|(v, _)| v).collect()
    }
}

/// The two families handed to the fair split at `α`. Hinge `hinges[i]` is
/// ground element `i`.
#[derive(Clone, Debug)]
pub struct SplitFamilies {
    pub hinges: Vec<HingeId>,
    pub a: LaminarFamily,
    pub b: LaminarFamily,
}

impl SplitFamilies {
    pub fn ground(&self) -> BTreeSet<usize> {
        (0..self.hinges.len()).collect()
    }
}

/// Builds the split families at `alpha`. Empty sets are omitted.
///
/// `a` holds `H(α)`, `H_{F(j)}(α)` per color `j`, and `H(α,e)` per edge at
/// `α`. `b` holds `H(α^t,U)` for every realized `(t,U)` and the same sets
/// restricted to each color class.
pub fn build_split_families(graph: &Hypergraph, alpha: VertexId) -> Result<SplitFamilies> {
    let hinges: Vec<HingeId> = graph.hinge_set(alpha, None)?.into_iter().collect();
    let index: BTreeMap<HingeId, usize> = hinges.iter().enumerate().map(|(i, &h)| (h, i)).collect();

    let k = graph.class_count();
    let mut per_color: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k as usize];
    let mut per_edge: Vec<BTreeSet<usize>> = Vec::new();
    let mut by_pattern: BTreeMap<(u32, VertexMultiset), BTreeSet<usize>> = BTreeMap::new();
    let mut by_colored_pattern: BTreeMap<(u32, VertexMultiset, u32), BTreeSet<usize>> = BTreeMap::new();

    for (id, edge) in graph.edges() {
        let at_alpha: BTreeSet<usize> = edge
            .hinges()
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == alpha)
            .map(|(i, _)| index[&HingeId::new(id, i as u32)])
            .collect();
        if at_alpha.is_empty() {
            continue;
        }
        let color = graph.class_of(edge);
        let t = at_alpha.len() as u32;
        let rest = edge.signature().without(alpha);
        per_color[color as usize - 1].extend(at_alpha.iter().copied());
        by_pattern.entry((t, rest.clone())).or_default().extend(at_alpha.iter().copied());
        by_colored_pattern.entry((t, rest, color)).or_default().extend(at_alpha.iter().copied());
        per_edge.push(at_alpha);
    }

    let mut a = LaminarFamily::new();
    if !hinges.is_empty() {
        a.push((0..hinges.len()).collect());
    }
    for s in per_color.into_iter().filter(|s| !s.is_empty()) {
        a.push(s);
    }
    for s in per_edge {
        a.push(s);
    }
    let mut b = LaminarFamily::new();
    for s in by_pattern.into_values().chain(by_colored_pattern.into_values()) {
        b.push(s);
    }
    Ok(SplitFamilies { hinges, a, b })
}

/// Splits a new vertex off `alpha`, taking a fair share of its hinges.
pub fn detach_step(state: &DetachmentState, alpha: VertexId) -> Result<DetachmentState> {
    let g_alpha = state.g.get(alpha).ok_or(Error::UnknownVertex(alpha))?;
    if g_alpha < 2 {
        return Err(Error::NothingToSplit { vertex: alpha, g: g_alpha });
    }
    let families = build_split_families(&state.graph, alpha)?;
    let cert = fair_split(&families.ground(), &families.a, &families.b, g_alpha as usize)?;

    let mut next = state.clone();
    let fresh = next.graph.fresh_vertex();
    next.graph.insert_vertex(fresh);
    for &i in &cert.subset {
        next.graph.reseat(families.hinges[i], fresh);
    }
    next.g.set(alpha, g_alpha - 1);
    next.g.set(fresh, 1);
    let origin = state.ancestry.image(alpha).expect("ancestry is total");
    next.ancestry.insert(fresh, origin);
    next.step += 1;
    Ok(next)
}

/// Order in which vertices are chosen for splitting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AlphaOrder {
    /// Smallest id with `g ≥ 2`; a vertex is split to completion before
    /// the next one is touched.
    #[default]
    SmallestFirst,
    /// Uniformly random among vertices with `g ≥ 2`, from a seeded stream.
    Seeded(u64),
}

#[derive(Clone, Debug, Default)]
pub struct Detacher {
    pub order: AlphaOrder,
    /// Record a step audit (B/C and D/E conditions) after every split.
    pub audit: bool,
}

#[derive(Clone, Debug)]
pub struct Detachment {
    pub graph: Hypergraph,
    pub psi: AmalgamationMap,
    pub audits: Vec<StepAudit>,
}

impl Detachment {
    pub fn audits_pass(&self) -> bool {
        self.audits.iter().all(StepAudit::passed)
    }
}

impl Detacher {
    pub fn new(order: AlphaOrder, audit: bool) -> Self {
        Detacher { order, audit }
    }

    pub fn run(&self, graph: &Hypergraph, g: &NumberFunction) -> Result<Detachment> {
        let mut state = DetachmentState::new(graph.clone(), g.clone())?;
        let mut rng = match self.order {
            AlphaOrder::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            AlphaOrder::SmallestFirst => None,
        };
        let mut audits = Vec::new();
        while !state.is_complete() {
            let candidates = state.splittable();
            let alpha = match rng.as_mut() {
                Some(rng) => candidates[rng.gen_range(0..candidates.len())],
                None => candidates[0],
            };
            let next = detach_step(&state, alpha)?;
            if self.audit {
                let mut audit = audit_step(&state, &next, alpha);
                audit.checks.extend(audit_cumulative(graph, &next).checks);
                audits.push(audit);
            }
            state = next;
        }
        Ok(Detachment {
            graph: state.graph,
            psi: state.ancestry,
            audits,
        })
    }
}

/// Simple `g`-detachment of `graph` with its amalgamation map, using the
/// default vertex order.
pub fn detach(graph: &Hypergraph, g: &NumberFunction) -> Result<(Hypergraph, AmalgamationMap)> {
    let out = Detacher::default().run(graph, g)?;
    Ok((out.graph, out.psi))
}
