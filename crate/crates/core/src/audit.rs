//! Runtime checks of the step and cumulative fairness conditions.
//!
//! Step conditions compare `F_{i+1}` with `F_i` around the split vertex
//! `α` and its new sibling `v`:
//!
//! * `B1` `d'(α) ≈ d(α)·g'(α)/g(α)`
//! * `B2` `d'(v) ≈ d(α)/g(α)`
//! * `B3` no edge meets `v` twice
//! * `B4` `m'(α^t,U) ≈ m(α^t,U)·(g(α)−t)/g(α)` for `1 ≤ t ≤ g(α)`
//! * `B5` `m'(α^t,v,U) ≈ (t+1)·m(α^{t+1},U)/g(α)` for `t ≥ 0`
//!
//! Cumulative conditions compare `F_i` with the original `F`:
//!
//! * `D1` `d_i(w)/g_i(w) ≈ d(u)/g(u)` for every `w` over `u`
//! * `D2` `m_i(u₁^{a₁},U₁,…)/∏C(g_i(u_j),a_j) ≈ m(u₁^{m₁},…)/∏C(g(u_j),m_j)`
//!   where `U_j` are sets of split-off vertices over `u_j` and
//!   `m_j = a_j + |U_j|`.
//!
//! `C1`–`C5` and `E1`–`E2` are the same conditions inside each color class.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::arith::{approx_ratio, binomial, fair_bounds};
use crate::detach::DetachmentState;
use crate::hypergraph::{Hypergraph, NumberFunction, VertexId, VertexMultiset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    B1,
    B2,
    B3,
    B4,
    B5,
    C1,
    C2,
    C3,
    C4,
    C5,
    D1,
    D2,
    E1,
    E2,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One evaluated instance: `lhs_num/lhs_den` against `[floor, ceil]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub condition: Condition,
    pub instance: String,
    pub passed: bool,
    pub lhs_num: u64,
    pub lhs_den: u64,
    pub floor: u64,
    pub ceil: u64,
}

impl Check {
    fn fair(condition: Condition, instance: String, lhs: (u64, u64), target: (u64, u64)) -> Check {
        let (floor, ceil) = fair_bounds(target.0, target.1);
        Check {
            condition,
            instance,
            passed: approx_ratio(lhs.0, lhs.1, target.0, target.1),
            lhs_num: lhs.0,
            lhs_den: lhs.1,
            floor,
            ceil,
        }
    }

    fn zero(condition: Condition, instance: String, lhs: u64) -> Check {
        Check {
            condition,
            instance,
            passed: lhs == 0,
            lhs_num: lhs,
            lhs_den: 1,
            floor: 0,
            ceil: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StepAudit {
    pub step: usize,
    pub checks: Vec<Check>,
}

impl StepAudit {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn conditions(&self) -> BTreeSet<Condition> {
        self.checks.iter().map(|c| c.condition).collect()
    }
}

/// A color class, or the whole hypergraph when `color` is `None`.
#[derive(Clone, Copy)]
struct Class {
    color: Option<u32>,
}

impl Class {
    fn all(graph: &Hypergraph) -> Vec<Class> {
        let mut out = vec![Class { color: None }];
        if let Some(k) = graph.num_colors() {
            out.extend((1..=k).map(|j| Class { color: Some(j) }));
        }
        out
    }

    fn contains(&self, graph: &Hypergraph, edge: &crate::hypergraph::Edge) -> bool {
        self.color.is_none_or(|j| graph.class_of(edge) == j)
    }

    fn census(&self, graph: &Hypergraph) -> HashMap<VertexMultiset, u64> {
        let mut out = HashMap::new();
        for (_, e) in graph.edges() {
            if self.contains(graph, e) {
                *out.entry(e.signature()).or_insert(0) += 1;
            }
        }
        out
    }

    fn degrees(&self, graph: &Hypergraph) -> BTreeMap<VertexId, u64> {
        let mut out: BTreeMap<VertexId, u64> = graph.vertices().map(|v| (v, 0)).collect();
        for (_, e) in graph.edges() {
            if self.contains(graph, e) {
                for &v in e.hinges() {
                    *out.entry(v).or_default() += 1;
                }
            }
        }
        out
    }

    fn label(&self) -> String {
        match self.color {
            None => String::new(),
            Some(j) => format!("color {j}: "),
        }
    }
}

fn count(census: &HashMap<VertexMultiset, u64>, key: &VertexMultiset) -> u64 {
    census.get(key).copied().unwrap_or(0)
}

/// Evaluates every step condition for the split of `alpha` from `prev` to
/// `next`. Never fails; problems show up as failing checks.
pub fn audit_step(prev: &DetachmentState, next: &DetachmentState, alpha: VertexId) -> StepAudit {
    let mut checks = Vec::new();
    let fresh: Vec<VertexId> = next.graph.vertices().filter(|&w| !prev.graph.has_vertex(w)).collect();
    let (Some(g), Some(g_next), [fresh]) = (prev.g.get(alpha), next.g.get(alpha), fresh.as_slice()) else {
        checks.push(Check::zero(Condition::B2, format!("split of {alpha} did not add exactly one vertex"), 1));
        return StepAudit { step: next.step, checks };
    };
    let (g, g_next, fresh) = (g as u64, g_next as u64, *fresh);

    for class in Class::all(&prev.graph) {
        let tags = match class.color {
            None => [Condition::B1, Condition::B2, Condition::B3, Condition::B4, Condition::B5],
            Some(_) => [Condition::C1, Condition::C2, Condition::C3, Condition::C4, Condition::C5],
        };
        let label = class.label();
        let before = class.census(&prev.graph);
        let after = class.census(&next.graph);
        let d_before = class.degrees(&prev.graph)[&alpha];
        let d_after = class.degrees(&next.graph);

        checks.push(Check::fair(
            tags[0],
            format!("{label}d({alpha})"),
            (d_after[&alpha], 1),
            (d_before * g_next, g),
        ));
        checks.push(Check::fair(tags[1], format!("{label}d({fresh})"), (d_after[&fresh], 1), (d_before, g)));

        let mut repeated = false;
        for (sig, &m) in &after {
            if sig.multiplicity(fresh) >= 2 {
                repeated = true;
                checks.push(Check::zero(tags[2], format!("{label}m{sig}"), m));
            }
        }
        if !repeated {
            checks.push(Check::zero(tags[2], format!("{label}no edge meets {fresh} twice"), 0));
        }

        let mut kept: BTreeSet<(u32, VertexMultiset)> = BTreeSet::new();
        let mut moved: BTreeSet<(u32, VertexMultiset)> = BTreeSet::new();
        for sig in before.keys() {
            let t = sig.multiplicity(alpha);
            if t >= 1 {
                kept.insert((t, sig.without(alpha)));
                moved.insert((t - 1, sig.without(alpha)));
            }
        }
        for sig in after.keys() {
            let t = sig.multiplicity(alpha);
            match sig.multiplicity(fresh) {
                0 if t >= 1 => {
                    kept.insert((t, sig.without(alpha)));
                }
                1 => {
                    moved.insert((t, sig.without(alpha).without(fresh)));
                }
                _ => {}
            }
        }
        for (t, rest) in kept {
            if t as u64 > g {
                continue;
            }
            let key = rest.union(&VertexMultiset::from_counts([(alpha, t)]));
            checks.push(Check::fair(
                tags[3],
                format!("{label}m{key}"),
                (count(&after, &key), 1),
                (count(&before, &key) * (g - t as u64), g),
            ));
        }
        for (t, rest) in moved {
            let old = rest.union(&VertexMultiset::from_counts([(alpha, t + 1)]));
            let new = rest.union(&VertexMultiset::from_counts([(alpha, t), (fresh, 1)]));
            checks.push(Check::fair(
                tags[4],
                format!("{label}m{new}"),
                (count(&after, &new), 1),
                ((t as u64 + 1) * count(&before, &old), g),
            ));
        }
    }
    StepAudit { step: next.step, checks }
}

/// Evaluates the cumulative conditions of `state` against `original`. The
/// original number function is recovered as `g(u) = Σ g_i(w)` over the
/// vertices `w` descending from `u`.
pub fn audit_cumulative(original: &Hypergraph, state: &DetachmentState) -> StepAudit {
    let mut g: BTreeMap<VertexId, u64> = BTreeMap::new();
    let mut split_off: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (w, u) in state.ancestry.iter() {
        *g.entry(u).or_default() += state.g.get(w).unwrap_or(0) as u64;
        if w != u {
            split_off.entry(u).or_default().push(w);
        }
    }
    let g_i = |w: VertexId| state.g.get(w).unwrap_or(0) as u64;

    let mut checks = Vec::new();
    for class in Class::all(original) {
        let (d1, d2) = match class.color {
            None => (Condition::D1, Condition::D2),
            Some(_) => (Condition::E1, Condition::E2),
        };
        let label = class.label();
        let d_orig = class.degrees(original);
        let d_now = class.degrees(&state.graph);
        for (&w, &d) in &d_now {
            let Some(u) = state.ancestry.image(w) else {
                checks.push(Check::zero(d1, format!("{label}{w} has no ancestor"), 1));
                continue;
            };
            checks.push(Check::fair(
                d1,
                format!("{label}d({w})/g({w}) vs d({u})/g({u})"),
                (d, g_i(w)),
                (d_orig.get(&u).copied().unwrap_or(0), g.get(&u).copied().unwrap_or(1)),
            ));
        }

        let orig_census = class.census(original);
        let now_census = class.census(&state.graph);
        // concrete multiset over current vertices -> its amalgamation
        let mut instances: BTreeMap<VertexMultiset, VertexMultiset> = BTreeMap::new();
        for amalgam in orig_census.keys() {
            for concrete in expansions(amalgam, &split_off, &g_i) {
                instances.insert(concrete, amalgam.clone());
            }
        }
        for concrete in now_census.keys() {
            if instances.contains_key(concrete) {
                continue;
            }
            match amalgamate_pattern(concrete, state, &g_i) {
                Ok(amalgam) => {
                    instances.insert(concrete.clone(), amalgam);
                }
                Err(why) => checks.push(Check::zero(
                    d2,
                    format!("{label}m{concrete} {why}"),
                    count(&now_census, concrete),
                )),
            }
        }
        for (concrete, amalgam) in instances {
            let mut den_now = 1u64;
            let mut den_orig = 1u64;
            for &(u, m) in amalgam.entries() {
                den_now *= binomial(g_i(u), concrete.multiplicity(u) as u64);
                den_orig *= binomial(g.get(&u).copied().unwrap_or(0), m as u64);
            }
            if den_orig == 0 {
                checks.push(Check::zero(
                    d2,
                    format!("{label}m{amalgam} exceeds g"),
                    count(&orig_census, &amalgam),
                ));
                continue;
            }
            checks.push(Check::fair(
                d2,
                format!("{label}m{concrete} vs m{amalgam}"),
                (count(&now_census, &concrete), den_now),
                (count(&orig_census, &amalgam), den_orig),
            ));
        }
    }
    StepAudit { step: state.step, checks }
}

/// All concrete multisets `∪ {u_j^{a_j}} ∪ U_j` lying over `amalgam` with
/// `a_j ≤ g_i(u_j)`.
fn expansions(
    amalgam: &VertexMultiset,
    split_off: &BTreeMap<VertexId, Vec<VertexId>>,
    g_i: &impl Fn(VertexId) -> u64,
) -> Vec<VertexMultiset> {
    let empty = Vec::new();
    let mut partial: Vec<Vec<(VertexId, u32)>> = vec![Vec::new()];
    for &(u, m) in amalgam.entries() {
        let others = split_off.get(&u).unwrap_or(&empty);
        let mut options: Vec<Vec<(VertexId, u32)>> = Vec::new();
        for size in 0..=(m as usize).min(others.len()) {
            let a = m - size as u32;
            if a as u64 > g_i(u) {
                continue;
            }
            for subset in subsets(others, size) {
                let mut opt: Vec<(VertexId, u32)> = subset.into_iter().map(|w| (w, 1)).collect();
                opt.push((u, a));
                options.push(opt);
            }
        }
        partial = partial
            .into_iter()
            .flat_map(|p| {
                options.iter().map(move |o| {
                    let mut q = p.clone();
                    q.extend(o.iter().copied());
                    q
                })
            })
            .collect();
    }
    partial.into_iter().map(VertexMultiset::from_counts).collect()
}

fn amalgamate_pattern(
    concrete: &VertexMultiset,
    state: &DetachmentState,
    g_i: &impl Fn(VertexId) -> u64,
) -> Result<VertexMultiset, String> {
    let mut pairs = Vec::new();
    for &(w, m) in concrete.entries() {
        let u = state.ancestry.image(w).ok_or_else(|| format!("has unknown vertex {w}"))?;
        if w != u && m > 1 {
            return Err(format!("meets split-off vertex {w} {m} times"));
        }
        if w == u && m as u64 > g_i(u) {
            return Err(format!("meets {u} {m} times but g = {}", g_i(u)));
        }
        pairs.push((u, m));
    }
    Ok(VertexMultiset::from_counts(pairs))
}

/// All `size`-subsets of `items`, in lexicographic order of positions.
pub(crate) fn subsets<T: Copy>(items: &[T], size: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], size: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Convenience: original number function implied by a state.
pub fn original_number_function(state: &DetachmentState) -> NumberFunction {
    let mut g: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (w, u) in state.ancestry.iter() {
        *g.entry(u).or_default() += state.g.get(w).unwrap_or(0);
    }
    NumberFunction::new(g).expect("every vertex keeps g ≥ 1")
}
