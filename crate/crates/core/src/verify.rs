//! Independent checks of designs, factorizations and detachments. Everything
//! here is recounted from raw edge hinge lists; nothing calls the detachment
//! engine or the matrix solver.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{binomial, fair_bounds};
use crate::design::{DesignSpec, DistributionMatrix, FactorSpec};
use crate::factorize::{FactorKind, Factorization};
use crate::hypergraph::{AmalgamationMap, Hypergraph, NumberFunction, VertexId};

/// Above this many candidate sets, coverage is checked by counting.
pub const ENUMERATION_LIMIT: u64 = 2_000_000;

/// One violated bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub value: u64,
    pub min: u64,
    pub max: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Number of instances examined.
    pub instances: u64,
    pub failures: Vec<Finding>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    fn new(subject: &str, checks: Vec<CheckOutcome>) -> Self {
        VerificationReport {
            subject: subject.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Checker {
    name: String,
    instances: u64,
    failures: Vec<Finding>,
}

impl Checker {
    fn new(name: &str) -> Self {
        Checker {
            name: name.into(),
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn range(&mut self, subject: impl FnOnce() -> String, value: u64, min: u64, max: u64) {
        self.instances += 1;
        if value < min || value > max {
            self.failures.push(Finding {
                subject: subject(),
                value,
                min,
                max,
            });
        }
    }

    fn equal(&mut self, subject: impl FnOnce() -> String, value: u64, want: u64) {
        self.range(subject, value, want, want);
    }

    fn holds(&mut self, subject: impl FnOnce() -> String, ok: bool) {
        self.range(subject, ok as u64, 1, 1);
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome {
            passed: self.failures.is_empty(),
            name: self.name,
            instances: self.instances,
            failures: self.failures,
        }
    }
}

type Signature = Vec<(VertexId, u32)>;

fn signature(hinges: &[VertexId]) -> Signature {
    let mut counts: BTreeMap<VertexId, u32> = BTreeMap::new();
    for &v in hinges {
        *counts.entry(v).or_default() += 1;
    }
    counts.into_iter().collect()
}

fn show(sig: &Signature) -> String {
    let parts: Vec<String> = sig
        .iter()
        .map(|&(v, c)| if c == 1 { v.to_string() } else { format!("{v}^{c}") })
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Edge multiplicities by signature, optionally restricted to one color.
fn census(graph: &Hypergraph, color: Option<u32>) -> BTreeMap<Signature, u64> {
    let mut out = BTreeMap::new();
    for (_, e) in graph.edges() {
        if color.is_none() || e.color() == color {
            *out.entry(signature(e.hinges())).or_default() += 1;
        }
    }
    out
}

fn hinge_degrees(graph: &Hypergraph, color: Option<u32>) -> BTreeMap<VertexId, u64> {
    let mut deg: BTreeMap<VertexId, u64> = graph.vertices().map(|v| (v, 0)).collect();
    for (_, e) in graph.edges() {
        if color.is_none() || e.color() == color {
            for v in e.hinges() {
                *deg.entry(*v).or_default() += 1;
            }
        }
    }
    deg
}

fn combinations<T: Copy>(items: &[T], size: usize, f: &mut impl FnMut(&[T])) {
    fn go<T: Copy>(items: &[T], size: usize, start: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, size, 0, &mut Vec::new(), f);
}

/// Parts of a multipartite design: vertices are grouped greedily with
/// earlier vertices they never share an edge with.
fn derive_parts(graph: &Hypergraph) -> Vec<Vec<VertexId>> {
    let mut together: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (_, e) in graph.edges() {
        let vs: BTreeSet<VertexId> = e.hinges().iter().copied().collect();
        for &a in &vs {
            for &b in &vs {
                together.insert((a, b));
            }
        }
    }
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    for v in graph.vertices() {
        match parts.iter_mut().find(|p| p.iter().all(|&w| !together.contains(&(v, w)))) {
            Some(p) => p.push(v),
            None => parts.push(vec![v]),
        }
    }
    parts
}

/// Checks that `graph` (colors ignored) is `ΛK_n^H` or its multipartite
/// analogue. For multipartite specs the parts are taken from `parts` or
/// inferred from co-occurrence.
pub fn verify_design(graph: &Hypergraph, spec: &DesignSpec, parts: Option<&[Vec<VertexId>]>) -> VerificationReport {
    let mut checks = Vec::new();
    let mut valid = Checker::new("spec");
    valid.holds(|| "design spec".into(), spec.validate().is_ok());
    let spec_ok = valid.failures.is_empty();
    checks.push(valid.done());
    if !spec_ok {
        return VerificationReport::new("design", checks);
    }

    let sizes = spec.part_sizes();
    let mut count = Checker::new("vertex count");
    count.equal(|| "|V|".into(), graph.num_vertices() as u64, sizes.iter().sum());
    checks.push(count.done());

    // Part index of every vertex; each vertex is its own part when not partite.
    let vertices: Vec<VertexId> = graph.vertices().collect();
    let classes: Vec<Vec<VertexId>> = if spec.is_partite() {
        let found = parts.map(|p| p.to_vec()).unwrap_or_else(|| derive_parts(graph));
        let mut structure = Checker::new("parts");
        structure.equal(|| "number of parts".into(), found.len() as u64, spec.n);
        let mut seen: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (a, part) in found.iter().enumerate() {
            for &v in part {
                structure.holds(|| format!("{v} in one part"), seen.insert(v, a).is_none() && graph.has_vertex(v));
            }
        }
        structure.equal(|| "vertices covered by parts".into(), seen.len() as u64, vertices.len() as u64);
        let mut want = sizes.clone();
        want.sort_unstable();
        let mut got: Vec<u64> = found.iter().map(|p| p.len() as u64).collect();
        got.sort_unstable();
        structure.holds(|| format!("part sizes {got:?} vs {want:?}"), got == want);
        let ok = structure.failures.is_empty();
        checks.push(structure.done());
        if !ok {
            return VerificationReport::new("design", checks);
        }
        found
    } else {
        vertices.iter().map(|&v| vec![v]).collect()
    };
    let part_of: BTreeMap<VertexId, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(a, p)| p.iter().map(move |&v| (v, a)))
        .collect();
    let lambda_of: BTreeMap<u64, u64> = spec.sizes.iter().copied().zip(spec.lambda.iter().copied()).collect();

    let realized = census(graph, None);
    let mut edges = Checker::new("edge sets");
    for (sig, &m) in &realized {
        let is_set = sig.iter().all(|&(_, c)| c == 1);
        let distinct_parts: BTreeSet<usize> = sig.iter().filter_map(|(v, _)| part_of.get(v).copied()).collect();
        let transversal = distinct_parts.len() == sig.len();
        let want = lambda_of.get(&(sig.len() as u64)).copied();
        match want {
            Some(l) if is_set && transversal => edges.equal(|| show(sig), m, l),
            _ => edges.equal(|| show(sig), m, 0),
        }
    }
    checks.push(edges.done());

    let mut coverage = Checker::new("coverage");
    for (&h, &l) in spec.sizes.iter().zip(&spec.lambda) {
        let candidates = crate::arith::elementary_symmetric(&sizes, h as usize);
        let present = realized
            .keys()
            .filter(|s| s.len() as u64 == h && s.iter().all(|&(_, c)| c == 1))
            .filter(|s| s.iter().map(|(v, _)| part_of[v]).collect::<BTreeSet<_>>().len() == s.len())
            .count() as u64;
        if candidates <= ENUMERATION_LIMIT {
            let part_ids: Vec<usize> = (0..classes.len()).collect();
            combinations(&part_ids, h as usize, &mut |chosen| {
                let mut stack: Vec<Signature> = vec![Vec::new()];
                for &a in chosen {
                    stack = stack
                        .into_iter()
                        .flat_map(|s| {
                            classes[a].iter().map(move |&v| {
                                let mut s = s.clone();
                                s.push((v, 1));
                                s
                            })
                        })
                        .collect();
                }
                for mut s in stack {
                    s.sort_unstable();
                    let m = realized.get(&s).copied().unwrap_or(0);
                    coverage.equal(|| show(&s), m, l);
                }
            });
        } else {
            coverage.equal(|| format!("distinct {h}-sets present"), present, candidates);
        }
    }
    checks.push(coverage.done());
    VerificationReport::new("design", checks)
}

/// Checks a factorization against its design and factor specs.
pub fn verify_factorization(f: &Factorization, spec: &DesignSpec, fs: &FactorSpec) -> VerificationReport {
    let g = &f.design;
    let k = fs.r.len() as u64;
    let mut checks = Vec::new();

    let mut colors = Checker::new("factor count");
    colors.equal(|| "k".into(), g.num_colors().unwrap_or(1) as u64, k);
    checks.push(colors.done());

    let mut partition = Checker::new("partition");
    for (id, e) in g.edges() {
        partition.range(|| format!("color of {id}"), e.color().unwrap_or(1) as u64, 1, k);
    }
    checks.push(partition.done());

    let (lower, upper): (Vec<u64>, Vec<u64>) = match f.kind {
        FactorKind::R => (fs.r.clone(), fs.r.clone()),
        FactorKind::Qr => (fs.q.clone().unwrap_or_else(|| vec![u64::MAX; fs.r.len()]), fs.r.clone()),
        FactorKind::Almost => (fs.r.iter().map(|r| r.saturating_sub(1)).collect(), fs.r.clone()),
    };
    let mut degrees = Checker::new("factor degrees");
    for i in 0..fs.r.len() {
        let color = (g.num_colors().is_some()).then_some(i as u32 + 1);
        for (v, d) in hinge_degrees(g, color) {
            degrees.range(|| format!("factor {} at {v}", i + 1), d, lower[i], upper[i]);
        }
    }
    checks.push(degrees.done());

    let mut matrix = Checker::new("distribution matrix");
    let counted = count_matrix(g, &spec.sizes, fs.r.len());
    matrix.equal(|| "rows".into(), f.matrix.rows.len() as u64, k);
    for (i, row) in counted.rows.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            let want = f.matrix.rows.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0);
            matrix.equal(|| format!("a[{},{}]", i + 1, j + 1), a, want);
        }
    }
    checks.push(matrix.done());

    let design = verify_design(g, spec, f.parts.as_deref());
    checks.extend(design.checks);
    VerificationReport::new("factorization", checks)
}

/// `a_ij` recounted from edge colors and sizes.
fn count_matrix(g: &Hypergraph, sizes: &[u64], k: usize) -> DistributionMatrix {
    let mut rows = vec![vec![0u64; sizes.len()]; k];
    for (_, e) in g.edges() {
        let i = e.color().unwrap_or(1) as usize;
        let h = signature(e.hinges()).len() as u64;
        if let (Some(row), Some(j)) = (rows.get_mut(i.wrapping_sub(1)), sizes.iter().position(|&s| s == h)) {
            row[j] += 1;
        }
    }
    DistributionMatrix { rows }
}

/// Checks that `g_graph` is a simple `g`-detachment of `f` via `psi`,
/// including the degree, multiplicity and color balance conditions.
pub fn verify_detachment(
    f: &Hypergraph,
    g_graph: &Hypergraph,
    psi: &AmalgamationMap,
    g: &NumberFunction,
) -> VerificationReport {
    let mut checks = Vec::new();

    let mut map = Checker::new("amalgamation map");
    for v in g_graph.vertices() {
        map.holds(|| format!("Ψ({v}) defined in F"), psi.image(v).is_some_and(|u| f.has_vertex(u)));
    }
    for (w, _) in psi.iter() {
        map.holds(|| format!("{w} in G"), g_graph.has_vertex(w));
    }
    let mut preimage: BTreeMap<VertexId, Vec<VertexId>> = f.vertices().map(|u| (u, Vec::new())).collect();
    for (w, u) in psi.iter() {
        if g_graph.has_vertex(w) {
            if let Some(p) = preimage.get_mut(&u) {
                p.push(w);
            }
        }
    }
    let map_ok = map.failures.is_empty();
    checks.push(map.done());

    let mut numbers = Checker::new("number function");
    for (&u, ws) in &preimage {
        let want = g.get(u).map(u64::from).unwrap_or(0);
        numbers.equal(|| format!("|Ψ⁻¹({u})|"), ws.len() as u64, want);
    }
    for (u, _) in g.iter() {
        numbers.holds(|| format!("{u} in F"), f.has_vertex(u));
    }
    let numbers_ok = numbers.failures.is_empty();
    checks.push(numbers.done());

    let mut edges = Checker::new("edges and hinges");
    edges.equal(|| "edge count".into(), g_graph.num_edges() as u64, f.num_edges() as u64);
    edges.equal(|| "colors".into(), g_graph.num_colors().unwrap_or(1) as u64, f.num_colors().unwrap_or(1) as u64);
    for (id, ef) in f.edges() {
        match g_graph.edge(id) {
            Err(_) => edges.holds(|| format!("{id} in G"), false),
            Ok(eg) => {
                edges.equal(|| format!("hinges of {id}"), eg.hinges().len() as u64, ef.hinges().len() as u64);
                edges.holds(|| format!("color of {id}"), eg.color() == ef.color());
                if eg.hinges().len() == ef.hinges().len() {
                    for (ordinal, (&w, &u)) in eg.hinges().iter().zip(ef.hinges()).enumerate() {
                        edges.holds(|| format!("Ψ(ψ_G(h({id},{ordinal}))) = {u}"), psi.image(w) == Some(u));
                    }
                }
            }
        }
    }
    let edges_ok = edges.failures.is_empty();
    checks.push(edges.done());

    let mut simple = Checker::new("simple");
    for (id, e) in g_graph.edges() {
        for (v, c) in signature(e.hinges()) {
            simple.range(|| format!("{v} in {id}"), c as u64, 0, 1);
        }
    }
    checks.push(simple.done());

    if !(map_ok && numbers_ok && edges_ok) {
        return VerificationReport::new("detachment", checks);
    }
    let gf = |u: VertexId| g.get(u).map(u64::from).unwrap_or(1);
    let colors = f.num_colors();
    let classes: Vec<Option<u32>> = match colors {
        Some(k) => (1..=k).map(Some).collect(),
        None => vec![None],
    };
    let class_label = |c: Option<u32>| c.map(|j| format!("color {j} ")).unwrap_or_default();

    let mut a1 = Checker::new("A1 degree");
    let mut a2 = Checker::new("A2 color degree");
    let deg_f = hinge_degrees(f, None);
    let deg_g = hinge_degrees(g_graph, None);
    for (&u, ws) in &preimage {
        let (lo, hi) = fair_bounds(deg_f[&u], gf(u));
        for &w in ws {
            a1.range(|| format!("d({w})"), deg_g[&w], lo, hi);
        }
    }
    if colors.is_some() {
        for &c in &classes {
            let df = hinge_degrees(f, c);
            let dg = hinge_degrees(g_graph, c);
            for (&u, ws) in &preimage {
                let (lo, hi) = fair_bounds(df[&u], gf(u));
                for &w in ws {
                    a2.range(|| format!("{}d({w})", class_label(c)), dg[&w], lo, hi);
                }
            }
        }
    }
    checks.push(a1.done());
    checks.push(a2.done());

    let mut a3 = Checker::new("A3 multiplicity");
    let mut a4 = Checker::new("A4 color multiplicity");
    let whole = census(g_graph, None);
    balance_multiplicities(&census(f, None), &whole, &preimage, &gf, "", &mut a3);
    if colors.is_some() {
        for &c in &classes {
            balance_multiplicities(&census(f, c), &census(g_graph, c), &preimage, &gf, &class_label(c), &mut a4);
        }
    }
    checks.push(a3.done());
    checks.push(a4.done());
    VerificationReport::new("detachment", checks)
}

/// For each multiset `M` realized in `F`, every choice of `m_j` distinct
/// copies of each `u_j` must carry `m_F(M) / ∏ C(g(u_j), m_j)` edges, up to
/// rounding.
fn balance_multiplicities(
    f_census: &BTreeMap<Signature, u64>,
    g_census: &BTreeMap<Signature, u64>,
    preimage: &BTreeMap<VertexId, Vec<VertexId>>,
    gf: &impl Fn(VertexId) -> u64,
    label: &str,
    check: &mut Checker,
) {
    for (sig, &mf) in f_census {
        let mut den = 1u64;
        for &(u, m) in sig {
            den = den.saturating_mul(binomial(gf(u), m as u64));
        }
        if den == 0 {
            check.holds(|| format!("{label}{} fits g", show(sig)), false);
            continue;
        }
        let (lo, hi) = fair_bounds(mf, den);
        let mut choices: Vec<Vec<Vec<VertexId>>> = Vec::new();
        for &(u, m) in sig {
            let mut options = Vec::new();
            combinations(&preimage[&u], m as usize, &mut |c| options.push(c.to_vec()));
            choices.push(options);
        }
        let mut picks: Vec<Signature> = vec![Vec::new()];
        for options in &choices {
            picks = picks
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |o| {
                        let mut p = p.clone();
                        p.extend(o.iter().map(|&w| (w, 1)));
                        p
                    })
                })
                .collect();
        }
        for mut s in picks {
            s.sort_unstable();
            let m = g_census.get(&s).copied().unwrap_or(0);
            check.range(|| format!("{label}m({})", show(&s)), m, lo, hi);
        }
    }
}
