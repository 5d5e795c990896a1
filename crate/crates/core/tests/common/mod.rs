#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hyperdetach::hypergraph::{EdgeId, Hypergraph, NumberFunction, VertexId};
use hyperdetach::laminar::LaminarFamily;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn v(i: u32) -> VertexId {
    VertexId(i)
}

/// Intervals of a random ordering of `ground`, kept only when nested in or
/// disjoint from every interval already chosen.
pub fn random_laminar(rng: &mut impl Rng, ground: &[usize], max_sets: usize) -> LaminarFamily {
    let mut order = ground.to_vec();
    order.shuffle(rng);
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    if !order.is_empty() {
        for _ in 0..rng.gen_range(0..=max_sets) {
            let i = rng.gen_range(0..order.len());
            let j = rng.gen_range(i + 1..=order.len());
            let ok = chosen
                .iter()
                .all(|&(a, b)| j <= a || b <= i || (a <= i && j <= b) || (i <= a && b <= j));
            if ok {
                chosen.push((i, j));
            }
        }
    }
    LaminarFamily::from_sets(chosen.into_iter().map(|(i, j)| order[i..j].iter().copied().collect::<BTreeSet<_>>()))
}

pub struct SplitCase {
    pub ground: BTreeSet<usize>,
    pub a: LaminarFamily,
    pub b: LaminarFamily,
    pub n: usize,
}

pub fn random_split_case(rng: &mut impl Rng, max_ground: usize, max_sets: usize, max_n: usize) -> SplitCase {
    let size = rng.gen_range(0..=max_ground);
    let mut pool: Vec<usize> = (0..40).collect();
    pool.shuffle(rng);
    let elements: Vec<usize> = pool[..size].to_vec();
    SplitCase {
        a: random_laminar(rng, &elements, max_sets),
        b: random_laminar(rng, &elements, max_sets),
        ground: elements.into_iter().collect(),
        n: rng.gen_range(1..=max_n),
    }
}

/// Vertex ids are drawn sparsely from `0..30`; about a quarter of the
/// results are uncolored.
pub fn random_hypergraph(
    rng: &mut impl Rng,
    max_vertices: usize,
    max_edges: usize,
    max_hinges: usize,
    max_colors: u32,
) -> Hypergraph {
    let mut pool: Vec<u32> = (0..30).collect();
    pool.shuffle(rng);
    let vertices: Vec<VertexId> = pool[..rng.gen_range(1..=max_vertices)].iter().map(|&i| v(i)).collect();
    let colors = if rng.gen_bool(0.25) {
        None
    } else {
        Some(rng.gen_range(1..=max_colors))
    };
    let mut g = match colors {
        Some(k) => Hypergraph::colored(k),
        None => Hypergraph::new(),
    }
    .with_vertices(vertices.iter().copied())
    .unwrap();
    for id in 0..rng.gen_range(0..=max_edges) {
        let hinges: Vec<VertexId> = (0..rng.gen_range(1..=max_hinges))
            .map(|_| *vertices.choose(rng).unwrap())
            .collect();
        let color = colors.map(|k| rng.gen_range(1..=k));
        g.add_edge(EdgeId(id as u32 * 3 + 1), hinges, color).unwrap();
    }
    g
}

/// `g(v)` uniform between the largest hinge count of `v` in one edge (at
/// least 1) and `max_g`.
pub fn random_simple_g(rng: &mut impl Rng, graph: &Hypergraph, max_g: u32) -> NumberFunction {
    let mut values = BTreeMap::new();
    for v in graph.vertices() {
        let lo = graph.edges().map(|(_, e)| e.hinges_at(v) as u32).max().unwrap_or(0).max(1);
        values.insert(v, rng.gen_range(lo..=max_g.max(lo)));
    }
    NumberFunction::new(values).unwrap()
}

/// Rebuilds `graph` with every edge passed through `f`.
pub fn rebuild(
    graph: &Hypergraph,
    mut f: impl FnMut(EdgeId, Vec<VertexId>, Option<u32>) -> (Vec<VertexId>, Option<u32>),
) -> Hypergraph {
    let mut out = match graph.num_colors() {
        Some(k) => Hypergraph::colored(k),
        None => Hypergraph::new(),
    }
    .with_vertices(graph.vertices())
    .unwrap();
    for (id, e) in graph.edges() {
        let (hinges, color) = f(id, e.hinges().to_vec(), e.color());
        out.add_edge(id, hinges, color).unwrap();
    }
    out
}

/// Every matrix with the given column sums and `lo ≤ AH ≤ hi` row-wise, in
/// row-major lexicographic order. Plain enumeration; meant for tiny cases.
pub fn all_matrices(sizes: &[u64], columns: &[u64], lo: &[u64], hi: &[u64]) -> Vec<Vec<Vec<u64>>> {
    fn rows(
        sizes: &[u64],
        remaining: &[u64],
        lo: &[u64],
        hi: &[u64],
        i: usize,
        acc: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if i == lo.len() {
            if remaining.iter().all(|&c| c == 0) {
                out.push(acc.clone());
            }
            return;
        }
        let mut row = vec![0u64; sizes.len()];
        cells(sizes, remaining, lo, hi, i, 0, &mut row, acc, out);
    }
    #[allow(clippy::too_many_arguments)]
    fn cells(
        sizes: &[u64],
        remaining: &[u64],
        lo: &[u64],
        hi: &[u64],
        i: usize,
        j: usize,
        row: &mut Vec<u64>,
        acc: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
    ) {
        if j == sizes.len() {
            let t: u64 = row.iter().zip(sizes).map(|(a, h)| a * h).sum();
            if lo[i] <= t && t <= hi[i] {
                let rest: Vec<u64> = remaining.iter().zip(row.iter()).map(|(r, a)| r - a).collect();
                acc.push(row.clone());
                rows(sizes, &rest, lo, hi, i + 1, acc, out);
                acc.pop();
            }
            return;
        }
        for a in 0..=remaining[j] {
            row[j] = a;
            cells(sizes, remaining, lo, hi, i, j + 1, row, acc, out);
        }
        row[j] = 0;
    }
    let mut out = Vec::new();
    rows(sizes, columns, lo, hi, 0, &mut Vec::new(), &mut out);
    out
}

/// A single edge size `h` with `c` edges: rows need `a_i` with
/// `lo_i ≤ a_i h ≤ hi_i` and `Σ a_i = c`.
pub fn single_size_feasible(h: u64, c: u64, lo: &[u64], hi: &[u64]) -> bool {
    let mut min = 0;
    let mut max = 0;
    for (&l, &u) in lo.iter().zip(hi) {
        let a_lo = l.div_ceil(h);
        let a_hi = u / h;
        if a_lo > a_hi {
            return false;
        }
        min += a_lo;
        max += a_hi;
    }
    min <= c && c <= max
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
