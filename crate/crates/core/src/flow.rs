//! Feasible circulations with lower and upper arc bounds.
//!
//! Lower bounds are removed by the usual demand transformation and the
//! reduced problem is solved as a max-flow with Dinic's algorithm. All
//! capacities are integral, so the returned flow is integral.

use std::collections::VecDeque;

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
}

#[derive(Debug, Clone)]
struct Dinic {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            arcs: Vec::new(),
            level: vec![0; n],
            next: vec![0; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap });
        self.arcs.push(Arc { to: u, cap: 0 });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.next[u] < self.adj[u].len() {
            let a = self.adj[u][self.next[u]];
            let Arc { to, cap } = self.arcs[a];
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.next.fill(0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }
}

/// A network whose arcs carry `[lower, upper]` flow bounds.
#[derive(Debug, Clone, Default)]
pub struct Circulation {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl Circulation {
    pub fn new(nodes: usize) -> Self {
        Circulation { nodes, arcs: Vec::new() }
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    /// Adds an arc and returns its index. `upper` may be `None` for an
    /// uncapacitated arc.
    pub fn add_arc(&mut self, from: usize, to: usize, lower: i64, upper: Option<i64>) -> usize {
        let upper = upper.unwrap_or(INF);
        assert!(0 <= lower && lower <= upper, "arc bounds out of order");
        self.arcs.push((from, to, lower, upper));
        self.arcs.len() - 1
    }

    /// Finds a flow on every arc satisfying its bounds and conservation at
    /// every node, or `None` if none exists.
    pub fn solve(&self) -> Option<Vec<i64>> {
        let super_source = self.nodes;
        let super_sink = self.nodes + 1;
        let mut net = Dinic::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let mut handles = Vec::with_capacity(self.arcs.len());
        for &(u, v, lo, hi) in &self.arcs {
            handles.push(net.add(u, v, hi - lo));
            excess[v] += lo;
            excess[u] -= lo;
        }
        let mut required = 0;
        for (node, &x) in excess.iter().enumerate() {
            if x > 0 {
                net.add(super_source, node, x);
                required += x;
            } else if x < 0 {
                net.add(node, super_sink, -x);
            }
        }
        if net.max_flow(super_source, super_sink) != required {
            return None;
        }
        Some(
            self.arcs
                .iter()
                .zip(handles)
                .map(|(&(_, _, lo, _), h)| lo + net.arcs[h ^ 1].cap)
                .collect(),
        )
    }
}
