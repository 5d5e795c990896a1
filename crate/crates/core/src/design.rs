//! Complete multi-uniform designs `ΛK_n^H` and their multipartite
//! analogues, the degree conditions for factorizing them, and the
//! distribution matrix that allots edges of each size to each factor.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{binomial, elementary_symmetric, pow};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, VertexId};

/// Part sizes of a multipartite design.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PartSizes {
    Uniform(u64),
    Explicit(Vec<u64>),
}

/// `Λ = [λ_j]`, `H = [h_j]`, `n`, and optional part sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub n: u64,
    #[serde(rename = "H")]
    pub sizes: Vec<u64>,
    pub lambda: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<PartSizes>,
}

impl DesignSpec {
    pub fn complete(n: u64, sizes: Vec<u64>, lambda: Vec<u64>) -> Self {
        DesignSpec { n, sizes, lambda, parts: None }
    }

    pub fn partite(n: u64, p: u64, sizes: Vec<u64>, lambda: Vec<u64>) -> Self {
        DesignSpec {
            n,
            sizes,
            lambda,
            parts: Some(PartSizes::Uniform(p)),
        }
    }

    pub fn with_parts(n: u64, parts: Vec<u64>, sizes: Vec<u64>, lambda: Vec<u64>) -> Self {
        DesignSpec {
            n,
            sizes,
            lambda,
            parts: Some(PartSizes::Explicit(parts)),
        }
    }

    pub fn is_partite(&self) -> bool {
        self.parts.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDesign(m));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.sizes.is_empty() {
            return bad("H must be non-empty".into());
        }
        if self.sizes.len() != self.lambda.len() {
            return bad(format!("H has {} entries but lambda has {}", self.sizes.len(), self.lambda.len()));
        }
        if self.sizes.iter().collect::<HashSet<_>>().len() != self.sizes.len() {
            return bad("edge sizes in H must be distinct".into());
        }
        if let Some(&h) = self.sizes.iter().find(|&&h| h == 0 || h > self.n) {
            return bad(format!("edge size {h} is outside 1..={}", self.n));
        }
        if self.lambda.contains(&0) {
            return bad("every lambda must be positive".into());
        }
        match &self.parts {
            None => {}
            Some(parts) => {
                if let Some(&h) = self.sizes.iter().find(|&&h| h < 2) {
                    return bad(format!("partite designs need edge sizes ≥ 2, got {h}"));
                }
                match parts {
                    PartSizes::Uniform(0) => return bad("part size must be positive".into()),
                    PartSizes::Explicit(ps) if ps.len() as u64 != self.n => {
                        return bad(format!("{} part sizes given for n = {}", ps.len(), self.n))
                    }
                    PartSizes::Explicit(ps) if ps.contains(&0) => {
                        return bad("part sizes must be positive".into())
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// `[p_1, …, p_n]`; all ones for a non-partite design.
    pub fn part_sizes(&self) -> Vec<u64> {
        match &self.parts {
            None => vec![1; self.n as usize],
            Some(PartSizes::Uniform(p)) => vec![*p; self.n as usize],
            Some(PartSizes::Explicit(ps)) => ps.clone(),
        }
    }

    /// The common part size `p` if all parts are equal (`1` when not
    /// partite).
    pub fn uniform_part(&self) -> Option<u64> {
        let ps = self.part_sizes();
        let first = *ps.first()?;
        ps.iter().all(|&p| p == first).then_some(first)
    }

    pub fn num_vertices(&self) -> u64 {
        self.part_sizes().iter().sum()
    }

    /// Regular degree `Σ λ_j C(n−1,h_j−1) p^{h_j−1}`, when parts are equal.
    pub fn degree(&self) -> Option<u64> {
        let p = self.uniform_part()?;
        Some(
            self.sizes
                .iter()
                .zip(&self.lambda)
                .map(|(&h, &l)| l * binomial(self.n - 1, h - 1) * pow(p, h - 1))
                .sum(),
        )
    }

    /// Number of edges of size `h_j`: `λ_j · e_{h_j}(p_1, …, p_n)`.
    pub fn edges_of_size(&self, j: usize) -> u64 {
        let h = self.sizes[j] as usize;
        self.lambda[j] * elementary_symmetric(&self.part_sizes(), h)
    }
}

/// Factor degree vectors `R` and optionally `Q ≤ R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    #[serde(rename = "R")]
    pub r: Vec<u64>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<u64>>,
}

impl FactorSpec {
    pub fn regular(r: Vec<u64>) -> Self {
        FactorSpec { r, q: None }
    }

    pub fn interval(q: Vec<u64>, r: Vec<u64>) -> Self {
        FactorSpec { r, q: Some(q) }
    }

    /// `Q = R − J_k`. Every `r_i` must be positive.
    pub fn almost(r: Vec<u64>) -> Result<Self> {
        if r.contains(&0) {
            return Err(Error::InvalidFactors("almost factors need every r_i ≥ 1".into()));
        }
        let q = r.iter().map(|&x| x - 1).collect();
        Ok(FactorSpec { r, q: Some(q) })
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.r.is_empty() {
            return Err(Error::InvalidFactors("R must have at least one entry".into()));
        }
        if self.r.contains(&0) {
            return Err(Error::InvalidFactors("every r_i must be positive".into()));
        }
        if let Some(q) = &self.q {
            if q.len() != self.r.len() {
                return Err(Error::InvalidFactors(format!(
                    "Q has {} entries but R has {}",
                    q.len(),
                    self.r.len()
                )));
            }
            if let Some(i) = (0..q.len()).find(|&i| q[i] > self.r[i]) {
                return Err(Error::InvalidFactors(format!(
                    "q_{} = {} exceeds r_{} = {}",
                    i + 1,
                    q[i],
                    i + 1,
                    self.r[i]
                )));
            }
        }
        Ok(())
    }

    /// Lower degree bounds: `Q` if present, else `R`.
    pub fn lower(&self) -> &[u64] {
        self.q.as_deref().unwrap_or(&self.r)
    }
}

/// Why a factorization was refused.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Refusal {
    /// Only equal parts give a regular multipartite design.
    UnequalPartSizes { part_sizes: Vec<u64> },
    /// `s(R)` differs from the regular degree.
    DegreeSumMismatch { sum_r: u64, degree: u64 },
    /// `s(Q) ≤ degree ≤ s(R)` fails.
    DegreeSumOutOfRange { sum_q: u64, degree: u64, sum_r: u64 },
    /// No distribution matrix satisfies the row and column constraints.
    DistributionMatrix(Infeasible),
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refusal::UnequalPartSizes { part_sizes } => {
                write!(f, "unequal part sizes {part_sizes:?}: p_1 = … = p_n is necessary")
            }
            Refusal::DegreeSumMismatch { sum_r, degree } => {
                write!(f, "s(R) = {sum_r} but the design is {degree}-regular")
            }
            Refusal::DegreeSumOutOfRange { sum_q, degree, sum_r } => {
                write!(f, "s(Q) ≤ degree ≤ s(R) fails: {sum_q} ≤ {degree} ≤ {sum_r}")
            }
            Refusal::DistributionMatrix(why) => write!(f, "AH=nR infeasible: {why}"),
        }
    }
}

/// Witness that no distribution matrix exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Infeasible {
    /// Row `row` alone cannot reach a hinge total in `[lower, upper]`.
    RowUnsatisfiable { row: usize, lower: u64, upper: u64, sizes: Vec<u64> },
    /// All edges together carry `total` hinges, outside `[lower, upper]`.
    TotalOutOfRange { total: u64, lower: u64, upper: u64 },
    /// Each row is satisfiable but no combination meets the column sums.
    NoJointSolution { column_sums: Vec<u64> },
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasible::RowUnsatisfiable { row, lower, upper, sizes } => write!(
                f,
                "row {} needs a hinge total in [{lower}, {upper}] from sizes {sizes:?}",
                row + 1
            ),
            Infeasible::TotalOutOfRange { total, lower, upper } => {
                write!(f, "edges carry {total} hinges, outside [{lower}, {upper}]")
            }
            Infeasible::NoJointSolution { column_sums } => {
                write!(f, "no row combination meets column sums {column_sums:?}")
            }
        }
    }
}

/// Outcome of [`check_necessary`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub degree: Option<u64>,
    pub failures: Vec<Refusal>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Equal parts and the degree-sum (in)equalities. Matrix feasibility is
/// left to [`solve_distribution_matrix`].
pub fn check_necessary(spec: &DesignSpec, fac: &FactorSpec) -> Result<Verdict> {
    spec.validate()?;
    fac.validate()?;
    let degree = spec.degree();
    let mut failures = Vec::new();
    match degree {
        None => failures.push(Refusal::UnequalPartSizes {
            part_sizes: spec.part_sizes(),
        }),
        Some(degree) => {
            let sum_r: u64 = fac.r.iter().sum();
            match &fac.q {
                None if sum_r != degree => failures.push(Refusal::DegreeSumMismatch { sum_r, degree }),
                Some(q) => {
                    let sum_q: u64 = q.iter().sum();
                    if !(sum_q <= degree && degree <= sum_r) {
                        failures.push(Refusal::DegreeSumOutOfRange { sum_q, degree, sum_r });
                    }
                }
                None => {}
            }
        }
    }
    Ok(Verdict { degree, failures })
}

/// `A = [a_ij]`: `a_ij` edges of size `h_j` go to factor `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DistributionMatrix {
    pub rows: Vec<Vec<u64>>,
}

impl DistributionMatrix {
    /// `(AH)_i`
    pub fn row_hinges(&self, i: usize, sizes: &[u64]) -> u64 {
        self.rows[i].iter().zip(sizes).map(|(a, h)| a * h).sum()
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        self.rows.iter().map(|r| r[j]).sum()
    }
}

/// Constraints on `A`: `lower ≤ AH ≤ upper` row-wise and fixed column sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixProblem {
    pub sizes: Vec<u64>,
    pub column_sums: Vec<u64>,
    pub row_lower: Vec<u64>,
    pub row_upper: Vec<u64>,
}

impl MatrixProblem {
    /// `npQ ≤ AH ≤ npR`, `s(A_j) = λ_j C(n,h_j) p^{h_j}`. Requires equal parts.
    pub fn new(spec: &DesignSpec, fac: &FactorSpec) -> Result<Self> {
        spec.validate()?;
        fac.validate()?;
        let p = spec
            .uniform_part()
            .ok_or_else(|| Error::InvalidDesign("distribution matrix needs equal parts".into()))?;
        let scale = spec.n * p;
        Ok(MatrixProblem {
            sizes: spec.sizes.clone(),
            column_sums: (0..spec.sizes.len())
                .map(|j| spec.lambda[j] * binomial(spec.n, spec.sizes[j]) * pow(p, spec.sizes[j]))
                .collect(),
            row_lower: fac.lower().iter().map(|&q| q * scale).collect(),
            row_upper: fac.r.iter().map(|&r| r * scale).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.row_upper.len()
    }

    pub fn satisfied_by(&self, a: &DistributionMatrix) -> bool {
        a.rows.len() == self.rows()
            && a.rows.iter().all(|r| r.len() == self.sizes.len())
            && (0..self.rows()).all(|i| {
                let t = a.row_hinges(i, &self.sizes);
                self.row_lower[i] <= t && t <= self.row_upper[i]
            })
            && (0..self.sizes.len()).all(|j| a.column_sum(j) == self.column_sums[j])
    }

    /// Lexicographically smallest solution (`a_11`, then `a_12`, …), or a
    /// witness of infeasibility.
    pub fn solve(&self) -> std::result::Result<DistributionMatrix, Infeasible> {
        for row in 0..self.rows() {
            if !self.row_alone_feasible(row) {
                return Err(Infeasible::RowUnsatisfiable {
                    row,
                    lower: self.row_lower[row],
                    upper: self.row_upper[row],
                    sizes: self.sizes.clone(),
                });
            }
        }
        let total: u64 = self.column_sums.iter().zip(&self.sizes).map(|(c, h)| c * h).sum();
        let lower: u64 = self.row_lower.iter().sum();
        let upper: u64 = self.row_upper.iter().sum();
        if total < lower || total > upper {
            return Err(Infeasible::TotalOutOfRange { total, lower, upper });
        }
        let mut search = MatrixSearch {
            problem: self,
            dead: HashSet::new(),
            rows: Vec::new(),
        };
        if search.fill(0, self.column_sums.clone()) {
            Ok(DistributionMatrix { rows: search.rows })
        } else {
            Err(Infeasible::NoJointSolution {
                column_sums: self.column_sums.clone(),
            })
        }
    }

    /// Bounded knapsack: can `Σ a_j h_j` land in the row's window with
    /// `a_j ≤` column sum?
    fn row_alone_feasible(&self, row: usize) -> bool {
        let hi = self.row_upper[row] as usize;
        let mut reach = vec![false; hi + 1];
        reach[0] = true;
        for (&h, &c) in self.sizes.iter().zip(&self.column_sums) {
            let mut next = reach.clone();
            for (s, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
                let mut t = s;
                for _ in 0..c {
                    t += h as usize;
                    if t > hi {
                        break;
                    }
                    next[t] = true;
                }
            }
            reach = next;
        }
        reach[self.row_lower[row] as usize..].iter().any(|&r| r)
    }
}

struct MatrixSearch<'a> {
    problem: &'a MatrixProblem,
    dead: HashSet<(usize, Vec<u64>)>,
    rows: Vec<Vec<u64>>,
}

impl MatrixSearch<'_> {
    fn fill(&mut self, row: usize, remaining: Vec<u64>) -> bool {
        let p = self.problem;
        if row == p.rows() {
            return remaining.iter().all(|&c| c == 0);
        }
        let left: u64 = remaining.iter().zip(&p.sizes).map(|(c, h)| c * h).sum();
        let need_lo: u64 = p.row_lower[row..].iter().sum();
        let need_hi: u64 = p.row_upper[row..].iter().sum();
        if left < need_lo || left > need_hi || self.dead.contains(&(row, remaining.clone())) {
            return false;
        }
        let mut candidate = vec![0; remaining.len()];
        if self.try_rows(row, &remaining, &mut candidate, 0, 0) {
            return true;
        }
        self.dead.insert((row, remaining));
        false
    }

    fn try_rows(&mut self, row: usize, remaining: &[u64], cand: &mut Vec<u64>, col: usize, hinges: u64) -> bool {
        let p = self.problem;
        if col == remaining.len() {
            if hinges < p.row_lower[row] {
                return false;
            }
            let rest: Vec<u64> = remaining.iter().zip(cand.iter()).map(|(r, a)| r - a).collect();
            self.rows.push(cand.clone());
            if self.fill(row + 1, rest) {
                return true;
            }
            self.rows.pop();
            return false;
        }
        let h = p.sizes[col];
        let room = (p.row_upper[row] - hinges) / h;
        for a in 0..=remaining[col].min(room) {
            cand[col] = a;
            if self.try_rows(row, remaining, cand, col + 1, hinges + a * h) {
                return true;
            }
        }
        cand[col] = 0;
        false
    }
}

/// Solves for `A` under the spec's row and column constraints.
pub fn solve_distribution_matrix(
    spec: &DesignSpec,
    fac: &FactorSpec,
) -> Result<std::result::Result<DistributionMatrix, Infeasible>> {
    Ok(MatrixProblem::new(spec, fac)?.solve())
}

fn sorted_subsets(n: u64, k: u64) -> Vec<Vec<u64>> {
    crate::audit::subsets(&(0..n).collect::<Vec<_>>(), k as usize)
}

/// `ΛK_n^H` on vertices `0..n`. Edges are numbered by size class, then
/// by vertex subset in lexicographic order.
pub fn build_design(spec: &DesignSpec) -> Result<Hypergraph> {
    spec.validate()?;
    if spec.is_partite() {
        return Err(Error::InvalidDesign("use build_partite_design for part sizes".into()));
    }
    let mut g = Hypergraph::new().with_vertices((0..spec.n as u32).map(VertexId))?;
    let mut next = 0u32;
    for (&h, &l) in spec.sizes.iter().zip(&spec.lambda) {
        for subset in sorted_subsets(spec.n, h) {
            for _ in 0..l {
                g.add_edge(EdgeId(next), subset.iter().map(|&x| VertexId(x as u32)), None)?;
                next += 1;
            }
        }
    }
    Ok(g)
}

/// `ΛK^H_{p_1,…,p_n}`: part `a` holds consecutive vertex ids. Returns the
/// hypergraph and its parts.
pub fn build_partite_design(spec: &DesignSpec) -> Result<(Hypergraph, Vec<Vec<VertexId>>)> {
    spec.validate()?;
    if !spec.is_partite() {
        return Err(Error::InvalidDesign("partite design needs part sizes".into()));
    }
    let mut parts: Vec<Vec<VertexId>> = Vec::new();
    let mut id = 0u32;
    for p in spec.part_sizes() {
        parts.push((0..p).map(|_| {
            id += 1;
            VertexId(id - 1)
        }).collect());
    }
    let mut g = Hypergraph::new().with_vertices(parts.iter().flatten().copied())?;
    let mut next = 0u32;
    for (&h, &l) in spec.sizes.iter().zip(&spec.lambda) {
        for chosen in sorted_subsets(spec.n, h) {
            let mut transversals: Vec<Vec<VertexId>> = vec![Vec::new()];
            for &a in &chosen {
                transversals = transversals
                    .into_iter()
                    .flat_map(|t| {
                        parts[a as usize].iter().map(move |&w| {
                            let mut t = t.clone();
                            t.push(w);
                            t
                        })
                    })
                    .collect();
            }
            for t in transversals {
                for _ in 0..l {
                    g.add_edge(EdgeId(next), t.iter().copied(), None)?;
                    next += 1;
                }
            }
        }
    }
    Ok((g, parts))
}
