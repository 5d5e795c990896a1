//! R-, (Q,R)- and almost-R-factorizations of complete designs, obtained by
//! detaching a one-vertex amalgamation whose edges are colored according to
//! a distribution matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binomial, pow};
use crate::design::{check_necessary, DesignSpec, DistributionMatrix, FactorSpec, MatrixProblem, Refusal};
use crate::detach::Detacher;
use crate::error::Error;
use crate::hypergraph::{EdgeId, Hypergraph, NumberFunction, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// Every factor `i` is `r_i`-regular.
    R,
    /// Factor `i` has degrees in `[q_i, r_i]`.
    Qr,
    /// Factor `i` has degrees in `[r_i − 1, r_i]`.
    Almost,
}

#[derive(Debug, Error)]
pub enum FactorizeError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("refused: {0}")]
    Refused(Refusal),
}

/// A `k`-edge-colored design whose color classes are the factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub kind: FactorKind,
    pub design: Hypergraph,
    /// Vertex classes of a multipartite design.
    pub parts: Option<Vec<Vec<VertexId>>>,
    pub matrix: DistributionMatrix,
}

impl Factorization {
    /// The factors, one per color.
    pub fn factors(&self) -> Vec<Hypergraph> {
        (1..=self.design.class_count())
            .map(|j| self.design.color_class(j).expect("color within range"))
            .collect()
    }

    /// `table[i][v]` is the degree of `v` in factor `i + 1`.
    pub fn degree_table(&self) -> Vec<BTreeMap<VertexId, usize>> {
        self.factors().iter().map(Hypergraph::degrees).collect()
    }
}

/// One vertex carrying `λ_j C(n,h_j) p^{h_j}` edges of `h_j` hinges each;
/// the first `a_1j` of size `h_j` get color 1, the next `a_2j` color 2, and
/// so on.
fn amalgamated_design(spec: &DesignSpec, p: u64, matrix: &DistributionMatrix) -> Result<Hypergraph, Error> {
    let k = matrix.rows.len() as u32;
    let mut f = Hypergraph::colored(k).with_vertices([VertexId(0)])?;
    let mut next = 0u32;
    for (j, (&h, &l)) in spec.sizes.iter().zip(&spec.lambda).enumerate() {
        let count = l * binomial(spec.n, h) * pow(p, h);
        let mut colors = matrix
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| std::iter::repeat_n(i as u32 + 1, row[j] as usize));
        for _ in 0..count {
            let color = colors
                .next()
                .ok_or_else(|| Error::InvalidFactors("distribution matrix column too small".into()))?;
            f.add_edge(EdgeId(next), std::iter::repeat_n(VertexId(0), h as usize), Some(color))?;
            next += 1;
        }
    }
    Ok(f)
}

/// Factorizes with an explicit detacher (vertex order, audits).
pub fn factorize_with(
    spec: &DesignSpec,
    fac: &FactorSpec,
    kind: FactorKind,
    detacher: &Detacher,
) -> Result<Factorization, FactorizeError> {
    let verdict = check_necessary(spec, fac)?;
    if let Some(why) = verdict.failures.into_iter().next() {
        return Err(FactorizeError::Refused(why));
    }
    let p = spec.uniform_part().expect("necessary conditions ensure equal parts");
    let matrix = MatrixProblem::new(spec, fac)?
        .solve()
        .map_err(|why| FactorizeError::Refused(Refusal::DistributionMatrix(why)))?;

    let f = amalgamated_design(spec, p, &matrix)?;
    let n = u32::try_from(spec.n).map_err(|_| Error::InvalidDesign("n too large".into()))?;
    let stage1 = detacher.run(&f, &NumberFunction::uniform([VertexId(0)], n)?)?;
    if !spec.is_partite() {
        return Ok(Factorization {
            kind,
            design: stage1.graph,
            parts: None,
            matrix,
        });
    }
    let p = u32::try_from(p).map_err(|_| Error::InvalidDesign("part size too large".into()))?;
    let stage2 = detacher.run(&stage1.graph, &NumberFunction::uniform(stage1.graph.vertices(), p)?)?;
    let parts = stage1.graph.vertices().map(|a| stage2.psi.preimage(a)).collect();
    Ok(Factorization {
        kind,
        design: stage2.graph,
        parts: Some(parts),
        matrix,
    })
}

/// `ΛK_n^H` (or its multipartite analogue) as `k` factors with factor `i`
/// `r_i`-regular.
pub fn r_factorize(spec: &DesignSpec, r: &[u64]) -> Result<Factorization, FactorizeError> {
    factorize_with(spec, &FactorSpec::regular(r.to_vec()), FactorKind::R, &Detacher::default())
}

/// Factor `i` has every degree in `[q_i, r_i]`.
pub fn qr_factorize(spec: &DesignSpec, q: &[u64], r: &[u64]) -> Result<Factorization, FactorizeError> {
    let fac = FactorSpec::interval(q.to_vec(), r.to_vec());
    factorize_with(spec, &fac, FactorKind::Qr, &Detacher::default())
}

/// Factor `i` has every degree in `[r_i − 1, r_i]`.
pub fn almost_factorize(spec: &DesignSpec, r: &[u64]) -> Result<Factorization, FactorizeError> {
    let fac = FactorSpec::almost(r.to_vec())?;
    factorize_with(spec, &fac, FactorKind::Almost, &Detacher::default())
}

/// Multipartite R-factorization; `spec` must carry part sizes.
pub fn partite_r_factorize(spec: &DesignSpec, r: &[u64]) -> Result<Factorization, FactorizeError> {
    if !spec.is_partite() {
        return Err(Error::InvalidDesign("partite factorization needs part sizes".into()).into());
    }
    r_factorize(spec, r)
}
