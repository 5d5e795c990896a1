use thiserror::Error;

use crate::hypergraph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {0} has no hinges")]
    EmptyEdge(EdgeId),
    #[error("hypergraph has no edge coloring")]
    MissingColoring,
    #[error("edge {edge} has no color but the hypergraph is {colors}-colored")]
    UncoloredEdge { edge: EdgeId, colors: u32 },
    #[error("edge {edge} carries a color but the hypergraph is uncolored")]
    UnexpectedColor { edge: EdgeId },
    #[error("color {color} is outside 1..={colors}")]
    ColorOutOfRange { color: u32, colors: u32 },
    #[error("number function value g({0}) must be at least 1")]
    ZeroNumber(VertexId),
    #[error("number function has no value for vertex {0}")]
    MissingNumber(VertexId),
    #[error("amalgamation map has no image for vertex {0}")]
    MissingImage(VertexId),
    #[error("number function is not simple: |H({vertex},{edge})| = {hinges} > g({vertex}) = {g}")]
    NotSimple { vertex: VertexId, edge: EdgeId, hinges: usize, g: u32 },
    #[error("g({vertex}) = {g} is too small to split")]
    NothingToSplit { vertex: VertexId, g: u32 },
    #[error("set family member is not contained in the ground set")]
    SetOutsideGround,
    #[error("set family is not laminar: {0:?} and {1:?} cross")]
    NotLaminar(Vec<usize>, Vec<usize>),
    #[error("split denominator must be positive")]
    ZeroParts,
    #[error("ground set of {0} elements is too large for exhaustive search")]
    GroundTooLarge(usize),
    #[error("split constraints are infeasible; the families are not laminar or the flow solver is wrong")]
    SplitInfeasible,
    #[error("invalid design specification: {0}")]
    InvalidDesign(String),
    #[error("invalid factor specification: {0}")]
    InvalidFactors(String),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}
