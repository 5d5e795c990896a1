pub mod arith;
pub mod audit;
pub mod cli;
pub mod design;
pub mod detach;
pub mod error;
pub mod factorize;
pub mod flow;
pub mod hypergraph;
pub mod io;
pub mod laminar;
pub mod verify;

pub use error::{Error, Result};
