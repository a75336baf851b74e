//! Code-deformation toolkit for quantum LDPC codes.
//!
//! The crate is `no_std` and needs only `alloc`. It covers sparse GF(2)
//! algebra, multigraphs with cycle bases, brute-force relative expansion,
//! the SkipTree basis transformation, stabilizer codes, auxiliary-graph
//! surgery, repetition-code adapters, Delaunay auxiliary graphs and the
//! toric-code adapter with its Dehn-twist CNOT.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod adapters;
pub mod delaunay;
mod error;
pub mod expansion;
pub mod gf2;
pub mod graph;
pub mod skiptree;
pub mod stabilizer;
pub mod surgery;
pub mod toric;

pub use error::{Error, Result};
pub use gf2::{Canonical, RowSpace, SparseBitMatrix, SparsityProfile};
pub use stabilizer::{PauliOperator, StabilizerCode};
pub use graph::{CycleBasis, Graph, SpanningTree};

