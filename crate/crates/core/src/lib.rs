//! Weakly conjugate operator toolkit for adjacency operators on Z^d-periodic
//! graphs and convolution operators on discrete groups.
//!
//! Everything that is an identity is checked in exact (Gaussian) rational
//! arithmetic; floating point is used only for band sampling and dense
//! eigensolves.

pub mod bloch;
pub mod certificate;
pub mod certify;
pub mod cli;
pub mod error;
pub mod graph;
pub mod group;
pub mod laurent;
pub mod linalg;
pub mod operators;
pub mod scalar;

pub use certificate::{Certificate, GroupElem, Witness};
pub use error::{Error, Result};
pub use graph::{load_graph, load_oriented_graph, load_vertex_function, Orientation, PeriodicGraph, Vertex, VertexFunction};
