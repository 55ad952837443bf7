//! Strong colorings and independent transversals of (random) graphs.
//!
//! Every constructive routine in this crate returns an object that can be
//! checked in polynomial time against its definition: transversals are
//! verified by [`transversal::verify_transversal`] and colorings by
//! [`coloring::verify_certificate`]. Small instances can additionally be
//! decided exactly with the backtracking oracles in [`coloring::exact`].

pub mod bitset;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod io;
pub mod lemmas;
pub mod matching;
pub mod rng;
pub mod transversal;

pub use error::{Error, Result};
pub use graph::{GnpConfig, Graph, VertexPartition};
