//! Planning and verification of MDS-IFR codes for heterogeneous distributed
//! storage.
//!
//! A storage network is reduced to its metric closure ([`netgraph`]). Each
//! coded block is replicated on the `ρ+1` vertices of one hyperedge of a
//! repair overlay ([`overlay`]); failed nodes are restored by uncoded,
//! exact block copies whose cheapest order is a contracted minimum spanning
//! tree ([`repair`]). Data collectors read from retrieval sets
//! ([`retrieval`]). The overlay, the retrieval sets and the per-hyperedge
//! block sizes are chosen jointly by an exact rational ILP, a Pareto
//! frontier enumerator or a polynomial heuristic ([`optimizer`]), and a
//! GF(256) outer code lets plans be executed on real bytes ([`erasure`]).
//!
//! The crate is `no_std` and only needs `alloc`. Vertices are 0-based
//! internally; the 1-based node ids of instance files are translated at
//! the IO boundary.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod erasure;
pub mod netgraph;
pub mod optimizer;
pub mod overlay;
pub mod rational;
pub mod repair;
pub mod retrieval;

pub use netgraph::{MetricClosure, NetworkSpec};
pub use overlay::RepairOverlay;
pub use rational::Rational;
pub use repair::{BlockAssignment, FailureModel, FailurePattern};
pub use retrieval::RetrievalConfig;
