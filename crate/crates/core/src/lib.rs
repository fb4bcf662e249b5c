//! Orbit classification for the lit-only σ-game ("flipping puzzle") on graphs
//! made of an induced path `s_1 … s_{n-1}` plus one extra vertex `s_n`.
//!
//! The closed-form classifier in [`classify`] decides reachability between
//! configurations without search. The brute-force [`oracle`] enumerates
//! orbits directly and is used to check the classifier exhaustively on small
//! graphs.

pub mod basis;
pub mod classify;
pub mod config;
pub mod error;
pub mod forms;
pub mod gf2;
pub mod graph;
pub mod oracle;
pub mod summary;

pub use basis::{Parity, PiSystem, SimpleBasis, WeightIndexSets};
pub use classify::{Classifier, OrbitLabel, OrbitTable, Side};
pub use config::Config;
pub use error::{Error, Result};
pub use graph::GraphSpec;
