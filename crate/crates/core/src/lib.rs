//! Flag Kneser graphs of finite sets.
//!
//! A flag of `[n]` is a chain of nested non-empty proper subsets; two flags
//! are in general position when every cross pair of their members has empty
//! intersection or full union. `Γ(n,T)` is the graph on all flags of type `T`
//! with general position as adjacency; its independent sets are the
//! Erdős–Ko–Rado objects of interest here.
//!
//! The crate provides:
//! - ground-set combinatorics ([`flags`]),
//! - materialized graphs with dense bit adjacency ([`graph`]),
//! - the extremal family constructions F_i(n,a,b) ([`families`]),
//! - an exact independence/clique solver with exhaustive enumeration
//!   ([`solver`]),
//! - closed-form values, spectral and counting bounds, and a dispatcher that
//!   settles α by theorem where possible ([`bounds`]),
//! - symmetry-group orbits and equivalence classification of independent
//!   sets ([`symmetry`]).

pub mod bitset;
pub mod bounds;
pub mod combin;
pub mod error;
pub mod families;
pub mod flags;
pub mod graph;
pub mod solver;
pub mod symmetry;

mod canon;
mod serde_util;

pub use bitset::{BitMatrix, VertexSet};
pub use error::{Error, Result};
pub use flags::{GroundSize, TypeSet};
pub use graph::{BuildLimits, FlagGraph};
