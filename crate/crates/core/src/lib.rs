//! Jacobians of graphs together with their canonical duality pairings.
//!
//! The crate is `no_std` (with `alloc`) and contains the algorithmic core:
//!
//! * [`linalg`]: exact integer/rational matrices, Smith normal form, inverses.
//! * [`graph`]: Erdős–Rényi sampling and Laplacians.
//! * [`group`] and [`pairing`]: finite abelian groups, duality pairings on
//!   them, Sylow splitting, isomorphism testing and automorphism counts.
//! * [`classify`]: Wall/Miranda generator symbols and canonical classes.
//! * [`theory`]: closed-form predictions (normalizing constants, finite-n
//!   cokernel probabilities, moments).
//! * [`haar`]: Haar-random symmetric matrices over `Z/p^N` and their
//!   cokernel pairings.
//! * [`freq`]: mergeable frequency tables.
//!
//! IO, reports, parallel orchestration and the CLI live in the `jacpair`
//! companion crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod classify;
pub mod error;
pub mod freq;
pub mod graph;
pub mod group;
pub mod haar;
pub mod linalg;
pub mod pairing;
pub mod rng;
pub mod theory;

pub use classify::{Catalog, PairingClass, Symbol, SymbolKind};
pub use error::{Error, Result};
pub use freq::FrequencyTable;
pub use graph::{Graph, GraphSampleConfig};
pub use group::FiniteAbelianGroup;
pub use linalg::{IntMatrix, RationalMatrix, SnfResult};
pub use pairing::{PairingGram, SylowPairing};
