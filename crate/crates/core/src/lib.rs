//! Theory schemata, similarity transformations and interpretational
//! invariance.
//!
//! A theory schema fixes a state set 𝒮 and a set 𝒦 of kinematically possible
//! maps. Similarity transformations ("spectacles") re-label states while
//! preserving 𝒦; statements that survive every such relabelling are the
//! interpretationally invariant ones. The crate checks these properties
//! exhaustively on finite schemata and by sampling on unitary and
//! Hamiltonian models.

pub mod decks;
pub mod error;
pub mod hamiltonian;
mod par;
pub mod propositions;
pub mod quantum;
pub mod schema;
pub mod shift;
pub mod similarity;

pub use error::{Error, Result};
