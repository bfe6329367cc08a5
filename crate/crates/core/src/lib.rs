//! Entanglement criteria for multi-mode bosonic states.

pub mod bipartition;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod report;
pub mod state_spec;
pub mod states;
pub mod witness;

pub use bipartition::Bipartition;
pub use error::{Error, Result};
