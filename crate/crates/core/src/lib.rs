//! Exact Birkhoff-James orthogonality, best approximation and
//! operator-to-subspace distances in polyhedral normed spaces.

pub mod error;
pub mod exactlp;
pub mod generate;
pub mod minimax;
pub mod operators;
pub mod oracle;
pub mod proximity;
pub mod schema;
pub mod space;
pub mod suite;

pub use error::{Error, Result};
