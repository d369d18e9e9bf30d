//! Exact symbolic computation with braidings, quantum matrix algebras and their quantum
//! determinants over the rational-function field `Q(q)`.

pub mod error;
pub mod scalars;
pub mod tensorspace;
pub mod braidings;
pub mod symmetrizers;
pub mod ncalg;
pub mod qdet;
pub mod yangians;

pub use error::{Error, Result};
