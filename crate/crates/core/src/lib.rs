pub mod analysis;
pub mod cli;
pub mod edgeworth;
pub mod error;
pub mod grid;
pub mod identities;
pub mod mp_functionals;
pub mod normal;
pub mod quadrature;
pub mod simulation;

pub use error::{Error, Result};
