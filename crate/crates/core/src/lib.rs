//! Exact computation of Macdonald polynomials through multiline queues and
//! queue-inversion tableaux, together with the multispecies ASEP and TAZRP
//! whose stationary laws they describe.

pub mod engines;
pub mod error;
pub mod fillings;
pub mod json;
pub mod mlq;
pub mod parse;
pub mod processes;
pub mod qtalg;
pub mod shapes;

pub use error::{Error, Result};
