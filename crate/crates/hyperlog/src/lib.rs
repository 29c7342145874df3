//! Symbol calculus and numerical iterated integrals for the hyperlogarithm
//! identities carried by conic fibrations on del Pezzo surfaces.

pub mod error;
pub mod model;
pub mod numeric;
pub mod poly;
pub mod quadrature;
pub mod words;

pub use error::{HyperlogError, Result};
