pub mod chebyshev;
pub mod ensemble;
pub mod error;
pub mod measures;
pub mod moments_engine;
pub mod number_field;
pub mod quadrature;
pub mod rng;
pub mod selberg;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
