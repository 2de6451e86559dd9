pub mod constellations;
pub mod error;
pub mod geometry;
pub mod pipeline;
pub mod torsion;
pub mod zlattice;

pub use error::{Error, Result};
