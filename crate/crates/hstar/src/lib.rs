//! Exact lattice-point geometry of Gorenstein fans: Ehrhart delta-series,
//! box points, toric g/h-polynomials and the local decomposition of the
//! delta-polynomial of a complete fan.

pub mod cone;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod poset;
pub mod ehrhart;
pub mod fan;

pub use error::{Error, Result};
