//! Variance of characteristic-polynomial coefficients of 4-regular quantum
//! graphs with DFT vertex scattering, computed three ways: by k-averaging
//! `|a_n(k)|^2`, by counting primitive pseudo orbits, and by summing squared
//! principal minors of the bond scattering matrix.

pub mod classify;
pub mod error;
pub mod graph;
pub mod lyndon;
pub mod orbits;
pub mod quantize;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{build_binary_graph, orient_four_regular, validate_graph, Bond, BondId, DirectedGraph, VertexId};
pub use scalar::{Dyadic, Real};

/// Double-precision bond scattering matrix.
pub type Scattering = quantize::BondScattering<f64>;
/// Double-precision bond lengths.
pub type Lengths = quantize::BondLengths<f64>;
