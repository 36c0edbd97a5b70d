//! Invariants of reduced curve germs computed from the Hilbert function of the
//! valuative filtration: weight grids, lattice homology, refined E1 entries of the
//! level filtration, motivic Poincaré series and Cohen-Macaulay type.

pub mod catalog;
pub mod classifier;
pub mod cubical;
pub mod error;
pub mod lattice;
pub mod motivic;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
