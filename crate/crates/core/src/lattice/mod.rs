//! Lattice points, Hilbert and weight grids, semigroups of values and germs.

mod germ;
mod grid;
mod hilbert;
mod point;
mod semigroup;

pub use germ::{Germ, MAX_BOUND_RETRIES};
pub use grid::Grid;
pub use hilbert::{
    delta, gorenstein_symmetry, restrict_to_subcurve, weight_from_hilbert, HilbertGrid,
    WeightGrid,
};
pub use point::{LatticePoint, RectIter, Rectangle};
pub use semigroup::{
    detect_conductor, extend_semigroup, hilbert_from_semigroup, numerical_semigroup,
    semigroup_from_hilbert, validate_semigroup_consistency, SemigroupTable,
};
