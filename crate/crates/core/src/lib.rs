//! Invasion percolation on the square lattice, its first ponds, and the
//! Bernoulli bond percolation coupled to it through a shared weight field.
//!
//! With the default `parallel` feature, Monte Carlo samples are spread over
//! the current rayon pool; without it they run sequentially. Either way each
//! sample draws its field from a seed derived from the master seed and its
//! index, so results do not depend on scheduling.

pub mod error;
pub mod invasion;
pub mod lattice;
pub mod percolation;
pub mod sampling;
pub mod stats;
pub mod unionfind;
pub mod weights;

pub use error::{Error, Result};
pub use invasion::{
    extract_first_pond, pond_partition, BoxPolicy, InvasionState, Partition, Pond, CRITICAL_P,
};
pub use lattice::{Edge, EdgeId, LatticeBox, Vertex, ORIGIN};
pub use weights::WeightField;
