//! Bernoulli bond percolation on the weight field shared with the invasion:
//! an edge is `p`-open iff `τ(e) < p`.

pub mod cluster;
pub mod connectivity;
pub mod crossing;
pub mod duality;
pub mod sweep;

pub use cluster::{cluster_at, cluster_volume_capped, reaches_boundary, Cluster};
pub use connectivity::{estimate_arm, estimate_pi, estimate_theta, ThetaEstimate};
pub use crossing::{
    crossing_trial_seed, estimate_crossing, estimate_l, estimate_sigma, has_horizontal_crossing,
    CorrelationRow, CorrelationTable, LConfig, SideBonds,
};
pub use duality::{check_anp, AnpResult, CircuitReport};
pub use sweep::{minimax_pond, SweepResult};
