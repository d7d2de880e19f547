use crate::lattice::{EdgeId, Vertex};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} lies outside the simulation region")]
    OutOfRegion(Vertex),
    #[error("vertices {0} and {1} are not nearest neighbours")]
    NotNeighbours(Vertex, Vertex),
    #[error("radius of an empty vertex set is undefined")]
    EmptySet,
    #[error("box boundary requires n >= 1")]
    DegenerateBox,
    #[error("no weight recorded for edge {0:?}")]
    MissingWeight(EdgeId),
    #[error("frontier exhausted: the whole region has been invaded")]
    ExhaustedRegion,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("crossing probability at p = {p} did not reach 1 - eps = {target} by n = {n_max}")]
    Saturated { p: f64, target: f64, n_max: u32 },
    #[error("non-positive value {0} in log-log fit")]
    NonPositive(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
