use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Edge, LatticeBox, Vertex};
use crate::unionfind::UnionFind;
use crate::weights::{order_key, WeightField};

/// Bottleneck connection of a vertex to `∂B(M)`.
#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    /// `τ̂_M`: the minimax weight over paths from the start to `∂B(M)`.
    pub level: f64,
    pub bottleneck: Edge,
    /// Component of the start among edges of weight `< τ̂_M`, sorted.
    pub pond: Vec<Vertex>,
}

/// Inserts the edges of `B(m)` in weight order into a union-find structure
/// in which all of `∂B(m)` is pre-joined to a virtual sink, stopping at the
/// edge that first connects `start` to the sink.
pub fn minimax_pond(field: &WeightField, start: Vertex, m: u32) -> Result<SweepResult> {
    let region = LatticeBox::new(m)?;
    if m == 0 || start.linf() >= m {
        return Err(Error::OutOfRegion(start));
    }
    let count = region.vertex_count();
    let sink = count;
    let mut uf = UnionFind::new(count + 1);
    for v in region.vertices().filter(|&v| region.on_boundary(v)) {
        uf.union(region.index(v), sink);
    }
    let mut edges = region
        .edges()
        .map(|e| Ok((order_key(field.weight(&e)?, e.id()), e)))
        .collect::<Result<Vec<_>>>()?;
    edges.sort_unstable_by_key(|(k, _)| *k);

    let s = region.index(start);
    for ((bits, _), e) in edges {
        let (a, b) = (region.index(e.low()), region.index(e.high()));
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        let (rs, rt) = (uf.find(s), uf.find(sink));
        if (ra == rs && rb == rt) || (ra == rt && rb == rs) {
            let mut pond: Vec<Vertex> = (0..count)
                .filter(|&i| uf.find(i) == rs)
                .map(|i| region.vertex(i))
                .collect();
            pond.sort_unstable();
            return Ok(SweepResult {
                level: f64::from_bits(bits),
                bottleneck: e,
                pond,
            });
        }
        uf.union(ra, rb);
    }
    unreachable!("every interior vertex connects to the boundary once all edges are in")
}
