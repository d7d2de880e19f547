use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Edge, LatticeBox, Vertex};
use crate::weights::WeightField;

/// The `p`-open cluster of a vertex inside `B(M)`.
#[derive(Clone, Debug, Serialize)]
pub struct Cluster {
    pub root: Vertex,
    pub p: f64,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub radius_l1: u32,
    pub radius_linf: u32,
    pub volume: usize,
    /// Whether the cluster meets `∂B(M)`.
    pub touched_boundary: bool,
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("p = {p} outside [0, 1]")))
    }
}

/// Flood fill over edges with `τ < p` inside `B(m)`.
pub fn cluster_at(field: &WeightField, start: Vertex, p: f64, m: u32) -> Result<Cluster> {
    check_p(p)?;
    let region = LatticeBox::new(m)?;
    if !region.contains(start) {
        return Err(Error::OutOfRegion(start));
    }
    let mut seen = vec![false; region.vertex_count()];
    seen[region.index(start)] = true;
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for e in region.incident_edges(v) {
            if !field.is_p_open(&e, p)? {
                continue;
            }
            let w = e.other(v);
            if v == e.low() {
                edges.push(e);
            }
            let wi = region.index(w);
            if !seen[wi] {
                seen[wi] = true;
                vertices.push(w);
                queue.push_back(w);
            }
        }
    }
    let radius_l1 = vertices.iter().map(|v| v.l1()).max().unwrap_or(0);
    let radius_linf = vertices.iter().map(|v| v.linf()).max().unwrap_or(0);
    Ok(Cluster {
        root: start,
        p,
        volume: vertices.len(),
        touched_boundary: radius_linf == m,
        vertices,
        edges,
        radius_l1,
        radius_linf,
    })
}

/// Whether `start` reaches `∂B(m)` through `p`-open edges.
pub fn reaches_boundary(field: &WeightField, start: Vertex, p: f64, m: u32) -> Result<bool> {
    let region = LatticeBox::new(m)?;
    if !region.contains(start) {
        return Err(Error::OutOfRegion(start));
    }
    if region.on_boundary(start) {
        return Ok(true);
    }
    let mut seen = vec![false; region.vertex_count()];
    seen[region.index(start)] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for e in region.incident_edges(v) {
            let w = e.other(v);
            let wi = region.index(w);
            if seen[wi] || !field.is_p_open(&e, p)? {
                continue;
            }
            if region.on_boundary(w) {
                return Ok(true);
            }
            seen[wi] = true;
            stack.push(w);
        }
    }
    Ok(false)
}

/// Volume of the `p`-open cluster of `start` in `B(m)`, counting at most
/// `cap` vertices, and whether the explored part met `∂B(m)`.
pub fn cluster_volume_capped(
    field: &WeightField,
    start: Vertex,
    p: f64,
    m: u32,
    cap: usize,
) -> Result<(usize, bool)> {
    let region = LatticeBox::new(m)?;
    if !region.contains(start) {
        return Err(Error::OutOfRegion(start));
    }
    let mut seen = vec![false; region.vertex_count()];
    seen[region.index(start)] = true;
    let mut count = 1;
    let mut touched = region.on_boundary(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if count >= cap {
            break;
        }
        for e in region.incident_edges(v) {
            let w = e.other(v);
            let wi = region.index(w);
            if seen[wi] || !field.is_p_open(&e, p)? {
                continue;
            }
            seen[wi] = true;
            count += 1;
            touched |= region.on_boundary(w);
            stack.push(w);
        }
    }
    Ok((count.min(cap), touched))
}
