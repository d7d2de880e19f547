//! Closed dual circuits around the origin.
//!
//! Let `K` be the set of vertices joined to `∂B(M)` by `p`-open paths. The
//! checker grows nested territories from the origin: each is the `p`-open
//! cluster of the previous one together with its non-`K` neighbours across
//! closed edges. Every edge leaving a territory is `p`-closed, so the outer
//! boundary of each (holes filled) is a `p`-closed dual circuit around `O`.
//! The last territory is the whole component of `O` in `B(M) \ K`, whose
//! boundary circuit encloses every other closed circuit around `O` in the
//! box; its diameter is therefore the largest available.
//!
//! Diameters are measured on the dual vertices of a circuit. Extremes of a
//! linear functional over the filled region are attained on the territory
//! itself, so they follow from running extremes of the territory.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, Vertex, ORIGIN};
use crate::percolation::cluster::check_p;
use crate::weights::WeightField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitReport {
    pub diameter_l1: u32,
    pub diameter_linf: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnpResult {
    /// A traced circuit has L1 diameter at least `n`.
    pub exists: bool,
    pub max_diameter_l1: u32,
    pub max_diameter_linf: u32,
    /// The nested family, innermost first.
    pub circuits: Vec<CircuitReport>,
}

impl AnpResult {
    pub fn any_circuit(&self) -> bool {
        !self.circuits.is_empty()
    }
}

#[derive(Clone, Copy)]
struct Extremes {
    sum: (i64, i64),
    diff: (i64, i64),
    x: (i64, i64),
    y: (i64, i64),
}

impl Extremes {
    fn at(v: Vertex) -> Self {
        let (x, y) = (v.x as i64, v.y as i64);
        Extremes {
            sum: (x + y, x + y),
            diff: (x - y, x - y),
            x: (x, x),
            y: (y, y),
        }
    }

    fn include(&mut self, v: Vertex) {
        let (x, y) = (v.x as i64, v.y as i64);
        let widen = |r: &mut (i64, i64), t: i64| {
            r.0 = r.0.min(t);
            r.1 = r.1.max(t);
        };
        widen(&mut self.sum, x + y);
        widen(&mut self.diff, x - y);
        widen(&mut self.x, x);
        widen(&mut self.y, y);
    }

    /// Diameters of the dual circuit enclosing the filled region: its dual
    /// vertices reach half a unit beyond the region on every side.
    fn circuit(&self) -> CircuitReport {
        let span = |r: (i64, i64)| (r.1 - r.0) as u32;
        CircuitReport {
            diameter_l1: span(self.sum).max(span(self.diff)) + 2,
            diameter_linf: span(self.x).max(span(self.y)) + 1,
        }
    }
}

const UNSEEN: u8 = 0;
const LINKED: u8 = 1;
const TERRITORY: u8 = 2;

/// Event `A_{n,p}` inside `B(m)`: a `p`-closed dual circuit around the
/// origin with diameter at least `n`.
pub fn check_anp(field: &WeightField, p: f64, n: u32, m: u32) -> Result<AnpResult> {
    check_p(p)?;
    if n > m {
        return Err(Error::Config(format!(
            "diameter threshold {n} exceeds box {m}"
        )));
    }
    if m == 0 {
        return Err(Error::DegenerateBox);
    }
    let region = LatticeBox::new(m)?;
    let mut state = vec![UNSEEN; region.vertex_count()];

    let mut stack: Vec<Vertex> = region
        .vertices()
        .filter(|&v| region.on_boundary(v))
        .collect();
    for v in &stack {
        state[region.index(*v)] = LINKED;
    }
    while let Some(v) = stack.pop() {
        for e in region.incident_edges(v) {
            let w = e.other(v);
            let wi = region.index(w);
            if state[wi] == UNSEEN && field.is_p_open(&e, p)? {
                state[wi] = LINKED;
                stack.push(w);
            }
        }
    }
    let empty = AnpResult {
        exists: false,
        max_diameter_l1: 0,
        max_diameter_linf: 0,
        circuits: Vec::new(),
    };
    if state[region.index(ORIGIN)] == LINKED {
        return Ok(empty);
    }

    let mut circuits = Vec::new();
    let mut extremes = Extremes::at(ORIGIN);
    let mut seeds = vec![ORIGIN];
    state[region.index(ORIGIN)] = TERRITORY;
    let mut crossed = Vec::new();
    while !seeds.is_empty() {
        let mut stack = std::mem::take(&mut seeds);
        while let Some(v) = stack.pop() {
            extremes.include(v);
            for e in region.incident_edges(v) {
                let w = e.other(v);
                let wi = region.index(w);
                if state[wi] != UNSEEN {
                    continue;
                }
                if field.is_p_open(&e, p)? {
                    state[wi] = TERRITORY;
                    stack.push(w);
                } else {
                    crossed.push(w);
                }
            }
        }
        circuits.push(extremes.circuit());
        for w in crossed.drain(..) {
            let wi = region.index(w);
            if state[wi] == UNSEEN {
                state[wi] = TERRITORY;
                seeds.push(w);
            }
        }
    }
    let last = *circuits.last().expect("origin is enclosed");
    Ok(AnpResult {
        exists: last.diameter_l1 >= n,
        max_diameter_l1: last.diameter_l1,
        max_diameter_linf: last.diameter_linf,
        circuits,
    })
}
