//! Invasion percolation, first-pond extraction and the pond partition.
//!
//! The invaded graph grows by repeatedly adding the minimum-weight edge of
//! its outer boundary `ΔG_i`: every edge not yet invaded with at least one
//! invaded endpoint. That includes edges joining two invaded vertices, which
//! add no vertex but are still part of `E_i`. Each edge is pushed onto the
//! frontier heap exactly once, when its first endpoint is invaded, so the
//! heap always holds `ΔG_i` restricted to the simulation box.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Edge, LatticeBox, Vertex};
use crate::unionfind::UnionFind;
use crate::weights::{order_key, WeightField};

/// Critical bond probability of the square lattice.
pub const CRITICAL_P: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct FrontierEntry {
    key: (u64, u64),
    edge: Edge,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvadedEdge {
    pub edge: Edge,
    pub weight: f64,
    /// `|V_i|` just before this edge was added.
    pub vertices_before: usize,
    pub new_vertex: Option<Vertex>,
}

/// Largest weight invaded so far; `index` is its position in `E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunningMax {
    pub index: usize,
    pub edge: Edge,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct InvasionState<'f> {
    field: &'f WeightField,
    start: Vertex,
    region: LatticeBox,
    invaded: Vec<bool>,
    vertices: Vec<Vertex>,
    // prefix maxima of (L1, L∞) norms over `vertices`
    radius_prefix: Vec<(u32, u32)>,
    edges: Vec<InvadedEdge>,
    frontier: BinaryHeap<Reverse<FrontierEntry>>,
    running_max: Option<RunningMax>,
    touched: bool,
    ties: u64,
}

impl<'f> InvasionState<'f> {
    pub fn new(field: &'f WeightField, start: Vertex, region: LatticeBox) -> Result<Self> {
        if !region.contains(start) {
            return Err(Error::OutOfRegion(start));
        }
        let mut state = InvasionState {
            field,
            start,
            region,
            invaded: vec![false; region.vertex_count()],
            vertices: Vec::new(),
            radius_prefix: Vec::new(),
            edges: Vec::new(),
            frontier: BinaryHeap::new(),
            running_max: None,
            touched: false,
            ties: 0,
        };
        state.absorb(start)?;
        Ok(state)
    }

    fn push(&mut self, e: Edge) -> Result<()> {
        let w = self.field.weight(&e)?;
        self.frontier.push(Reverse(FrontierEntry {
            key: order_key(w, e.id()),
            edge: e,
        }));
        Ok(())
    }

    fn absorb(&mut self, v: Vertex) -> Result<()> {
        self.invaded[self.region.index(v)] = true;
        let (l1, linf) = self.radius_prefix.last().copied().unwrap_or((0, 0));
        self.radius_prefix
            .push((l1.max(v.l1()), linf.max(v.linf())));
        self.vertices.push(v);
        self.touched |= self.region.on_boundary(v);
        let region = self.region;
        for e in region.incident_edges(v) {
            // an edge to an invaded vertex is already on the frontier or in E
            if !self.invaded[region.index(e.other(v))] {
                self.push(e)?;
            }
        }
        Ok(())
    }

    /// Adds the minimum-weight frontier edge.
    pub fn invade_step(&mut self) -> Result<InvadedEdge> {
        let Reverse(entry) = self.frontier.pop().ok_or(Error::ExhaustedRegion)?;
        if let Some(Reverse(next)) = self.frontier.peek() {
            debug_assert!(next.key >= entry.key, "greedy order violated");
            if next.key.0 == entry.key.0 {
                self.ties += 1;
            }
        }
        let weight = f64::from_bits(entry.key.0);
        let edge = entry.edge;
        let (a, b) = edge.endpoints();
        let new_vertex = if !self.invaded[self.region.index(a)] {
            Some(a)
        } else if !self.invaded[self.region.index(b)] {
            Some(b)
        } else {
            None
        };
        let record = InvadedEdge {
            edge,
            weight,
            vertices_before: self.vertices.len(),
            new_vertex,
        };
        if self.running_max.is_none_or(|m| weight > m.weight) {
            self.running_max = Some(RunningMax {
                index: self.edges.len(),
                edge,
                weight,
            });
        }
        self.edges.push(record);
        if let Some(v) = new_vertex {
            self.absorb(v)?;
        }
        Ok(record)
    }

    /// Enlarges the simulation box. Edges that were clipped at the old
    /// boundary join the frontier, so the run continues exactly as if it had
    /// been started in the larger box.
    pub fn grow(&mut self, region: LatticeBox) -> Result<()> {
        let old = self.region;
        if region.half_width() < old.half_width() {
            return Err(Error::Config("cannot shrink the invasion region".into()));
        }
        let mut invaded = vec![false; region.vertex_count()];
        for &v in &self.vertices {
            invaded[region.index(v)] = true;
        }
        self.invaded = invaded;
        self.region = region;
        self.touched = self.vertices.iter().any(|&v| region.on_boundary(v));
        let rim: Vec<Vertex> = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| old.on_boundary(v))
            .collect();
        for v in rim {
            for e in region.incident_edges(v) {
                if !old.contains(e.other(v)) {
                    self.push(e)?;
                }
            }
        }
        Ok(())
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn region(&self) -> LatticeBox {
        self.region
    }

    /// `V_i` in invasion order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// `E_i` in invasion order.
    pub fn edges(&self) -> &[InvadedEdge] {
        &self.edges
    }

    pub fn is_invaded(&self, v: Vertex) -> bool {
        self.region.contains(v) && self.invaded[self.region.index(v)]
    }

    /// Current frontier, sorted by (weight, id).
    pub fn frontier(&self) -> Vec<Edge> {
        let mut entries: Vec<_> = self.frontier.iter().map(|Reverse(f)| *f).collect();
        entries.sort();
        entries.into_iter().map(|f| f.edge).collect()
    }

    pub fn running_max(&self) -> Option<RunningMax> {
        self.running_max
    }

    /// Whether an invaded vertex lies on the boundary of the region.
    pub fn touched_boundary(&self) -> bool {
        self.touched
    }

    pub fn steps(&self) -> usize {
        self.edges.len()
    }

    /// Frontier pops whose weight equalled the next frontier weight.
    pub fn ties(&self) -> u64 {
        self.ties
    }

    /// L1 and L∞ radius of the first `count` invaded vertices.
    fn prefix_radius(&self, count: usize) -> (u32, u32) {
        self.radius_prefix[count - 1]
    }
}

/// Box schedule for [`extract_first_pond`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoxPolicy {
    pub initial: u32,
    pub max: u32,
    /// A candidate pond is accepted in `B(M)` only if it fits in `B(M / margin - 1)`.
    pub margin: u32,
}

impl Default for BoxPolicy {
    fn default() -> Self {
        BoxPolicy {
            initial: 8,
            max: 4096,
            margin: 2,
        }
    }
}

impl BoxPolicy {
    /// Initial box `4 n`, maximum 4096.
    pub fn for_target(n: u32) -> Self {
        BoxPolicy {
            initial: (4 * n).max(2).next_power_of_two(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial < 2 || !self.initial.is_power_of_two() || !self.max.is_power_of_two() {
            return Err(Error::Config(format!(
                "box sizes must be powers of two >= 2 (initial {}, max {})",
                self.initial, self.max
            )));
        }
        if self.initial > self.max {
            return Err(Error::Config(format!(
                "initial box {} exceeds max box {}",
                self.initial, self.max
            )));
        }
        if self.margin < 2 {
            return Err(Error::Config("margin factor must be at least 2".into()));
        }
        Ok(())
    }
}

/// The first pond of a start vertex.
#[derive(Clone, Debug, Serialize)]
pub struct Pond {
    pub start: Vertex,
    /// `τ̂`, the weight of the outlet.
    pub level: f64,
    pub outlet: Edge,
    /// `V̂`, in invasion order.
    pub vertices: Vec<Vertex>,
    /// `Ê`, in invasion order.
    pub edges: Vec<Edge>,
    pub radius_l1: u32,
    pub radius_linf: u32,
    pub volume: usize,
    pub censored: bool,
    pub box_used: u32,
    /// Candidate level at each box tried, in order.
    pub candidate_levels: Vec<(u32, f64)>,
    /// Edges invaded up to the stopping time.
    pub steps: usize,
    pub ties: u64,
}

/// Runs the invasion from `start` until its first pond can be certified.
///
/// In box `B(M)` the invasion runs until it touches `∂B(M)`. The running
/// maximum is then the candidate outlet and the region invaded strictly
/// before it the candidate pond. The candidate is accepted if its level
/// exceeds `p_c` and it fits in `B(M / margin - 1)`; otherwise the box is
/// doubled and the same invasion resumes. At `policy.max` the last
/// candidate is returned with `censored = true`.
pub fn extract_first_pond(field: &WeightField, start: Vertex, policy: BoxPolicy) -> Result<Pond> {
    policy.validate()?;
    if start.linf() >= policy.initial {
        return Err(Error::OutOfRegion(start));
    }
    let mut m = policy.initial;
    let mut state = InvasionState::new(field, start, LatticeBox::new(m)?)?;
    let mut candidate_levels = Vec::new();
    loop {
        while !state.touched_boundary() {
            state.invade_step()?;
        }
        let max = state
            .running_max()
            .expect("touching the boundary takes at least one step");
        candidate_levels.push((m, max.weight));
        let pond_size = state.edges()[max.index].vertices_before;
        let (_, linf) = state.prefix_radius(pond_size);
        let fits = (linf as i64) < (m / policy.margin) as i64;
        let accept = fits && max.weight > CRITICAL_P;
        if accept || m >= policy.max {
            return Ok(build_pond(&state, max, !accept, m, candidate_levels));
        }
        m *= 2;
        state.grow(LatticeBox::new(m)?)?;
    }
}

fn build_pond(
    state: &InvasionState<'_>,
    max: RunningMax,
    censored: bool,
    box_used: u32,
    candidate_levels: Vec<(u32, f64)>,
) -> Pond {
    let size = state.edges()[max.index].vertices_before;
    let (radius_l1, radius_linf) = state.prefix_radius(size);
    debug_assert!(
        state.edges()[max.index + 1..]
            .iter()
            .all(|e| e.weight < max.weight),
        "edge invaded after the outlet exceeds the outlet level"
    );
    Pond {
        start: state.start(),
        level: max.weight,
        outlet: max.edge,
        vertices: state.vertices()[..size].to_vec(),
        edges: state.edges()[..max.index].iter().map(|e| e.edge).collect(),
        radius_l1,
        radius_linf,
        volume: size,
        censored,
        box_used,
        candidate_levels,
        steps: state.steps(),
        ties: state.ties(),
    }
}

/// Finite-volume pond partition of `B(n)`.
#[derive(Clone, Debug)]
pub struct Partition {
    inner: LatticeBox,
    outer: u32,
    labels: Vec<u32>,
    vertex_levels: Vec<f64>,
    levels: Vec<f64>,
}

impl Partition {
    pub fn inner(&self) -> LatticeBox {
        self.inner
    }

    pub fn outer(&self) -> u32 {
        self.outer
    }

    pub fn label(&self, v: Vertex) -> Option<u32> {
        self.inner
            .contains(v)
            .then(|| self.labels[self.inner.index(v)])
    }

    /// Final level `τ̂_M(v)`: the minimax weight from `v` to `∂B(M)`.
    pub fn vertex_level(&self, v: Vertex) -> Option<f64> {
        self.inner
            .contains(v)
            .then(|| self.vertex_levels[self.inner.index(v)])
    }

    pub fn class_count(&self) -> usize {
        self.levels.len()
    }

    pub fn class_level(&self, label: u32) -> f64 {
        self.levels[label as usize]
    }

    /// Labels indexed like `inner().vertices()`.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

/// Labels every vertex of `B(n)` by its pond: the maximal connected set of
/// vertices sharing its final level, where the final level of `v` is the
/// minimax weight of paths from `v` to `∂B(outer)`.
///
/// Levels come from one sweep over the edges of `B(outer)` in weight order:
/// the moment a component first merges with the boundary, the merging edge
/// weight is the level of every vertex in it.
pub fn pond_partition(field: &WeightField, n: u32, outer: u32) -> Result<Partition> {
    if n == 0 {
        return Err(Error::DegenerateBox);
    }
    if outer < 2 * n {
        return Err(Error::Config(format!(
            "outer box {outer} must be at least 2n = {}",
            2 * n
        )));
    }
    let outer_box = LatticeBox::new(outer)?;
    let levels_outer = sweep_levels(field, outer_box)?;

    let inner = LatticeBox::new(n)?;
    let vertex_levels: Vec<f64> = inner
        .vertices()
        .map(|v| levels_outer[outer_box.index(v)])
        .collect();
    let mut labels = vec![u32::MAX; inner.vertex_count()];
    let mut levels = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..inner.vertex_count() {
        if labels[seed] != u32::MAX {
            continue;
        }
        let label = levels.len() as u32;
        let level = vertex_levels[seed];
        levels.push(level);
        labels[seed] = label;
        queue.push_back(inner.vertex(seed));
        while let Some(v) = queue.pop_front() {
            for e in inner.incident_edges(v) {
                let w = inner.index(e.other(v));
                if labels[w] == u32::MAX && vertex_levels[w] == level {
                    labels[w] = label;
                    queue.push_back(e.other(v));
                }
            }
        }
    }
    Ok(Partition {
        inner,
        outer,
        labels,
        vertex_levels,
        levels,
    })
}

/// Minimax weight to `∂B` for every vertex of the box (NaN on the boundary).
fn sweep_levels(field: &WeightField, region: LatticeBox) -> Result<Vec<f64>> {
    let count = region.vertex_count();
    let sink = count;
    let mut uf = UnionFind::new(count + 1);
    // member lists threaded through `next`, one per root
    let mut next = vec![usize::MAX; count + 1];
    let mut tail: Vec<usize> = (0..=count).collect();
    let mut level = vec![f64::NAN; count];
    let mut pending = 0usize;
    for v in region.vertices() {
        if region.on_boundary(v) {
            uf.union(region.index(v), sink);
        } else {
            pending += 1;
        }
    }
    let mut edges = region
        .edges()
        .map(|e| Ok((order_key(field.weight(&e)?, e.id()), e)))
        .collect::<Result<Vec<_>>>()?;
    edges.sort_unstable_by_key(|(k, _)| *k);

    for ((bits, _), e) in edges {
        if pending == 0 {
            break;
        }
        let (a, b) = (region.index(e.low()), region.index(e.high()));
        let (ra, rb) = (uf.find(a), uf.find(b));
        if ra == rb {
            continue;
        }
        let rs = uf.find(sink);
        if ra == rs || rb == rs {
            let inland = if ra == rs { rb } else { ra };
            let w = f64::from_bits(bits);
            let mut cur = inland;
            while cur != usize::MAX {
                level[cur] = w;
                pending -= 1;
                cur = next[cur];
            }
        }
        let root = uf.union(ra, rb).expect("distinct roots");
        let other = if root == ra { rb } else { ra };
        next[tail[root]] = other;
        tail[root] = tail[other];
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::lattice::{Direction, ORIGIN};

    /// Explicit field on `B(half)` with distinct weights drawn from a seed,
    /// overridden where `overrides` says so.
    fn field_on(half: u32, seed: u64, overrides: &[(Edge, f64)]) -> WeightField {
        let prf = WeightField::pseudorandom(seed);
        let b = LatticeBox::new(half).unwrap();
        let mut entries: Vec<(Edge, f64)> =
            b.edges().map(|e| (e, prf.weight(&e).unwrap())).collect();
        for (e, w) in overrides {
            for entry in entries.iter_mut() {
                if entry.0 == *e {
                    entry.1 = *w;
                }
            }
        }
        WeightField::explicit(entries).unwrap()
    }

    fn at(v: Vertex, d: Direction) -> Edge {
        Edge::incident(v, d)
    }

    #[test]
    fn first_step_takes_the_argmin() {
        use Direction::*;
        let overrides = [
            (at(ORIGIN, East), 0.7),
            (at(ORIGIN, North), 0.2),
            (at(ORIGIN, West), 0.9),
            (at(ORIGIN, South), 0.4),
        ];
        let f = field_on(4, 1, &overrides);
        let mut s = InvasionState::new(&f, ORIGIN, LatticeBox::new(4).unwrap()).unwrap();
        assert_eq!(s.frontier().len(), 4);
        let step = s.invade_step().unwrap();
        assert_eq!(step.edge, at(ORIGIN, North));
        assert_eq!(step.new_vertex, Some(Vertex::new(0, 1)));
        let frontier: HashSet<Edge> = s.frontier().into_iter().collect();
        let up = Vertex::new(0, 1);
        let expected: HashSet<Edge> = [
            at(ORIGIN, East),
            at(ORIGIN, West),
            at(ORIGIN, South),
            at(up, East),
            at(up, North),
            at(up, West),
        ]
        .into_iter()
        .collect();
        assert_eq!(frontier, expected);
    }

    /// Rescans every boundary edge at each step.
    fn brute_force_sequence(f: &WeightField, region: LatticeBox, steps: usize) -> Vec<Edge> {
        let mut verts: HashSet<Vertex> = [ORIGIN].into_iter().collect();
        let mut taken: HashSet<Edge> = HashSet::new();
        let mut out = Vec::new();
        for _ in 0..steps {
            let best = region
                .edges()
                .filter(|e| !taken.contains(e))
                .filter(|e| verts.contains(&e.low()) || verts.contains(&e.high()))
                .min_by_key(|e| order_key(f.weight(e).unwrap(), e.id()))
                .unwrap();
            taken.insert(best);
            verts.insert(best.low());
            verts.insert(best.high());
            out.push(best);
        }
        out
    }

    #[test]
    fn matches_rescan_oracle() {
        for seed in 0..20 {
            let region = LatticeBox::new(5).unwrap();
            let f = field_on(5, seed, &[]);
            let mut s = InvasionState::new(&f, ORIGIN, region).unwrap();
            let steps = if seed == 0 { 10 } else { 60 };
            let ours: Vec<Edge> = (0..steps).map(|_| s.invade_step().unwrap().edge).collect();
            assert_eq!(ours, brute_force_sequence(&f, region, steps));
        }
    }

    #[test]
    fn exhausting_the_region_is_an_error() {
        let f = field_on(1, 3, &[]);
        let mut s = InvasionState::new(&f, ORIGIN, LatticeBox::new(1).unwrap()).unwrap();
        for _ in 0..12 {
            s.invade_step().unwrap();
        }
        assert_eq!(s.vertices().len(), 9);
        assert!(matches!(s.invade_step(), Err(Error::ExhaustedRegion)));
    }

    #[test]
    fn grow_resumes_like_a_fresh_run() {
        let f = WeightField::pseudorandom(77);
        let mut small = InvasionState::new(&f, ORIGIN, LatticeBox::new(4).unwrap()).unwrap();
        while !small.touched_boundary() {
            small.invade_step().unwrap();
        }
        small.grow(LatticeBox::new(32).unwrap()).unwrap();
        let mut big = InvasionState::new(&f, ORIGIN, LatticeBox::new(32).unwrap()).unwrap();
        for _ in 0..small.steps() {
            big.invade_step().unwrap();
        }
        for _ in 0..500 {
            assert_eq!(small.invade_step().unwrap(), big.invade_step().unwrap());
        }
        assert_eq!(small.vertices(), big.vertices());
    }

    #[test]
    fn singleton_pond_when_origin_is_walled_in() {
        use Direction::*;
        // low escape edge East, then a cheap corridor to the boundary of B(3)
        let mut overrides = vec![
            (at(ORIGIN, East), 0.60),
            (at(ORIGIN, North), 0.97),
            (at(ORIGIN, West), 0.98),
            (at(ORIGIN, South), 0.99),
        ];
        let b = LatticeBox::new(3).unwrap();
        for (i, e) in b.edges().enumerate() {
            if !overrides.iter().any(|(o, _)| *o == e) {
                overrides.push((e, 0.01 + 0.0001 * i as f64));
            }
        }
        let f = WeightField::explicit(overrides).unwrap();
        // exhaustive minimax over paths from O to ∂B(3): every path leaves O
        // through one of its four edges and the rest costs < 0.1
        let pond = extract_first_pond(
            &f,
            ORIGIN,
            BoxPolicy {
                initial: 2,
                max: 2,
                margin: 2,
            },
        )
        .unwrap();
        assert_eq!(pond.vertices, vec![ORIGIN]);
        assert_eq!(pond.outlet, at(ORIGIN, East));
        assert_eq!(pond.level, 0.60);
        assert_eq!(pond.volume, 1);
        assert!(!pond.censored);
    }

    #[test]
    fn configuration_errors() {
        let f = WeightField::pseudorandom(1);
        let bad = [
            BoxPolicy {
                initial: 16,
                max: 8,
                margin: 2,
            },
            BoxPolicy {
                initial: 1,
                max: 8,
                margin: 2,
            },
            BoxPolicy {
                initial: 6,
                max: 8,
                margin: 2,
            },
            BoxPolicy {
                initial: 4,
                max: 8,
                margin: 1,
            },
        ];
        for p in bad {
            assert!(
                matches!(extract_first_pond(&f, ORIGIN, p), Err(Error::Config(_))),
                "{p:?}"
            );
        }
        assert!(matches!(pond_partition(&f, 4, 7), Err(Error::Config(_))));
        assert!(matches!(
            pond_partition(&f, 0, 7),
            Err(Error::DegenerateBox)
        ));
    }

    #[test]
    fn pond_invariants_on_random_fields() {
        let policy = BoxPolicy {
            initial: 4,
            max: 256,
            margin: 2,
        };
        for seed in 0..200 {
            let f = WeightField::pseudorandom(seed);
            let pond = extract_first_pond(&f, ORIGIN, policy).unwrap();
            assert_eq!(f.weight(&pond.outlet).unwrap(), pond.level);
            assert!(pond.edges.iter().all(|e| f.weight(e).unwrap() < pond.level));
            assert_eq!(pond.vertices[0], ORIGIN);
            assert_eq!(pond.volume, pond.vertices.len());
            assert_eq!(
                pond.radius_l1,
                crate::lattice::l1_radius(&pond.vertices).unwrap()
            );
            assert!(pond.candidate_levels.windows(2).all(|w| w[0].1 <= w[1].1));
            assert_eq!(pond.ties, 0);
            if !pond.censored {
                assert!(pond.level > CRITICAL_P);
                assert!(pond.vertices.iter().all(|v| v.linf() < pond.box_used - 1));
            }
        }
    }

    /// Minimax to the boundary of `B(half)` by enumerating every simple path
    /// that stays inside until its final step onto the boundary.
    fn brute_force_level(f: &WeightField, half: u32, v: Vertex) -> f64 {
        fn dfs(
            f: &WeightField,
            b: LatticeBox,
            v: Vertex,
            seen: &mut Vec<Vertex>,
            worst: f64,
            best: &mut f64,
        ) {
            if worst >= *best {
                return;
            }
            if b.on_boundary(v) {
                *best = worst;
                return;
            }
            for e in b.incident_edges(v) {
                let w = e.other(v);
                if !seen.contains(&w) {
                    seen.push(w);
                    dfs(f, b, w, seen, worst.max(f.weight(&e).unwrap()), best);
                    seen.pop();
                }
            }
        }
        let b = LatticeBox::new(half).unwrap();
        let mut best = f64::INFINITY;
        dfs(f, b, v, &mut vec![v], 0.0, &mut best);
        best
    }

    #[test]
    fn partition_matches_exhaustive_paths() {
        for seed in 0..10 {
            let f = field_on(2, 100 + seed, &[]);
            let part = pond_partition(&f, 1, 2).unwrap();
            let inner = LatticeBox::new(1).unwrap();
            for v in inner.vertices() {
                assert_eq!(
                    part.vertex_level(v).unwrap(),
                    brute_force_level(&f, 2, v),
                    "seed {seed} vertex {v}"
                );
            }
            // same class iff same level and adjacent-connected
            for a in inner.vertices() {
                for b in inner.vertices() {
                    let same = part.label(a) == part.label(b);
                    if same {
                        assert_eq!(part.vertex_level(a), part.vertex_level(b));
                    }
                }
            }
        }
    }

    #[test]
    fn partition_classes_are_connected_and_cover_the_box() {
        let f = WeightField::pseudorandom(9);
        let part = pond_partition(&f, 8, 32).unwrap();
        let inner = part.inner();
        assert!(part
            .labels()
            .iter()
            .all(|&l| (l as usize) < part.class_count()));
        for label in 0..part.class_count() as u32 {
            let members: Vec<Vertex> = inner
                .vertices()
                .filter(|&v| part.label(v) == Some(label))
                .collect();
            assert!(!members.is_empty());
            let set: HashSet<Vertex> = members.iter().copied().collect();
            let mut seen = HashSet::from([members[0]]);
            let mut stack = vec![members[0]];
            while let Some(v) = stack.pop() {
                for e in inner.incident_edges(v) {
                    let w = e.other(v);
                    if set.contains(&w) && seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            assert_eq!(seen.len(), members.len());
            assert!(members
                .iter()
                .all(|&v| part.vertex_level(v) == Some(part.class_level(label))));
        }
        // the pond of the origin from the invasion agrees where it fits
        let pond = extract_first_pond(
            &f,
            ORIGIN,
            BoxPolicy {
                initial: 32,
                max: 32,
                margin: 2,
            },
        )
        .unwrap();
        if !pond.censored {
            assert_eq!(part.vertex_level(ORIGIN), Some(pond.level));
        }
    }

    #[test]
    fn singleton_class_in_partition() {
        use Direction::*;
        let overrides = [
            (at(ORIGIN, East), 0.90),
            (at(ORIGIN, North), 0.91),
            (at(ORIGIN, West), 0.92),
            (at(ORIGIN, South), 0.93),
        ];
        let prf = WeightField::pseudorandom(5);
        let entries = LatticeBox::new(4).unwrap().edges().map(|e| {
            let w = overrides
                .iter()
                .find(|(o, _)| *o == e)
                .map_or(0.5 * prf.weight(&e).unwrap(), |o| o.1);
            (e, w)
        });
        let f = WeightField::explicit(entries).unwrap();
        let part = pond_partition(&f, 2, 4).unwrap();
        assert_eq!(part.vertex_level(ORIGIN), Some(0.90));
        let l = part.label(ORIGIN).unwrap();
        assert_eq!(
            part.inner()
                .vertices()
                .filter(|&v| part.label(v) == Some(l))
                .count(),
            1
        );
    }
}
