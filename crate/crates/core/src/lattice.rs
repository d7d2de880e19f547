//! Square-lattice geometry.
//!
//! Vertices live in `Z^2` with coordinates bounded by [`MAX_HALF_WIDTH`].
//! Boxes `B(n) = [-n, n]^2` use the L∞ norm, while pond radii use the L1
//! norm; both are exposed here and every report names the norm it uses.
//!
//! An edge is identified by its lexicographically smaller endpoint plus an
//! orientation bit, which gives a translation-friendly canonical id that
//! does not depend on any simulation box.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible `|x|` or `|y|`.
pub const MAX_HALF_WIDTH: i32 = 1 << 20;

const ID_SPAN: u64 = 2 * MAX_HALF_WIDTH as u64 + 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

impl Vertex {
    pub const fn new(x: i32, y: i32) -> Self {
        Vertex { x, y }
    }

    pub fn l1(self) -> u32 {
        self.x.unsigned_abs() + self.y.unsigned_abs()
    }

    pub fn linf(self) -> u32 {
        self.x.unsigned_abs().max(self.y.unsigned_abs())
    }

    pub fn step(self, dir: Direction) -> Vertex {
        let (dx, dy) = dir.offset();
        Vertex::new(self.x + dx, self.y + dy)
    }

    fn in_id_range(self) -> bool {
        self.linf() <= MAX_HALF_WIDTH as u32
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Neighbour directions in the fixed order used throughout: E, N, W, S.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    East,
    North,
    West,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::East,
        Direction::North,
        Direction::West,
        Direction::South,
    ];

    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::East => (1, 0),
            Direction::North => (0, 1),
            Direction::West => (-1, 0),
            Direction::South => (0, -1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

/// A nearest-neighbour bond, stored by its smaller endpoint and orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    low: Vertex,
    orientation: Orientation,
}

impl Edge {
    /// Builds the edge `<a, b>`; the order of the endpoints is irrelevant.
    pub fn new(a: Vertex, b: Vertex) -> Result<Edge> {
        let (low, high) = if a <= b { (a, b) } else { (b, a) };
        let orientation = match (high.x - low.x, high.y - low.y) {
            (1, 0) => Orientation::Horizontal,
            (0, 1) => Orientation::Vertical,
            _ => return Err(Error::NotNeighbours(a, b)),
        };
        if !high.in_id_range() || !low.in_id_range() {
            return Err(Error::OutOfRegion(if low.in_id_range() {
                high
            } else {
                low
            }));
        }
        Ok(Edge { low, orientation })
    }

    pub fn from_low(low: Vertex, orientation: Orientation) -> Edge {
        Edge { low, orientation }
    }

    /// Edge leaving `v` in direction `dir`.
    pub fn incident(v: Vertex, dir: Direction) -> Edge {
        match dir {
            Direction::East => Edge::from_low(v, Orientation::Horizontal),
            Direction::North => Edge::from_low(v, Orientation::Vertical),
            Direction::West => Edge::from_low(v.step(Direction::West), Orientation::Horizontal),
            Direction::South => Edge::from_low(v.step(Direction::South), Orientation::Vertical),
        }
    }

    pub fn low(&self) -> Vertex {
        self.low
    }

    pub fn high(&self) -> Vertex {
        match self.orientation {
            Orientation::Horizontal => self.low.step(Direction::East),
            Orientation::Vertical => self.low.step(Direction::North),
        }
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.low, self.high())
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(&self, v: Vertex) -> Vertex {
        if v == self.low {
            self.high()
        } else {
            debug_assert_eq!(v, self.high());
            self.low
        }
    }

    pub fn id(&self) -> EdgeId {
        let x = (self.low.x + MAX_HALF_WIDTH) as u64;
        let y = (self.low.y + MAX_HALF_WIDTH) as u64;
        let bit = match self.orientation {
            Orientation::Horizontal => 0,
            Orientation::Vertical => 1,
        };
        EdgeId((x * ID_SPAN + y) * 2 + bit)
    }

    pub fn from_id(id: EdgeId) -> Edge {
        let orientation = if id.0 & 1 == 0 {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        };
        let cell = id.0 >> 1;
        let x = (cell / ID_SPAN) as i32 - MAX_HALF_WIDTH;
        let y = (cell % ID_SPAN) as i32 - MAX_HALF_WIDTH;
        Edge::from_low(Vertex::new(x, y), orientation)
    }

    pub fn dual(&self) -> DualEdge {
        DualEdge::of(*self)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.low, self.high())
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let high = self.high();
        let mut st = s.serialize_struct("Edge", 3)?;
        st.serialize_field("u", &[self.low.x, self.low.y])?;
        st.serialize_field("v", &[high.x, high.y])?;
        st.serialize_field("id", &self.id().0)?;
        st.end()
    }
}

/// The box `B(n) = [-n, n]^2` viewed as a clipped finite graph: an edge
/// exists only if both endpoints lie in the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    half_width: u32,
}

impl LatticeBox {
    pub fn new(half_width: u32) -> Result<LatticeBox> {
        if half_width > MAX_HALF_WIDTH as u32 - 1 {
            return Err(Error::Config(format!(
                "box half-width {half_width} exceeds {}",
                MAX_HALF_WIDTH - 1
            )));
        }
        Ok(LatticeBox { half_width })
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    pub fn side(&self) -> usize {
        2 * self.half_width as usize + 1
    }

    pub fn vertex_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.linf() <= self.half_width
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.contains(e.low) && self.contains(e.high())
    }

    pub fn on_boundary(&self, v: Vertex) -> bool {
        v.linf() == self.half_width
    }

    /// Dense index of `v`, row-major in `x`. `v` must lie in the box.
    #[inline]
    pub fn index(&self, v: Vertex) -> usize {
        debug_assert!(self.contains(v));
        let n = self.half_width as i64;
        ((v.x as i64 + n) as usize) * self.side() + (v.y as i64 + n) as usize
    }

    #[inline]
    pub fn vertex(&self, index: usize) -> Vertex {
        let n = self.half_width as i32;
        let side = self.side();
        Vertex::new((index / side) as i32 - n, (index % side) as i32 - n)
    }

    pub fn vertices(self) -> impl Iterator<Item = Vertex> {
        (0..self.vertex_count()).map(move |i| self.vertex(i))
    }

    /// All edges with both endpoints in the box.
    pub fn edges(self) -> impl Iterator<Item = Edge> {
        let n = self.half_width as i32;
        self.vertices().flat_map(move |v| {
            let east = (v.x < n).then(|| Edge::from_low(v, Orientation::Horizontal));
            let north = (v.y < n).then(|| Edge::from_low(v, Orientation::Vertical));
            east.into_iter().chain(north)
        })
    }

    pub fn edge_count(&self) -> usize {
        2 * self.side() * (self.side() - 1)
    }

    /// The edge from `v` in direction `dir`, if it exists in the clipped graph.
    pub fn edge(&self, v: Vertex, dir: Direction) -> Result<Edge> {
        if !self.contains(v) {
            return Err(Error::OutOfRegion(v));
        }
        let w = v.step(dir);
        if !self.contains(w) {
            return Err(Error::OutOfRegion(w));
        }
        Ok(Edge::incident(v, dir))
    }

    /// The four edges at `v` in E, N, W, S order. Fails if `v` or any of
    /// its neighbours is outside the box.
    pub fn neighbours(&self, v: Vertex) -> Result<[Edge; 4]> {
        let mut out = [Edge::incident(v, Direction::East); 4];
        for (slot, dir) in out.iter_mut().zip(Direction::ALL) {
            *slot = self.edge(v, dir)?;
        }
        Ok(out)
    }

    /// Edges at `v` that exist in the clipped graph, in E, N, W, S order.
    pub fn incident_edges(self, v: Vertex) -> impl Iterator<Item = Edge> {
        Direction::ALL
            .into_iter()
            .filter(move |&d| self.contains(v.step(d)))
            .map(move |d| Edge::incident(v, d))
    }
}

/// `∂B(n) = B(n) \ B(n-1)`, listed counter-clockwise from `(n, -n)`.
pub fn boundary(n: u32) -> Result<Vec<Vertex>> {
    if n == 0 {
        return Err(Error::DegenerateBox);
    }
    let n = n as i32;
    let mut out = Vec::with_capacity(8 * n as usize);
    for y in -n..n {
        out.push(Vertex::new(n, y));
    }
    for x in (-n + 1..=n).rev() {
        out.push(Vertex::new(x, n));
    }
    for y in (-n + 1..=n).rev() {
        out.push(Vertex::new(-n, y));
    }
    for x in -n..n {
        out.push(Vertex::new(x, -n));
    }
    Ok(out)
}

/// `max |x| + |y|` over the set.
pub fn l1_radius<'a, I>(vertices: I) -> Result<u32>
where
    I: IntoIterator<Item = &'a Vertex>,
{
    vertices
        .into_iter()
        .map(|v| v.l1())
        .max()
        .ok_or(Error::EmptySet)
}

pub fn linf_radius<'a, I>(vertices: I) -> Result<u32>
where
    I: IntoIterator<Item = &'a Vertex>,
{
    vertices
        .into_iter()
        .map(|v| v.linf())
        .max()
        .ok_or(Error::EmptySet)
}

/// A vertex of the dual lattice `Z^2 + (1/2, 1/2)`; `(x, y)` stands for the
/// point `(x + 1/2, y + 1/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVertex {
    pub x: i32,
    pub y: i32,
}

impl DualVertex {
    pub const fn new(x: i32, y: i32) -> Self {
        DualVertex { x, y }
    }

    /// Coordinates doubled, so that primal and dual points share an integer grid.
    pub fn doubled(self) -> (i64, i64) {
        (2 * self.x as i64 + 1, 2 * self.y as i64 + 1)
    }
}

/// The dual edge crossing a primal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DualEdge {
    pub primal: EdgeId,
    pub a: DualVertex,
    pub b: DualVertex,
}

impl DualEdge {
    pub fn of(e: Edge) -> DualEdge {
        let Vertex { x, y } = e.low();
        let (a, b) = match e.orientation() {
            Orientation::Horizontal => (DualVertex::new(x, y - 1), DualVertex::new(x, y)),
            Orientation::Vertical => (DualVertex::new(x - 1, y), DualVertex::new(x, y)),
        };
        DualEdge {
            primal: e.id(),
            a,
            b,
        }
    }

    /// Recovers the primal edge from the dual endpoints alone.
    pub fn to_primal(&self) -> Edge {
        let (a, b) = if self.a <= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        };
        if a.x == b.x {
            Edge::from_low(Vertex::new(a.x, a.y + 1), Orientation::Horizontal)
        } else {
            Edge::from_low(Vertex::new(a.x + 1, a.y), Orientation::Vertical)
        }
    }

    /// True iff this dual edge and `e` cross, i.e. share a midpoint and are perpendicular.
    pub fn crosses(&self, e: &Edge) -> bool {
        let (ax, ay) = self.a.doubled();
        let (bx, by) = self.b.doubled();
        let (u, v) = e.endpoints();
        let mid_dual = (ax + bx, ay + by);
        let mid_primal = (2 * (u.x as i64 + v.x as i64), 2 * (u.y as i64 + v.y as i64));
        let dual_vertical = ax == bx;
        let primal_vertical = e.orientation() == Orientation::Vertical;
        mid_dual == mid_primal && dual_vertical != primal_vertical
    }
}
