//! Finite and Z^d-periodic simple graphs.
//!
//! A periodic graph is a finite cell of vertex labels plus edge classes
//! `(u, v, t)`: the vertex instance `(u, n)` is adjacent to `(v, n + t)` for
//! every `n` in Z^d. Rank 0 is an ordinary finite graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational};

const MAX_RANK: usize = 16;
const MAX_TRANSLATION: i64 = 1 << 20;

/// A vertex instance: a cell vertex (by index) translated by `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub cell: usize,
    pub n: Vec<i64>,
}

impl Vertex {
    pub fn new(cell: usize, n: Vec<i64>) -> Self {
        Vertex { cell, n }
    }

    pub fn shifted(&self, t: &[i64]) -> Vertex {
        Vertex {
            cell: self.cell,
            n: self.n.iter().zip(t).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Canonical edge class: `(u, n) ~ (v, n + t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub t: Vec<i64>,
}

impl Edge {
    fn mirrored(&self) -> Edge {
        Edge {
            u: self.v,
            v: self.u,
            t: self.t.iter().map(|x| -x).collect(),
        }
    }

    fn canonical(self) -> (Edge, bool) {
        let m = self.mirrored();
        if m < self {
            (m, true)
        } else {
            (self, false)
        }
    }
}

/// Orientation tag of a stored edge `(u, v, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// The v-side is a son of the u-side.
    Son,
    /// The v-side is a father of the u-side.
    Father,
}

impl Direction {
    fn flipped(self) -> Direction {
        match self {
            Direction::Son => Direction::Father,
            Direction::Father => Direction::Son,
        }
    }
}

/// Relation of a neighbour to the vertex it is seen from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Son,
    Father,
}

/// One incidence of a cell vertex: neighbour `(to, n + t)` via edge `edge`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub to: usize,
    pub t: Vec<i64>,
    pub edge: usize,
    /// True when this half-edge runs u -> v of the stored edge.
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicGraph {
    rank: usize,
    cell: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<HalfEdge>>,
}

/// Per-edge direction tags, aligned with [`PeriodicGraph::edges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    tags: Vec<Option<Direction>>,
}

impl Orientation {
    pub fn new(tags: Vec<Option<Direction>>) -> Self {
        Orientation { tags }
    }

    pub fn tag(&self, edge: usize) -> Option<Direction> {
        self.tags.get(edge).copied().flatten()
    }

    pub fn tags(&self) -> &[Option<Direction>] {
        &self.tags
    }

    pub fn is_complete(&self) -> bool {
        self.tags.iter().all(Option::is_some)
    }

    /// How the far end of `h` relates to its near end, if the edge is tagged.
    pub fn relation(&self, h: &HalfEdge) -> Option<Relation> {
        let dir = self.tag(h.edge)?;
        let son = matches!(
            (dir, h.forward),
            (Direction::Son, true) | (Direction::Father, false)
        );
        Some(if son { Relation::Son } else { Relation::Father })
    }

    pub fn require_complete(&self, g: &PeriodicGraph) -> Result<()> {
        if self.tags.len() != g.edges.len() {
            return Err(Error::Precondition(format!(
                "orientation has {} tags for {} edges",
                self.tags.len(),
                g.edges.len()
            )));
        }
        match self.tags.iter().position(Option::is_none) {
            Some(i) => Err(Error::UnorientedEdge(g.describe_edge(i))),
            None => Ok(()),
        }
    }
}

impl PeriodicGraph {
    /// Builds and validates a graph from labelled edge triples. Each edge may
    /// be given in either direction; giving both mirrors is a duplicate.
    pub fn new(
        rank: usize,
        cell: Vec<String>,
        edges: Vec<(String, String, Vec<i64>)>,
    ) -> Result<Self> {
        let tagged = edges.into_iter().map(|(u, v, t)| (u, v, t, None)).collect();
        Self::with_orientation(rank, cell, tagged).map(|(g, _)| g)
    }

    pub fn with_orientation(
        rank: usize,
        cell: Vec<String>,
        edges: Vec<(String, String, Vec<i64>, Option<Direction>)>,
    ) -> Result<(Self, Orientation)> {
        if rank > MAX_RANK {
            return Err(Error::Parse(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        let mut index = HashMap::new();
        for (i, label) in cell.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate cell label {label:?}")));
            }
        }
        let mut stored: BTreeMap<Edge, Option<Direction>> = BTreeMap::new();
        for (u, v, t, dir) in edges {
            let name = format!("({u:?}, {v:?}, {t:?})");
            if t.len() != rank {
                return Err(Error::RankMismatch {
                    edge: name,
                    got: t.len(),
                    rank,
                });
            }
            if t.iter().any(|x| x.abs() > MAX_TRANSLATION) {
                return Err(Error::Parse(format!("translation out of range in {name}")));
            }
            let ui = *index.get(&u).ok_or_else(|| Error::UnknownVertex(u.clone()))?;
            let vi = *index.get(&v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
            if ui == vi && t.iter().all(|&x| x == 0) {
                return Err(Error::LoopEdge(u));
            }
            let (edge, flipped) = Edge { u: ui, v: vi, t }.canonical();
            let dir = if flipped { dir.map(Direction::flipped) } else { dir };
            if stored.insert(edge, dir).is_some() {
                return Err(Error::DuplicateEdge(name));
            }
        }
        let (edges, tags): (Vec<Edge>, Vec<Option<Direction>>) = stored.into_iter().unzip();
        let mut incidence = vec![Vec::new(); cell.len()];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.u].push(HalfEdge {
                to: e.v,
                t: e.t.clone(),
                edge: i,
                forward: true,
            });
            incidence[e.v].push(HalfEdge {
                to: e.u,
                t: e.t.iter().map(|x| -x).collect(),
                edge: i,
                forward: false,
            });
        }
        Ok((
            PeriodicGraph {
                rank,
                cell,
                edges,
                incidence,
            },
            Orientation { tags },
        ))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn cell(&self) -> &[String] {
        &self.cell
    }

    pub fn cell_size(&self) -> usize {
        self.cell.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, cell: usize) -> &str {
        &self.cell[cell]
    }

    pub fn cell_index(&self, label: &str) -> Option<usize> {
        self.cell.iter().position(|c| c == label)
    }

    pub fn incidence(&self, cell: usize) -> &[HalfEdge] {
        &self.incidence[cell]
    }

    /// The vertex instance `(label, n)`.
    pub fn vertex(&self, label: &str, n: &[i64]) -> Result<Vertex> {
        let cell = self
            .cell_index(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
        if n.len() != self.rank {
            return Err(Error::RankMismatch {
                edge: format!("vertex {label}"),
                got: n.len(),
                rank: self.rank,
            });
        }
        Ok(Vertex::new(cell, n.to_vec()))
    }

    /// Cell representatives at translation zero.
    pub fn representatives(&self) -> Vec<Vertex> {
        (0..self.cell.len())
            .map(|c| Vertex::new(c, vec![0; self.rank]))
            .collect()
    }

    /// deg(X): the largest number of neighbours of any vertex.
    pub fn degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn check_vertex(&self, x: &Vertex) -> Result<()> {
        if x.cell >= self.cell.len() {
            return Err(Error::UnknownVertex(format!("cell index {}", x.cell)));
        }
        if x.n.len() != self.rank {
            return Err(Error::RankMismatch {
                edge: format!("vertex {:?}", x),
                got: x.n.len(),
                rank: self.rank,
            });
        }
        Ok(())
    }

    /// N(x). Edges are canonical, so no neighbour is listed twice.
    pub fn neighbors(&self, x: &Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(x)?;
        Ok(self.neighbors_unchecked(x))
    }

    pub(crate) fn neighbors_unchecked(&self, x: &Vertex) -> Vec<Vertex> {
        self.incidence[x.cell]
            .iter()
            .map(|h| Vertex {
                cell: h.to,
                n: x.n.iter().zip(&h.t).map(|(a, b)| a + b).collect(),
            })
            .collect()
    }

    /// Neighbours of `x` with their relation under `o` (None if untagged).
    pub fn oriented_neighbors(&self, o: &Orientation, x: &Vertex) -> Vec<(Vertex, Option<Relation>)> {
        self.incidence[x.cell]
            .iter()
            .map(|h| (x.shifted(&h.t).with_cell(h.to), o.relation(h)))
            .collect()
    }

    /// N⁻(x), the fathers of x.
    pub fn fathers(&self, o: &Orientation, x: &Vertex) -> Vec<Vertex> {
        self.oriented_neighbors(o, x)
            .into_iter()
            .filter(|(_, r)| *r == Some(Relation::Father))
            .map(|(y, _)| y)
            .collect()
    }

    /// N⁺(x), the sons of x.
    pub fn sons(&self, o: &Orientation, x: &Vertex) -> Vec<Vertex> {
        self.oriented_neighbors(o, x)
            .into_iter()
            .filter(|(_, r)| *r == Some(Relation::Son))
            .map(|(y, _)| y)
            .collect()
    }

    /// Vertices within path distance `radius` of `center`, in breadth-first
    /// order.
    pub fn ball(&self, center: &Vertex, radius: usize) -> Result<Vec<Vertex>> {
        self.check_vertex(center)?;
        Ok(self.ball_unchecked(std::slice::from_ref(center), radius))
    }

    /// Union of balls around several centres, breadth-first from all of them.
    pub fn ball_around(&self, centers: &[Vertex], radius: usize) -> Result<Vec<Vertex>> {
        for c in centers {
            self.check_vertex(c)?;
        }
        Ok(self.ball_unchecked(centers, radius))
    }

    fn ball_unchecked(&self, centers: &[Vertex], radius: usize) -> Vec<Vertex> {
        let mut seen: HashSet<Vertex> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for c in centers {
            if seen.insert(c.clone()) {
                order.push(c.clone());
                queue.push_back((c.clone(), 0usize));
            }
        }
        while let Some((x, dist)) = queue.pop_front() {
            if dist == radius {
                continue;
            }
            for y in self.neighbors_unchecked(&x) {
                if seen.insert(y.clone()) {
                    order.push(y.clone());
                    queue.push_back((y, dist + 1));
                }
            }
        }
        order
    }

    pub fn describe_edge(&self, i: usize) -> String {
        let e = &self.edges[i];
        format!("({}, {}, {:?})", self.cell[e.u], self.cell[e.v], e.t)
    }

    /// Serializes to the graph JSON document (canonical edge order).
    pub fn to_json(&self, o: Option<&Orientation>) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let tag = o.and_then(|o| o.tag(i));
                json!([self.cell[e.u], self.cell[e.v], e.t, tag])
            })
            .collect();
        json!({"rank": self.rank, "cell": self.cell, "edges": edges})
    }
}

impl Vertex {
    fn with_cell(mut self, cell: usize) -> Vertex {
        self.cell = cell;
        self
    }
}

fn as_i64_vec(v: &Value, what: &str) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an integer array")))?
        .iter()
        .map(|x| {
            x.as_i64()
                .ok_or_else(|| Error::Parse(format!("{what}: expected integers")))
        })
        .collect()
}

/// Parses a graph document including optional orientation tags.
pub fn load_oriented_graph(document: &str) -> Result<(PeriodicGraph, Orientation)> {
    let root: Value =
        serde_json::from_str(document).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
    let rank = root
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("graph JSON: missing nonnegative integer \"rank\"".into()))?;
    let rank = usize::try_from(rank).map_err(|_| Error::Parse("rank too large".into()))?;
    let cell = root
        .get("cell")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("graph JSON: missing \"cell\" array".into()))?
        .iter()
        .map(|c| {
            c.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse("graph JSON: cell labels must be strings".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let raw_edges = root
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("graph JSON: missing \"edges\" array".into()))?;
    let mut edges = Vec::with_capacity(raw_edges.len());
    for e in raw_edges {
        let parts = e
            .as_array()
            .filter(|p| p.len() == 3 || p.len() == 4)
            .ok_or_else(|| Error::Parse("graph JSON: edge must be [u, v, t, tag?]".into()))?;
        let u = parts[0]
            .as_str()
            .ok_or_else(|| Error::Parse("graph JSON: edge endpoint must be a label".into()))?;
        let v = parts[1]
            .as_str()
            .ok_or_else(|| Error::Parse("graph JSON: edge endpoint must be a label".into()))?;
        let t = as_i64_vec(&parts[2], "edge translation")?;
        let dir = match parts.get(3) {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) if s == "son" => Some(Direction::Son),
            Some(Value::String(s)) if s == "father" => Some(Direction::Father),
            Some(other) => {
                return Err(Error::Parse(format!(
                    "graph JSON: orientation tag must be \"son\", \"father\" or null, got {other}"
                )))
            }
        };
        edges.push((u.to_string(), v.to_string(), t, dir));
    }
    PeriodicGraph::with_orientation(rank, cell, edges)
}

/// Parses and validates a graph document, ignoring orientation tags.
pub fn load_graph(document: &str) -> Result<PeriodicGraph> {
    load_oriented_graph(document).map(|(g, _)| g)
}

/// Φ(v, n) = offsets[v] + slope · n, with exact rational data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    pub offsets: Vec<Rational>,
    pub slope: Vec<Rational>,
}

impl VertexFunction {
    pub fn new(offsets: Vec<Rational>, slope: Vec<Rational>) -> Self {
        VertexFunction { offsets, slope }
    }

    pub fn constant(g: &PeriodicGraph, c: Rational) -> Self {
        VertexFunction {
            offsets: vec![c; g.cell_size()],
            slope: vec![Rational::zero(); g.rank()],
        }
    }

    /// Φ(v, n) = n₁ for every cell vertex.
    pub fn first_coordinate(g: &PeriodicGraph) -> Self {
        let mut slope = vec![Rational::zero(); g.rank()];
        if let Some(s) = slope.first_mut() {
            *s = Rational::from_integer(1.into());
        }
        VertexFunction {
            offsets: vec![Rational::zero(); g.cell_size()],
            slope,
        }
    }

    pub fn value(&self, x: &Vertex) -> Rational {
        let mut acc = self.offsets[x.cell].clone();
        for (w, n) in self.slope.iter().zip(&x.n) {
            if *n != 0 && !w.is_zero() {
                acc += w * Rational::from_integer((*n).into());
            }
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.slope.iter().all(Zero::is_zero)
            && self.offsets.windows(2).all(|w| w[0] == w[1])
    }

    pub fn compatible_with(&self, g: &PeriodicGraph) -> Result<()> {
        if self.offsets.len() != g.cell_size() || self.slope.len() != g.rank() {
            return Err(Error::Precondition(format!(
                "vertex function has {} offsets and slope length {}, graph has {} cell vertices and rank {}",
                self.offsets.len(),
                self.slope.len(),
                g.cell_size(),
                g.rank()
            )));
        }
        Ok(())
    }

    /// The bound c of max |Φ(x) − Φ(y)| over adjacent pairs.
    pub fn edge_bound(&self, g: &PeriodicGraph) -> Rational {
        g.edges()
            .iter()
            .map(|e| {
                let x = Vertex::new(e.u, vec![0; g.rank()]);
                let y = Vertex::new(e.v, e.t.clone());
                (self.value(&y) - self.value(&x)).abs()
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_json(&self, g: &PeriodicGraph) -> Value {
        let offsets: serde_json::Map<String, Value> = g
            .cell()
            .iter()
            .zip(&self.offsets)
            .map(|(l, c)| (l.clone(), Value::String(format_rational(c))))
            .collect();
        let slope: Vec<String> = self.slope.iter().map(format_rational).collect();
        json!({"offsets": offsets, "slope": slope})
    }
}

/// Parses a vertex function document against a graph.
pub fn load_vertex_function(g: &PeriodicGraph, document: &str) -> Result<VertexFunction> {
    let root: Value = serde_json::from_str(document)
        .map_err(|e| Error::Parse(format!("vertex function JSON: {e}")))?;
    let offsets = root
        .get("offsets")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("vertex function JSON: missing \"offsets\" object".into()))?;
    let mut values = vec![None; g.cell_size()];
    for (label, raw) in offsets {
        let idx = g
            .cell_index(label)
            .ok_or_else(|| Error::UnknownVertex(label.clone()))?;
        let s = raw
            .as_str()
            .ok_or_else(|| Error::Parse(format!("offset for {label:?} must be a string")))?;
        values[idx] = Some(parse_rational(s)?);
    }
    let offsets = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing offset for {:?}", g.label(i)))))
        .collect::<Result<Vec<_>>>()?;
    let slope = match root.get("slope") {
        None => vec![Rational::zero(); g.rank()],
        Some(v) => parse_rational_array(v, "slope")?,
    };
    if slope.len() != g.rank() {
        return Err(Error::RankMismatch {
            edge: "slope".into(),
            got: slope.len(),
            rank: g.rank(),
        });
    }
    Ok(VertexFunction { offsets, slope })
}

pub(crate) fn parse_rational_array(v: &Value, what: &str) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what}: expected an array of rational strings")))?
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| Error::Parse(format!("{what}: rationals must be strings")))
                .and_then(parse_rational)
        })
        .collect()
}

/// Connected components of the quotient (cell) graph, as sorted index sets.
pub fn cell_components(g: &PeriodicGraph) -> Vec<BTreeSet<usize>> {
    let mut seen = vec![false; g.cell_size()];
    let mut out = Vec::new();
    for s in 0..g.cell_size() {
        if seen[s] {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(c) = stack.pop() {
            comp.insert(c);
            for h in g.incidence(c) {
                if !seen[h.to] {
                    seen[h.to] = true;
                    stack.push(h.to);
                }
            }
        }
        out.push(comp);
    }
    out
}
