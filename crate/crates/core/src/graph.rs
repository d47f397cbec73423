//! Finite directed multigraphs, their extended (ghost) graphs, vertex and
//! edge deletion, path enumeration and the trimmability test.
//!
//! Vertex and edge identifiers are opaque strings. Internally both are
//! numbered by their lexicographic rank, so index order and identifier
//! order agree everywhere in the crate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

/// Index of a vertex in its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Index of an edge in its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: VertexId,
    pub tgt: VertexId,
}

/// On-disk form: `{"vertices": [...], "edges": [{"id", "src", "tgt"}...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A finite directed multigraph `(Q0, Q1, s, t)`.
#[derive(Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    outgoing: Vec<Vec<EdgeId>>,
    incoming: Vec<Vec<EdgeId>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}:{}->{}", e.id, self.vertex_name(e.src), self.vertex_name(e.tgt)))
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.vertices)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, source, target)` triples.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_index: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i)))
            .collect();

        let mut raw: Vec<(String, String, String)> = edges
            .into_iter()
            .map(|(id, s, t)| (id.into(), s.into(), t.into()))
            .collect();
        raw.sort();
        let mut edges = Vec::with_capacity(raw.len());
        for (i, (id, s, t)) in raw.into_iter().enumerate() {
            if i > 0 && edges.last().map(|e: &Edge| &e.id) == Some(&id) {
                return Err(GraphError::DuplicateEdge(id));
            }
            let lookup = |v: &str| {
                vertex_index.get(v).copied().ok_or_else(|| GraphError::DanglingEdge {
                    edge: id.clone(),
                    vertex: v.to_string(),
                })
            };
            let src = lookup(&s)?;
            let tgt = lookup(&t)?;
            edges.push(Edge { id, src, tgt });
        }
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), EdgeId(i)))
            .collect();

        let mut outgoing = vec![Vec::new(); names.len()];
        let mut incoming = vec![Vec::new(); names.len()];
        for (i, e) in edges.iter().enumerate() {
            outgoing[e.src.0].push(EdgeId(i));
            incoming[e.tgt.0].push(EdgeId(i));
        }
        Ok(Graph {
            vertices: names,
            edges,
            vertex_index,
            edge_index,
            outgoing,
            incoming,
        })
    }

    pub fn from_file(file: &GraphFile) -> Result<Graph, GraphError> {
        Graph::new(
            file.vertices.iter().cloned(),
            file.edges
                .iter()
                .map(|e| (e.id.clone(), e.src.clone(), e.tgt.clone())),
        )
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
        Graph::from_file(&file)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    src: self.vertex_name(e.src).to_string(),
                    tgt: self.vertex_name(e.tgt).to_string(),
                })
                .collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].id
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].src
    }

    pub fn tgt(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].tgt
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn find_edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    /// `s^{-1}(v)`, in identifier order.
    pub fn outgoing(&self, v: VertexId) -> &[EdgeId] {
        &self.outgoing[v.0]
    }

    /// `t^{-1}(v)`, in identifier order.
    pub fn incoming(&self, v: VertexId) -> &[EdgeId] {
        &self.incoming[v.0]
    }

    pub fn is_sink_id(&self, v: VertexId) -> bool {
        self.outgoing[v.0].is_empty()
    }

    pub fn is_sink(&self, v: &str) -> Result<bool, GraphError> {
        Ok(self.is_sink_id(self.vertex(v)?))
    }

    /// Sinks, by name.
    pub fn sinks(&self) -> BTreeSet<String> {
        self.vertex_ids()
            .filter(|&v| self.is_sink_id(v))
            .map(|v| self.vertex_name(v).to_string())
            .collect()
    }

    pub fn has_loop_at(&self, v: VertexId) -> bool {
        self.outgoing[v.0].iter().any(|&e| self.tgt(e) == v)
    }

    pub fn extended(&self) -> ExtendedGraph<'_> {
        ExtendedGraph { base: self }
    }

    /// Removes `v` and every edge ending in `v`. Edges leaving `v` towards
    /// another vertex would be left without a source, so they are dropped as
    /// well and listed in [`VertexDeletion::dropped_outgoing`].
    pub fn delete_vertex(&self, v: &str) -> Result<VertexDeletion, GraphError> {
        let vid = self.vertex(v)?;
        let mut dropped_outgoing = Vec::new();
        let mut kept = Vec::new();
        for e in &self.edges {
            if e.tgt == vid {
                continue;
            }
            if e.src == vid {
                dropped_outgoing.push(e.id.clone());
                continue;
            }
            kept.push((
                e.id.clone(),
                self.vertex_name(e.src).to_string(),
                self.vertex_name(e.tgt).to_string(),
            ));
        }
        let vertices = self.vertices.iter().filter(|n| n.as_str() != v).cloned();
        let graph = Graph::new(vertices, kept).expect("subgraph of a valid graph");
        Ok(VertexDeletion {
            graph,
            dropped_outgoing,
        })
    }

    pub fn delete_edge(&self, x: &str) -> Result<Graph, GraphError> {
        self.edge_by_name(x)?;
        let kept: Vec<_> = self
            .edges
            .iter()
            .filter(|e| e.id != x)
            .map(|e| {
                (
                    e.id.clone(),
                    self.vertex_name(e.src).to_string(),
                    self.vertex_name(e.tgt).to_string(),
                )
            })
            .collect();
        Ok(Graph::new(self.vertices.iter().cloned(), kept).expect("subgraph of a valid graph"))
    }

    /// All paths of length at most `max_len`, ordered by length, then
    /// lexicographically by start vertex and edge sequence.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = self.vertex_ids().map(Path::vertex).collect();
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for &e in self.outgoing(p.end(self)) {
                    let mut edges = p.edges.clone();
                    edges.push(e);
                    next.push(Path {
                        start: p.start,
                        edges,
                    });
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Paths of length at most `max_len` that end at `v`.
    pub fn paths_ending_at(&self, v: VertexId, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::vertex(v)];
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for &e in self.incoming(p.start) {
                    let mut edges = Vec::with_capacity(p.edges.len() + 1);
                    edges.push(e);
                    edges.extend_from_slice(&p.edges);
                    next.push(Path {
                        start: self.src(e),
                        edges,
                    });
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Checks whether `self` is `(Q', v0)`-trimmable.
    pub fn is_trimmable(&self, v0: &str) -> Result<TrimmabilityReport, GraphError> {
        let vid = self.vertex(v0)?;
        let fail = |failure| TrimmabilityReport {
            v0: v0.to_string(),
            verdict: false,
            failure: Some(failure),
            loop_edge: None,
            trimmed: None,
            unlooped: None,
        };

        let out = self.outgoing(vid);
        if out.len() != 1 || self.tgt(out[0]) != vid {
            return Ok(fail(TrimFailure::NotSingleLoop {
                outgoing: out.iter().map(|&e| self.edge_name(e).to_string()).collect(),
            }));
        }
        let x0 = out[0];
        let feeders: Vec<EdgeId> = self.incoming(vid).iter().copied().filter(|&e| e != x0).collect();
        if feeders.is_empty() {
            return Ok(fail(TrimFailure::NoIncomingEdges));
        }
        let mut sources: Vec<VertexId> = feeders.iter().map(|&e| self.src(e)).collect();
        sources.sort();
        sources.dedup();
        for v in sources {
            let escapes = self.outgoing(v).iter().any(|&e| self.tgt(e) != vid);
            if !escapes {
                return Ok(fail(TrimFailure::NewSink {
                    vertex: self.vertex_name(v).to_string(),
                }));
            }
        }
        let x0_name = self.edge_name(x0).to_string();
        Ok(TrimmabilityReport {
            v0: v0.to_string(),
            verdict: true,
            failure: None,
            trimmed: Some(self.delete_vertex(v0)?.graph),
            unlooped: Some(self.delete_edge(&x0_name)?),
            loop_edge: Some(x0_name),
        })
    }
}

/// The graph `Q̂` with a ghost edge `x*` for every edge `x`, running in
/// the opposite direction.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedGraph<'g> {
    base: &'g Graph,
}

/// An edge of the extended graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Real(EdgeId),
    Ghost(EdgeId),
}

impl Letter {
    pub fn edge(self) -> EdgeId {
        match self {
            Letter::Real(e) | Letter::Ghost(e) => e,
        }
    }

    /// `x ↦ x*` and `x* ↦ x`.
    pub fn star(self) -> Letter {
        match self {
            Letter::Real(e) => Letter::Ghost(e),
            Letter::Ghost(e) => Letter::Real(e),
        }
    }

    pub fn degree(self) -> i64 {
        match self {
            Letter::Real(_) => 1,
            Letter::Ghost(_) => -1,
        }
    }
}

impl<'g> ExtendedGraph<'g> {
    pub fn base(&self) -> &'g Graph {
        self.base
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + 'g {
        let base = self.base;
        base.edge_ids()
            .map(Letter::Real)
            .chain(base.edge_ids().map(Letter::Ghost))
    }

    pub fn num_ghost_edges(&self) -> usize {
        self.base.num_edges()
    }

    /// `ŝ`
    pub fn src(&self, l: Letter) -> VertexId {
        match l {
            Letter::Real(e) => self.base.src(e),
            Letter::Ghost(e) => self.base.tgt(e),
        }
    }

    /// `t̂`
    pub fn tgt(&self, l: Letter) -> VertexId {
        match l {
            Letter::Real(e) => self.base.tgt(e),
            Letter::Ghost(e) => self.base.src(e),
        }
    }

    /// Letters leaving `v` in the extended graph.
    pub fn outgoing(&self, v: VertexId) -> Vec<Letter> {
        let mut out: Vec<Letter> = self.base.outgoing(v).iter().map(|&e| Letter::Real(e)).collect();
        out.extend(self.base.incoming(v).iter().map(|&e| Letter::Ghost(e)));
        out
    }

    pub fn letter_name(&self, l: Letter) -> String {
        match l {
            Letter::Real(e) => self.base.edge_name(e).to_string(),
            Letter::Ghost(e) => format!("{}*", self.base.edge_name(e)),
        }
    }
}

/// A path: a start vertex followed by composable edges. Length zero means
/// the path is its start vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path {
            start: v,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.edges.last().map_or(self.start, |&e| g.tgt(e))
    }

    pub fn is_composable(&self, g: &Graph) -> bool {
        let mut at = self.start;
        for &e in &self.edges {
            if g.src(e) != at {
                return false;
            }
            at = g.tgt(e);
        }
        true
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.edges.is_empty() {
            format!("[{}]", g.vertex_name(self.start))
        } else {
            self.edges
                .iter()
                .map(|&e| g.edge_name(e))
                .collect::<Vec<_>>()
                .join("/")
        }
    }
}

#[derive(Debug, Clone)]
pub struct VertexDeletion {
    pub graph: Graph,
    /// Edges that started at the deleted vertex and ended elsewhere.
    pub dropped_outgoing: Vec<String>,
}

/// Which trimmability condition failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum TrimFailure {
    /// `v0` must emit exactly one edge, and that edge must be a loop.
    NotSingleLoop { outgoing: Vec<String> },
    /// Some edge other than the loop has to end at `v0`.
    NoIncomingEdges,
    /// `vertex` sends edges into `v0` but no edge anywhere else, so it would
    /// become a sink once `v0` is removed.
    NewSink { vertex: String },
}

impl fmt::Display for TrimFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrimFailure::NotSingleLoop { outgoing } => write!(
                f,
                "distinguished vertex must emit exactly one edge, a loop (emits: [{}])",
                outgoing.join(", ")
            ),
            TrimFailure::NoIncomingEdges => {
                write!(f, "no edge other than the loop ends at the distinguished vertex")
            }
            TrimFailure::NewSink { vertex } => write!(
                f,
                "vertex {vertex} emits only edges into the distinguished vertex and would become a sink"
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrimmabilityReport {
    pub v0: String,
    pub verdict: bool,
    pub failure: Option<TrimFailure>,
    /// The loop `x0` at `v0`, when the verdict is positive.
    pub loop_edge: Option<String>,
    /// `Q'`: the graph with `v0` removed.
    pub trimmed: Option<Graph>,
    /// `Q''`: the graph with the loop `x0` removed.
    pub unlooped: Option<Graph>,
}
