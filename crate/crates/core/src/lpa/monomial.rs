use std::cmp::Ordering;

use crate::graph::{EdgeId, Graph, VertexId};

/// A word `αβ*` with `t(α) = t(β)`.
///
/// `beta` is stored as the real path `β`, so the word reads `α` followed by
/// the ghosts of `β` in reverse. `vertex` is the common target `t(α) = t(β)`;
/// when both paths are empty the monomial is that vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    alpha: Vec<EdgeId>,
    beta: Vec<EdgeId>,
    vertex: VertexId,
}

impl Monomial {
    pub fn new(alpha: Vec<EdgeId>, beta: Vec<EdgeId>, vertex: VertexId) -> Monomial {
        Monomial { alpha, beta, vertex }
    }

    pub fn at_vertex(v: VertexId) -> Monomial {
        Monomial::new(Vec::new(), Vec::new(), v)
    }

    pub fn alpha(&self) -> &[EdgeId] {
        &self.alpha
    }

    pub fn beta(&self) -> &[EdgeId] {
        &self.beta
    }

    /// The common target of the real and ghost parts.
    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn is_vertex(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty()
    }

    /// `|α| - |β|`
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    /// `|α| + |β|`
    pub fn len(&self) -> usize {
        self.alpha.len() + self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_vertex()
    }

    /// Text form: `[v]`, `a/b`, `c/d^*` or `a/b . c/d^*`.
    pub fn display(&self, g: &Graph) -> String {
        let path = |p: &[EdgeId]| p.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>().join("/");
        match (self.alpha.is_empty(), self.beta.is_empty()) {
            (true, true) => format!("[{}]", g.vertex_name(self.vertex)),
            (false, true) => path(&self.alpha),
            (true, false) => format!("{}^*", path(&self.beta)),
            (false, false) => format!("{} . {}^*", path(&self.alpha), path(&self.beta)),
        }
    }
}

impl Ord for Monomial {
    /// Degree, then total length, then `(α, β)` lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
            .then_with(|| self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
