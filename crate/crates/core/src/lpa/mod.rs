//! Leavitt path algebras over exact scalars.
//!
//! Elements are kept in a canonical normal form. Given a choice of one
//! outgoing "special" edge `γ(v)` per non-sink vertex, the words `αβ*` with
//! `t(α) = t(β)` form a basis once the words in which `α` and `β` both end
//! in the same special edge are removed. Products are computed by appending
//! generators one at a time; each step lands back in that basis after at
//! most one application of the Cuntz–Krieger expansion
//! `γγ* = v - Σ_{e ≠ γ} ee*`.

mod element;
mod laurent;
mod monomial;
pub mod path_algebra;
pub mod rewrite;
mod special;
pub mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Letter, VertexId};

pub use element::Element;
pub use laurent::{LaurentPoly, TensorElement};
pub use monomial::Monomial;
pub use special::SpecialEdgeChoice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpaError {
    #[error("elements live over different graphs")]
    AmbientMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator id `{0}` names both a vertex and an edge; write [{0}] for the vertex")]
    AmbiguousGenerator(String),
    #[error("`{0}` is not a normal-form monomial of this algebra")]
    NotBasis(String),
    #[error("invalid special edge choice: {0}")]
    InvalidSpecialEdge(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A generator of `L_k(Q)`: a vertex, an edge, or a ghost edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Vertex(VertexId),
    Edge(EdgeId),
    Ghost(EdgeId),
}

impl From<Letter> for Generator {
    fn from(l: Letter) -> Self {
        match l {
            Letter::Real(e) => Generator::Edge(e),
            Letter::Ghost(e) => Generator::Ghost(e),
        }
    }
}

impl Generator {
    pub fn degree(self) -> i64 {
        match self {
            Generator::Vertex(_) => 0,
            Generator::Edge(_) => 1,
            Generator::Ghost(_) => -1,
        }
    }

    pub fn letter(self) -> Option<Letter> {
        match self {
            Generator::Vertex(_) => None,
            Generator::Edge(e) => Some(Letter::Real(e)),
            Generator::Ghost(e) => Some(Letter::Ghost(e)),
        }
    }
}

/// The algebra `L_k(Q)` for a fixed graph and special-edge choice. Elements
/// hold an `Arc` to it.
#[derive(Clone, PartialEq, Eq)]
pub struct Lpa {
    graph: Graph,
    special: SpecialEdgeChoice,
}

impl fmt::Debug for Lpa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lpa")
            .field("graph", &self.graph)
            .field("special", &self.special.describe(&self.graph))
            .finish()
    }
}

impl Lpa {
    /// The algebra with the default (lexicographically smallest) special edges.
    pub fn new(graph: Graph) -> Arc<Lpa> {
        let special = SpecialEdgeChoice::lexicographic(&graph);
        Arc::new(Lpa { graph, special })
    }

    pub fn with_choice(graph: Graph, special: SpecialEdgeChoice) -> Result<Arc<Lpa>, LpaError> {
        special.check(&graph)?;
        Ok(Arc::new(Lpa { graph, special }))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn special(&self) -> &SpecialEdgeChoice {
        &self.special
    }

    pub(crate) fn same(a: &Arc<Lpa>, b: &Arc<Lpa>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    /// Number of generators: vertices, edges and ghost edges.
    pub fn num_generators(&self) -> usize {
        self.graph.num_vertices() + 2 * self.graph.num_edges()
    }

    /// Dense numbering of generators: vertices, then edges, then ghosts.
    pub fn generator_index(&self, g: Generator) -> usize {
        let nv = self.graph.num_vertices();
        let ne = self.graph.num_edges();
        match g {
            Generator::Vertex(v) => v.0,
            Generator::Edge(e) => nv + e.0,
            Generator::Ghost(e) => nv + ne + e.0,
        }
    }

    pub fn generators(&self) -> Vec<Generator> {
        let g = &self.graph;
        g.vertex_ids()
            .map(Generator::Vertex)
            .chain(g.edge_ids().map(Generator::Edge))
            .chain(g.edge_ids().map(Generator::Ghost))
            .collect()
    }

    pub fn generator_name(&self, g: Generator) -> String {
        match g {
            Generator::Vertex(v) => format!("[{}]", self.graph.vertex_name(v)),
            Generator::Edge(e) => self.graph.edge_name(e).to_string(),
            Generator::Ghost(e) => format!("{}*", self.graph.edge_name(e)),
        }
    }

    /// Resolves `v`, `[v]`, `x`, `x*` or `x^*`.
    pub fn generator_by_name(&self, name: &str) -> Result<Generator, LpaError> {
        let name = name.trim();
        if let Some(inner) = name.strip_prefix('[').and_then(|n| n.strip_suffix(']')) {
            return self
                .graph
                .find_vertex(inner.trim())
                .map(Generator::Vertex)
                .ok_or_else(|| LpaError::UnknownGenerator(name.to_string()));
        }
        if let Some(base) = name.strip_suffix("^*").or_else(|| name.strip_suffix('*')) {
            return self
                .graph
                .find_edge(base.trim())
                .map(Generator::Ghost)
                .ok_or_else(|| LpaError::UnknownGenerator(name.to_string()));
        }
        match (self.graph.find_vertex(name), self.graph.find_edge(name)) {
            (Some(_), Some(_)) => Err(LpaError::AmbiguousGenerator(name.to_string())),
            (Some(v), None) => Ok(Generator::Vertex(v)),
            (None, Some(e)) => Ok(Generator::Edge(e)),
            (None, None) => Err(LpaError::UnknownGenerator(name.to_string())),
        }
    }

    pub(crate) fn check_generator(&self, g: Generator) -> Result<(), LpaError> {
        let ok = match g {
            Generator::Vertex(v) => v.0 < self.graph.num_vertices(),
            Generator::Edge(e) | Generator::Ghost(e) => e.0 < self.graph.num_edges(),
        };
        if ok {
            Ok(())
        } else {
            Err(LpaError::UnknownGenerator(format!("{g:?}")))
        }
    }

    /// Source vertex of a generator in the extended graph.
    pub fn gen_src(&self, g: Generator) -> VertexId {
        match g {
            Generator::Vertex(v) => v,
            Generator::Edge(e) => self.graph.src(e),
            Generator::Ghost(e) => self.graph.tgt(e),
        }
    }

    /// Target vertex of a generator in the extended graph.
    pub fn gen_tgt(&self, g: Generator) -> VertexId {
        match g {
            Generator::Vertex(v) => v,
            Generator::Edge(e) => self.graph.tgt(e),
            Generator::Ghost(e) => self.graph.src(e),
        }
    }

    /// True when `e` is the special edge of its source.
    pub fn is_special(&self, e: EdgeId) -> bool {
        self.special.get(self.graph.src(e)) == Some(e)
    }

    /// The normal-form basis truncated to `|α| + |β| <= max_len`, in
    /// monomial order.
    pub fn basis_monomials(&self, max_len: usize) -> Vec<Monomial> {
        let g = &self.graph;
        let mut out = Vec::new();
        for w in g.vertex_ids() {
            let into = g.paths_ending_at(w, max_len);
            for a in &into {
                for b in &into {
                    if a.len() + b.len() > max_len {
                        continue;
                    }
                    let m = Monomial::new(a.edges.clone(), b.edges.clone(), w);
                    if self.excluded(&m) {
                        continue;
                    }
                    out.push(m);
                }
            }
        }
        out.sort();
        out
    }

    fn excluded(&self, m: &Monomial) -> bool {
        match (m.alpha().last(), m.beta().last()) {
            (Some(&a), Some(&b)) => a == b && self.is_special(a),
            _ => false,
        }
    }

    /// Whether `m` is a well-formed member of the normal-form basis.
    pub fn is_basis(&self, m: &Monomial) -> bool {
        let g = &self.graph;
        let path_ok = |p: &[EdgeId]| {
            p.iter().all(|e| e.0 < g.num_edges())
                && p.windows(2).all(|w| g.tgt(w[0]) == g.src(w[1]))
                && p.last().is_none_or(|&e| g.tgt(e) == m.vertex())
        };
        m.vertex().0 < g.num_vertices() && path_ok(m.alpha()) && path_ok(m.beta()) && !self.excluded(m)
    }

    pub fn left_end(&self, m: &Monomial) -> VertexId {
        match m.alpha().first() {
            Some(&e) => self.graph.src(e),
            None => m.vertex(),
        }
    }

    pub fn right_end(&self, m: &Monomial) -> VertexId {
        match m.beta().first() {
            Some(&e) => self.graph.src(e),
            None => m.vertex(),
        }
    }

    /// `m` written as a word in the generators.
    pub fn word(&self, m: &Monomial) -> Vec<Generator> {
        if m.is_vertex() {
            return vec![Generator::Vertex(m.vertex())];
        }
        m.alpha()
            .iter()
            .map(|&e| Generator::Edge(e))
            .chain(m.beta().iter().rev().map(|&e| Generator::Ghost(e)))
            .collect()
    }

    pub fn generator_monomial(&self, g: Generator) -> Monomial {
        match g {
            Generator::Vertex(v) => Monomial::at_vertex(v),
            Generator::Edge(e) => Monomial::new(vec![e], Vec::new(), self.graph.tgt(e)),
            Generator::Ghost(e) => Monomial::new(Vec::new(), vec![e], self.graph.tgt(e)),
        }
    }

    /// `m · g` expanded in the normal-form basis, with integer coefficients.
    pub fn mul_generator(&self, m: &Monomial, g: Generator) -> Vec<(Monomial, i64)> {
        let graph = &self.graph;
        match g {
            Generator::Vertex(w) => {
                if self.right_end(m) == w {
                    vec![(m.clone(), 1)]
                } else {
                    Vec::new()
                }
            }
            Generator::Edge(x) => match m.beta().first() {
                // b1* x = δ(b1, x) t(b1)
                Some(&b1) if b1 == x => {
                    vec![(Monomial::new(m.alpha().to_vec(), m.beta()[1..].to_vec(), m.vertex()), 1)]
                }
                Some(_) => Vec::new(),
                None if m.vertex() == graph.src(x) => {
                    let mut alpha = m.alpha().to_vec();
                    alpha.push(x);
                    vec![(Monomial::new(alpha, Vec::new(), graph.tgt(x)), 1)]
                }
                None => Vec::new(),
            },
            Generator::Ghost(y) => {
                if self.right_end(m) != graph.tgt(y) {
                    return Vec::new();
                }
                if !m.beta().is_empty() {
                    let mut beta = Vec::with_capacity(m.beta().len() + 1);
                    beta.push(y);
                    beta.extend_from_slice(m.beta());
                    return vec![(Monomial::new(m.alpha().to_vec(), beta, m.vertex()), 1)];
                }
                match m.alpha().split_last() {
                    Some((&last, head)) if last == y && self.is_special(y) => {
                        let v = graph.src(y);
                        let mut out = vec![(Monomial::new(head.to_vec(), Vec::new(), v), 1)];
                        for &e in graph.outgoing(v) {
                            if e == y {
                                continue;
                            }
                            let mut alpha = head.to_vec();
                            alpha.push(e);
                            out.push((Monomial::new(alpha, vec![e], graph.tgt(e)), -1));
                        }
                        out
                    }
                    _ => vec![(Monomial::new(m.alpha().to_vec(), vec![y], m.vertex()), 1)],
                }
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use std::sync::Arc;

    use super::Lpa;
    use crate::graph::Graph;

    pub fn display7() -> Graph {
        Graph::new(
            ["v0", "v1", "v2"],
            [("x0", "v0", "v0"), ("e1", "v1", "v2"), ("e2", "v1", "v0")],
        )
        .unwrap()
    }

    pub fn lpa7() -> Arc<Lpa> {
        Lpa::new(display7())
    }

    pub fn single_loop() -> Arc<Lpa> {
        Lpa::new(Graph::new(["v"], [("x", "v", "v")]).unwrap())
    }
}
