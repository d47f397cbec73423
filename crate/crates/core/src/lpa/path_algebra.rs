//! The path algebra `kQ̂` of the extended graph: paths form a basis and the
//! product is concatenation when endpoints match, zero otherwise. No Leavitt
//! relations are imposed here.

use std::collections::BTreeMap;


use super::Generator;
use crate::graph::{Graph, Letter, VertexId};
use crate::scalar::Scalar;

/// A path in `Q̂`. An empty letter list is the vertex `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtPath {
    pub start: VertexId,
    pub letters: Vec<Letter>,
}

impl ExtPath {
    pub fn vertex(v: VertexId) -> ExtPath {
        ExtPath {
            start: v,
            letters: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.letters.last().map_or(self.start, |&l| g.extended().tgt(l))
    }

    /// Concatenation, or `None` when the endpoints do not match.
    pub fn concat(&self, other: &ExtPath, g: &Graph) -> Option<ExtPath> {
        if self.end(g) != other.start {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Some(ExtPath {
            start: self.start,
            letters,
        })
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.letters.is_empty() {
            return format!("[{}]", g.vertex_name(self.start));
        }
        let ext = g.extended();
        self.letters
            .iter()
            .map(|&l| ext.letter_name(l))
            .collect::<Vec<_>>()
            .join(" . ")
    }

    /// All paths of `Q̂` of length at most `max_len`, by length then
    /// lexicographically.
    pub fn enumerate(g: &Graph, max_len: usize) -> Vec<ExtPath> {
        let ext = g.extended();
        let mut out: Vec<ExtPath> = g.vertex_ids().map(ExtPath::vertex).collect();
        let mut frontier = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                let mut outs = ext.outgoing(p.end(g));
                outs.sort();
                for l in outs {
                    let mut letters = p.letters.clone();
                    letters.push(l);
                    next.push(ExtPath {
                        start: p.start,
                        letters,
                    });
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// A linear combination of paths of `Q̂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathElement<K: Scalar> {
    terms: BTreeMap<ExtPath, K>,
}

impl<K: Scalar> PathElement<K> {
    pub fn zero() -> Self {
        PathElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn path(p: ExtPath) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, K::one());
        PathElement { terms }
    }

    pub fn generator(g: &Graph, gen: Generator) -> Self {
        let p = match gen {
            Generator::Vertex(v) => ExtPath::vertex(v),
            Generator::Edge(e) => ExtPath {
                start: g.src(e),
                letters: vec![Letter::Real(e)],
            },
            Generator::Ghost(e) => ExtPath {
                start: g.tgt(e),
                letters: vec![Letter::Ghost(e)],
            },
        };
        Self::path(p)
    }

    /// The product of a word of generators; vertices act as idempotents.
    pub fn word(g: &Graph, word: &[Generator]) -> Self {
        let Some((&first, rest)) = word.split_first() else {
            let mut out = Self::zero();
            for v in g.vertex_ids() {
                out.add_term(ExtPath::vertex(v), K::one());
            }
            return out;
        };
        let mut acc = Self::generator(g, first);
        for &gen in rest {
            acc = acc.multiply(&Self::generator(g, gen), g);
        }
        acc
    }

    pub fn terms(&self) -> &BTreeMap<ExtPath, K> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: ExtPath, c: K) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p).or_insert_with(K::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.terms {
            out.add_term(p.clone(), a.clone() * c.clone());
        }
        out
    }

    /// Concatenation product. A vertex times a path is the path when the
    /// vertex is its start, and zero otherwise.
    pub fn multiply(&self, other: &Self, g: &Graph) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = p.concat(q, g) {
                    out.add_term(pq, a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(ExtPath::len).max().unwrap_or(0)
    }
}
