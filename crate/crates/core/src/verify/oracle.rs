//! A brute-force model of `L_k(Q)` that shares no code with the normal-form
//! engine beyond the graph type.
//!
//! The model is the path algebra `kQ̂` truncated to paths of length at most
//! `L`, divided by the span of every product `a·r·b` that stays inside the
//! window, where `r` runs over the defining relations and `a`, `b` over
//! paths. In `kQ̂` the vertex and endpoint relations hold already, so only
//! `x*y - δ t(x)` and `Σ xx* - v` contribute.
//!
//! Rewriting a word never makes it longer, and every rewrite of a word of
//! length at most `L` is one of these padded relations, so the quotient rank
//! of the window equals the number of normal-form monomials of length at
//! most `L`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Letter};
use crate::linalg::{Echelon, Interner, SparseVec};
use crate::lpa::path_algebra::{ExtPath, PathElement};
use crate::lpa::{Element, Generator, Lpa};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("the algebra and the oracle are built on different graphs")]
    GraphMismatch,
    #[error("window length {0} is too small; relations need words of length 2")]
    WindowTooSmall(usize),
    #[error("a word of length {len} lies outside the window of length {max}")]
    OutOfWindow { len: usize, max: usize },
    #[error("generator {0:?} does not belong to the graph")]
    UnknownGenerator(Generator),
}

#[derive(Debug, Clone)]
pub struct OracleModel<K: Scalar = Rational> {
    graph: Graph,
    max_len: usize,
    paths: Interner<ExtPath>,
    relations: Echelon<K>,
    relation_rows: usize,
}

impl<K: Scalar> OracleModel<K> {
    pub fn build(g: &Graph, max_len: usize) -> Result<Self, OracleError> {
        if max_len < 2 {
            return Err(OracleError::WindowTooSmall(max_len));
        }
        let all = ExtPath::enumerate(g, max_len);
        let mut paths = Interner::new();
        for p in &all {
            paths.intern(p);
        }
        let mut model = OracleModel {
            graph: g.clone(),
            max_len,
            paths,
            relations: Echelon::new(),
            relation_rows: 0,
        };

        let mut base = Vec::new();
        for x in g.edge_ids() {
            for y in g.edge_ids() {
                let mut r = PathElement::word(g, &[Generator::Ghost(x), Generator::Edge(y)]);
                if x == y {
                    r = r.add(&PathElement::path(ExtPath::vertex(g.tgt(x))).scale(&-K::one()));
                }
                if !r.is_zero() {
                    base.push(r);
                }
            }
        }
        for v in g.vertex_ids() {
            if g.is_sink_id(v) {
                continue;
            }
            let mut r = PathElement::path(ExtPath::vertex(v)).scale(&-K::one());
            for &e in g.outgoing(v) {
                r = r.add(&PathElement::word(g, &[Generator::Edge(e), Generator::Ghost(e)]));
            }
            base.push(r);
        }

        let pad = max_len - 2;
        let short: Vec<&ExtPath> = all.iter().filter(|p| p.len() <= pad).collect();
        for r in &base {
            let (start, end) = endpoints(r, g);
            for a in short.iter().filter(|a| a.end(g) == start) {
                for b in short.iter().filter(|b| b.start == end && a.len() + b.len() <= pad) {
                    let left = PathElement::path((*a).clone());
                    let right = PathElement::path((*b).clone());
                    let padded = left.multiply(r, g).multiply(&right, g);
                    let v = model.coordinates(&padded).expect("padded relation stays in the window");
                    model.relations.insert(v);
                    model.relation_rows += 1;
                }
            }
        }
        Ok(model)
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of paths of `Q̂` in the window.
    pub fn num_words(&self) -> usize {
        self.paths.len()
    }

    /// Number of padded relation instances generated.
    pub fn num_relations(&self) -> usize {
        self.relation_rows
    }

    /// Dimension of the windowed quotient.
    pub fn rank(&self) -> usize {
        self.paths.len() - self.relations.rank()
    }

    pub fn coordinates(&self, a: &PathElement<K>) -> Result<SparseVec<K>, OracleError> {
        let mut v = SparseVec::new();
        for (p, c) in a.terms() {
            let i = self.paths.get(p).ok_or(OracleError::OutOfWindow {
                len: p.len(),
                max: self.max_len,
            })?;
            v.insert(i, c.clone());
        }
        Ok(v)
    }

    fn word_element(&self, word: &[Generator]) -> Result<PathElement<K>, OracleError> {
        let g = &self.graph;
        for &gen in word {
            let ok = match gen {
                Generator::Vertex(v) => v.0 < g.num_vertices(),
                Generator::Edge(e) | Generator::Ghost(e) => e.0 < g.num_edges(),
            };
            if !ok {
                return Err(OracleError::UnknownGenerator(gen));
            }
        }
        let letters = word.iter().filter(|g| !matches!(g, Generator::Vertex(_))).count();
        if letters > self.max_len {
            return Err(OracleError::OutOfWindow {
                len: letters,
                max: self.max_len,
            });
        }
        Ok(PathElement::word(g, word))
    }

    /// Canonical representative of the class of `Σ cᵢ·wordᵢ`.
    pub fn class_of(&self, terms: &[(Vec<Generator>, K)]) -> Result<SparseVec<K>, OracleError> {
        let mut sum = PathElement::zero();
        for (w, c) in terms {
            sum = sum.add(&self.word_element(w)?.scale(c));
        }
        Ok(self.relations.reduce(&self.coordinates(&sum)?))
    }

    pub fn canonical(&self, word: &[Generator]) -> Result<SparseVec<K>, OracleError> {
        self.class_of(&[(word.to_vec(), K::one())])
    }

    /// True when the two words are equal in the algebra.
    pub fn equal(&self, a: &[Generator], b: &[Generator]) -> Result<bool, OracleError> {
        Ok(self.canonical(a)? == self.canonical(b)?)
    }

    /// Rank of the classes of the given combinations of words.
    pub fn rank_of(&self, elements: &[Vec<(Vec<Generator>, K)>]) -> Result<usize, OracleError> {
        let mut e = Echelon::new();
        for terms in elements {
            e.insert(self.class_of(terms)?);
        }
        Ok(e.rank())
    }
}

fn endpoints<K: Scalar>(r: &PathElement<K>, g: &Graph) -> (crate::graph::VertexId, crate::graph::VertexId) {
    let p = r.terms().keys().next().expect("relations are nonzero");
    (p.start, p.end(g))
}

/// The letters of `Q̂`, as generators.
pub fn letters(g: &Graph) -> Vec<Generator> {
    g.extended()
        .letters()
        .map(|l| match l {
            Letter::Real(e) => Generator::Edge(e),
            Letter::Ghost(e) => Generator::Ghost(e),
        })
        .collect()
}

/// A uniformly random word: length uniform in `0..=max_len`, each letter
/// uniform over vertices, edges and ghost edges. Most such words are zero.
pub fn random_word<R: Rng>(g: &Graph, max_len: usize, rng: &mut R) -> Vec<Generator> {
    let mut alphabet: Vec<Generator> = g.vertex_ids().map(Generator::Vertex).collect();
    alphabet.extend(letters(g));
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect()
}

/// A random composable word of `Q̂` (a path, so rarely zero) of length
/// `1..=max_len`, or a vertex when the walk cannot start.
pub fn random_path_word<R: Rng>(g: &Graph, max_len: usize, rng: &mut R) -> Vec<Generator> {
    let ext = g.extended();
    let len = rng.random_range(1..=max_len.max(1));
    let mut v = crate::graph::VertexId(rng.random_range(0..g.num_vertices()));
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let outs = ext.outgoing(v);
        if outs.is_empty() {
            break;
        }
        let l = outs[rng.random_range(0..outs.len())];
        v = ext.tgt(l);
        word.push(match l {
            Letter::Real(e) => Generator::Edge(e),
            Letter::Ghost(e) => Generator::Ghost(e),
        });
    }
    if word.is_empty() {
        word.push(Generator::Vertex(v));
    }
    word
}

/// Outcome of comparing the normal-form engine with the oracle on a sample
/// of words.
#[derive(Debug, Clone, Serialize)]
pub struct Agreement {
    pub words: usize,
    /// Distinct elements among the normal forms of the sample.
    pub normal_form_classes: usize,
    /// Distinct classes of the sample under the oracle.
    pub oracle_classes: usize,
    /// Two words on which the engines disagree, with the normal forms.
    pub mismatch: Option<Mismatch>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub first: String,
    pub second: String,
    pub normal_forms_equal: bool,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.mismatch.is_none()
    }
}

fn word_text(lpa: &Lpa, w: &[Generator]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(|&g| lpa.generator_name(g)).collect::<Vec<_>>().join(" . ")
}

/// Checks, for every pair of sampled words, that equality of normal forms
/// coincides with equality in the oracle. Pairs are compared through the two
/// partitions of the sample, so the cost is linear in the sample size.
pub fn compare<K: Scalar>(
    lpa: &Arc<Lpa>,
    model: &OracleModel<K>,
    words: &[Vec<Generator>],
) -> Result<Agreement, OracleError> {
    if lpa.graph() != &model.graph {
        return Err(OracleError::GraphMismatch);
    }
    let mut by_nf: HashMap<String, (usize, SparseVec<K>)> = HashMap::new();
    let mut by_oracle: HashMap<SparseVec<K>, (usize, String)> = HashMap::new();
    let mut mismatch = None;
    for (i, w) in words.iter().enumerate() {
        let nf = Element::<K>::normal_form(lpa, w)
            .map_err(|_| OracleError::UnknownGenerator(w[0]))?
            .to_string();
        let class = model.canonical(w)?;
        if mismatch.is_some() {
            continue;
        }
        if let Some((j, other)) = by_nf.get(&nf) {
            if *other != class {
                mismatch = Some((*j, i, true));
            }
        }
        if let Some((j, other)) = by_oracle.get(&class) {
            if *other != nf {
                mismatch = Some((*j, i, false));
            }
        }
        by_nf.entry(nf.clone()).or_insert((i, class.clone()));
        by_oracle.entry(class).or_insert((i, nf));
    }
    Ok(Agreement {
        words: words.len(),
        normal_form_classes: by_nf.len(),
        oracle_classes: by_oracle.len(),
        mismatch: mismatch.map(|(j, i, nf_equal)| Mismatch {
            first: word_text(lpa, &words[j]),
            second: word_text(lpa, &words[i]),
            normal_forms_equal: nf_equal,
        }),
    })
}

/// Oracle rank of the normal-form basis of the window, which equals its
/// size exactly when the basis is independent in the quotient.
pub fn basis_rank<K: Scalar>(lpa: &Lpa, model: &OracleModel<K>) -> Result<usize, OracleError> {
    let elements: Vec<Vec<(Vec<Generator>, K)>> = lpa
        .basis_monomials(model.max_len())
        .iter()
        .map(|m| vec![(lpa.word(m), K::one())])
        .collect();
    model.rank_of(&elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Model = OracleModel<Rational>;

    fn display7() -> Graph {
        Graph::new(
            ["v0", "v1", "v2"],
            [("x0", "v0", "v0"), ("e1", "v1", "v2"), ("e2", "v1", "v0")],
        )
        .unwrap()
    }

    fn word(g: &Graph, names: &[&str]) -> Vec<Generator> {
        names
            .iter()
            .map(|n| {
                if let Some(e) = n.strip_suffix('*') {
                    Generator::Ghost(g.edge_by_name(e).unwrap())
                } else if let Some(e) = g.find_edge(n) {
                    Generator::Edge(e)
                } else {
                    Generator::Vertex(g.vertex(n).unwrap())
                }
            })
            .collect()
    }

    #[test]
    fn ranks_of_small_algebras() {
        let point = Graph::new(["v"], Vec::<(&str, &str, &str)>::new()).unwrap();
        assert_eq!(Model::build(&point, 2).unwrap().rank(), 1);

        let lp = Graph::new(["v"], [("x", "v", "v")]).unwrap();
        assert_eq!(Model::build(&lp, 2).unwrap().rank(), 5);

        let qp = Graph::new(["v1", "v2"], [("e1", "v1", "v2")]).unwrap();
        assert_eq!(Model::build(&qp, 2).unwrap().rank(), 4);
    }

    #[test]
    fn window_errors() {
        let g = display7();
        assert_eq!(Model::build(&g, 1).unwrap_err(), OracleError::WindowTooSmall(1));
        let m = Model::build(&g, 2).unwrap();
        let long = word(&g, &["x0", "x0", "x0"]);
        assert!(matches!(m.canonical(&long), Err(OracleError::OutOfWindow { len: 3, max: 2 })));
    }

    #[test]
    fn equalities_from_the_relations() {
        let g = display7();
        let m = Model::build(&g, 3).unwrap();
        assert!(m.equal(&word(&g, &["x0", "x0*"]), &word(&g, &["v0"])).unwrap());
        assert!(m.canonical(&word(&g, &["e1*", "e2"])).unwrap().is_empty());
        assert!(!m.equal(&word(&g, &["e2"]), &word(&g, &["e1"])).unwrap());
        // e1 e1* = v1 - e2 e2*
        let lhs = m.class_of(&[(word(&g, &["e1", "e1*"]), Rational::from_i64(1))]).unwrap();
        let rhs = m
            .class_of(&[
                (word(&g, &["v1"]), Rational::from_i64(1)),
                (word(&g, &["e2", "e2*"]), Rational::from_i64(-1)),
            ])
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
