//! Algebra homomorphisms out of Leavitt path algebras, given by the images of
//! generators.
//!
//! A [`GeneratorMap`] is validated when it is built: every instance of the
//! defining relations is pushed through the image table and compared in the
//! codomain, and each image is checked for homogeneity. The resulting
//! [`HomReport`] is stored with the map.

mod descriptor;
mod maps;

use std::collections::BTreeSet;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, TrimmabilityReport};
use crate::lpa::text::{parse_element, parse_tensor, ParseError};
use crate::lpa::{Element, Generator, Lpa, LpaError, Monomial, TensorElement};
use crate::scalar::Scalar;

pub use descriptor::{AnyMap, DescriptorError, GraphRef, HomDescriptor, HomKind};
pub use maps::{ideal_span, make_delta, make_pi2, Trimmed};

#[derive(Debug, Error)]
pub enum MorphismError {
    #[error("graph is not trimmable at {}: {}", .0.v0, .0.failure.as_ref().map(|f| f.to_string()).unwrap_or_default())]
    NotTrimmable(Box<TrimmabilityReport>),
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("element does not belong to the domain of {0}")]
    DomainMismatch(String),
    #[error("image of {generator} does not live in the codomain of {map}")]
    CodomainMismatch { map: String, generator: String },
    #[error("{0}")]
    MalformedGraph(String),
    #[error("vertex {0} is neither a sink nor the base of a loop")]
    NotHereditary(String),
    #[error(transparent)]
    Lpa(#[from] LpaError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What a generator map can land in: `L_k(Q)` or `L_k(Q) ⊗ k[u, u⁻¹]`.
pub trait Codomain<K: Scalar>: Clone + PartialEq + fmt::Display + fmt::Debug {
    fn zero_in(lpa: &Arc<Lpa>) -> Self;
    fn parse_in(lpa: &Arc<Lpa>, text: &str) -> Result<Self, ParseError>;
    fn ambient(&self) -> &Arc<Lpa>;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Result<Self, LpaError>;
    fn times(&self, other: &Self) -> Result<Self, LpaError>;
    fn scaled(&self, c: &K) -> Self;
    /// Degrees of the homogeneous components present.
    fn degrees(&self) -> BTreeSet<i64>;
    /// Terms keyed by monomial and Laurent exponent; plain elements use
    /// exponent 0.
    fn coordinates(&self) -> Vec<((Monomial, i64), K)>;
    /// Inverse of [`Codomain::coordinates`].
    fn from_coordinates<I>(lpa: &Arc<Lpa>, terms: I) -> Self
    where
        I: IntoIterator<Item = ((Monomial, i64), K)>;
    /// True for `L_k(Q) ⊗ k[u, u⁻¹]`.
    const TENSOR: bool;
}

impl<K: Scalar> Codomain<K> for Element<K> {
    const TENSOR: bool = false;

    fn zero_in(lpa: &Arc<Lpa>) -> Self {
        Element::zero(lpa)
    }
    fn parse_in(lpa: &Arc<Lpa>, text: &str) -> Result<Self, ParseError> {
        parse_element(lpa, text)
    }
    fn ambient(&self) -> &Arc<Lpa> {
        self.lpa()
    }
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Result<Self, LpaError> {
        self.try_add(other)
    }
    fn times(&self, other: &Self) -> Result<Self, LpaError> {
        self.multiply(other)
    }
    fn scaled(&self, c: &K) -> Self {
        self.scale(c)
    }
    fn degrees(&self) -> BTreeSet<i64> {
        Element::degrees(self)
    }
    fn coordinates(&self) -> Vec<((Monomial, i64), K)> {
        self.terms().iter().map(|(m, c)| ((m.clone(), 0), c.clone())).collect()
    }
    fn from_coordinates<I>(lpa: &Arc<Lpa>, terms: I) -> Self
    where
        I: IntoIterator<Item = ((Monomial, i64), K)>,
    {
        let mut out = Element::zero(lpa);
        for ((m, _), c) in terms {
            out.add_term(m, c);
        }
        out
    }
}

impl<K: Scalar> Codomain<K> for TensorElement<K> {
    const TENSOR: bool = true;

    fn zero_in(lpa: &Arc<Lpa>) -> Self {
        TensorElement::zero(lpa)
    }
    fn parse_in(lpa: &Arc<Lpa>, text: &str) -> Result<Self, ParseError> {
        parse_tensor(lpa, text)
    }
    fn ambient(&self) -> &Arc<Lpa> {
        self.lpa()
    }
    fn is_zero(&self) -> bool {
        TensorElement::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Result<Self, LpaError> {
        self.try_add(other)
    }
    fn times(&self, other: &Self) -> Result<Self, LpaError> {
        self.tensor_multiply(other)
    }
    fn scaled(&self, c: &K) -> Self {
        self.scale(c)
    }
    fn degrees(&self) -> BTreeSet<i64> {
        TensorElement::degrees(self)
    }
    fn coordinates(&self) -> Vec<((Monomial, i64), K)> {
        self.terms().iter().map(|(k, c)| (k.clone(), c.clone())).collect()
    }
    fn from_coordinates<I>(lpa: &Arc<Lpa>, terms: I) -> Self
    where
        I: IntoIterator<Item = ((Monomial, i64), K)>,
    {
        let mut out = TensorElement::zero(lpa);
        for ((m, n), c) in terms {
            out.add_term(m, n, c);
        }
        out
    }
}

/// The families of defining relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationClass {
    /// `v w = δ_{vw} v`
    VertexIdempotents,
    /// `s(x) x = x t(x) = x`
    EdgeEndpoints,
    /// `t(x) x* = x* s(x) = x*`
    GhostEndpoints,
    /// `x* y = δ_{xy} t(x)`
    GhostEdgeOrthogonality,
    /// `Σ_{x ∈ s⁻¹(v)} x x* = v` for non-sinks `v`
    CuntzKrieger,
}

impl RelationClass {
    pub const ALL: [RelationClass; 5] = [
        RelationClass::VertexIdempotents,
        RelationClass::EdgeEndpoints,
        RelationClass::GhostEndpoints,
        RelationClass::GhostEdgeOrthogonality,
        RelationClass::CuntzKrieger,
    ];
}

/// One relation instance: `Σ cᵢ·wordᵢ = rhs`, with `rhs` a single word or 0.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    pub class: RelationClass,
    pub lhs: Vec<Vec<Generator>>,
    pub rhs: Option<Vec<Generator>>,
}

impl RelationInstance {
    pub fn describe(&self, lpa: &Lpa) -> String {
        let word = |w: &[Generator]| {
            w.iter()
                .map(|&g| lpa.generator_name(g))
                .collect::<Vec<_>>()
                .join(" . ")
        };
        let lhs = self.lhs.iter().map(|w| word(w)).collect::<Vec<_>>().join(" + ");
        let rhs = self.rhs.as_ref().map_or("0".to_string(), |w| word(w));
        format!("{lhs} = {rhs}")
    }
}

/// Every instance of the defining relations over the graph of `lpa`.
pub fn relation_instances(lpa: &Lpa) -> Vec<RelationInstance> {
    use Generator::*;
    let g = lpa.graph();
    let mut out = Vec::new();
    for v in g.vertex_ids() {
        for w in g.vertex_ids() {
            out.push(RelationInstance {
                class: RelationClass::VertexIdempotents,
                lhs: vec![vec![Vertex(v), Vertex(w)]],
                rhs: (v == w).then(|| vec![Vertex(v)]),
            });
        }
    }
    for x in g.edge_ids() {
        for lhs in [vec![Vertex(g.src(x)), Edge(x)], vec![Edge(x), Vertex(g.tgt(x))]] {
            out.push(RelationInstance {
                class: RelationClass::EdgeEndpoints,
                lhs: vec![lhs],
                rhs: Some(vec![Edge(x)]),
            });
        }
    }
    for x in g.edge_ids() {
        for lhs in [vec![Vertex(g.tgt(x)), Ghost(x)], vec![Ghost(x), Vertex(g.src(x))]] {
            out.push(RelationInstance {
                class: RelationClass::GhostEndpoints,
                lhs: vec![lhs],
                rhs: Some(vec![Ghost(x)]),
            });
        }
    }
    for x in g.edge_ids() {
        for y in g.edge_ids() {
            out.push(RelationInstance {
                class: RelationClass::GhostEdgeOrthogonality,
                lhs: vec![vec![Ghost(x), Edge(y)]],
                rhs: (x == y).then(|| vec![Vertex(g.tgt(x))]),
            });
        }
    }
    for v in g.vertex_ids() {
        let out_edges = g.outgoing(v);
        if out_edges.is_empty() {
            continue;
        }
        out.push(RelationInstance {
            class: RelationClass::CuntzKrieger,
            lhs: out_edges.iter().map(|&e| vec![Edge(e), Ghost(e)]).collect(),
            rhs: Some(vec![Vertex(v)]),
        });
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub class: RelationClass,
    pub instances: usize,
    pub holds: bool,
    /// First failing instance, with the two sides as computed.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomReport {
    pub relations: Vec<RelationCheck>,
    pub graded: bool,
    pub grading_failure: Option<String>,
    pub vertex_images_nonzero: bool,
    pub zero_vertex_images: Vec<String>,
}

impl HomReport {
    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }

    pub fn first_failure(&self) -> Option<&RelationCheck> {
        self.relations.iter().find(|r| !r.holds)
    }
}

/// An algebra map out of `L_k(Q)` fixed by its values on generators.
#[derive(Clone)]
pub struct GeneratorMap<K: Scalar, C: Codomain<K>> {
    name: String,
    domain: Arc<Lpa>,
    codomain: Arc<Lpa>,
    images: Vec<C>,
    report: HomReport,
    _scalar: PhantomData<K>,
}

impl<K: Scalar, C: Codomain<K>> fmt::Debug for GeneratorMap<K, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let table: Vec<String> = self
            .domain
            .generators()
            .into_iter()
            .map(|g| format!("{} -> {}", self.domain.generator_name(g), self.image(g)))
            .collect();
        f.debug_struct("GeneratorMap")
            .field("name", &self.name)
            .field("images", &table)
            .finish()
    }
}

impl<K: Scalar, C: Codomain<K>> GeneratorMap<K, C> {
    /// Builds the map from a total image function and validates it.
    pub fn new<F>(name: &str, domain: &Arc<Lpa>, codomain: &Arc<Lpa>, mut image: F) -> Result<Self, MorphismError>
    where
        F: FnMut(Generator) -> Result<C, MorphismError>,
    {
        let mut images = Vec::with_capacity(domain.num_generators());
        for g in domain.generators() {
            let img = image(g)?;
            if !Lpa::same(img.ambient(), codomain) {
                return Err(MorphismError::CodomainMismatch {
                    map: name.to_string(),
                    generator: domain.generator_name(g),
                });
            }
            images.push(img);
        }
        let mut map = GeneratorMap {
            name: name.to_string(),
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            images,
            report: HomReport {
                relations: Vec::new(),
                graded: false,
                grading_failure: None,
                vertex_images_nonzero: false,
                zero_vertex_images: Vec::new(),
            },
            _scalar: PhantomData,
        };
        map.report = map.validate()?;
        Ok(map)
    }

    /// Builds the map from images written in the text grammar, keyed by
    /// generator name. Every generator needs an entry.
    pub fn from_text_table<'a, I>(name: &str, domain: &Arc<Lpa>, codomain: &Arc<Lpa>, table: I) -> Result<Self, MorphismError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut parsed = vec![None; domain.num_generators()];
        for (gen, text) in table {
            let g = domain.generator_by_name(gen)?;
            parsed[domain.generator_index(g)] = Some(C::parse_in(codomain, text)?);
        }
        Self::new(name, domain, codomain, |g| {
            parsed[domain.generator_index(g)]
                .clone()
                .ok_or_else(|| MorphismError::MissingImage(domain.generator_name(g)))
        })
    }

    /// A copy with one image replaced, revalidated.
    pub fn with_image(&self, g: Generator, image: C) -> Result<Self, MorphismError> {
        self.with_images([(g, image)])
    }

    /// A copy with some images replaced, revalidated.
    pub fn with_images<I>(&self, overrides: I) -> Result<Self, MorphismError>
    where
        I: IntoIterator<Item = (Generator, C)>,
    {
        let mut images = self.images.clone();
        for (g, image) in overrides {
            images[self.domain.generator_index(g)] = image;
        }
        Self::new(&self.name, &self.domain, &self.codomain, |h| {
            Ok(images[self.domain.generator_index(h)].clone())
        })
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Arc<Lpa> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Lpa> {
        &self.codomain
    }

    pub fn image(&self, g: Generator) -> &C {
        &self.images[self.domain.generator_index(g)]
    }

    pub fn report(&self) -> &HomReport {
        &self.report
    }

    /// Image of a word: the product of the generator images.
    pub fn apply_word(&self, word: &[Generator]) -> Result<C, MorphismError> {
        let Some((&first, rest)) = word.split_first() else {
            let mut unit = C::zero_in(&self.codomain);
            for v in self.domain.graph().vertex_ids() {
                unit = unit.plus(self.image(Generator::Vertex(v)))?;
            }
            return Ok(unit);
        };
        let mut acc = self.image(first).clone();
        for &g in rest {
            if acc.is_zero() {
                break;
            }
            acc = acc.times(self.image(g))?;
        }
        Ok(acc)
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Result<C, MorphismError> {
        self.apply_word(&self.domain.word(m))
    }

    /// The multiplicative, linear extension of the image table.
    pub fn apply(&self, a: &Element<K>) -> Result<C, MorphismError> {
        if !Lpa::same(a.lpa(), &self.domain) {
            return Err(MorphismError::DomainMismatch(self.name.clone()));
        }
        let mut out = C::zero_in(&self.codomain);
        for (m, c) in a.terms() {
            let img = self.apply_monomial(m)?;
            out = out.plus(&img.scaled(c))?;
        }
        Ok(out)
    }

    fn validate(&self) -> Result<HomReport, MorphismError> {
        let mut relations = Vec::new();
        let instances = relation_instances(&self.domain);
        for class in RelationClass::ALL {
            let mut check = RelationCheck {
                class,
                instances: 0,
                holds: true,
                failure: None,
            };
            for inst in instances.iter().filter(|i| i.class == class) {
                check.instances += 1;
                let mut lhs = C::zero_in(&self.codomain);
                for w in &inst.lhs {
                    lhs = lhs.plus(&self.apply_word(w)?)?;
                }
                let rhs = match &inst.rhs {
                    Some(w) => self.apply_word(w)?,
                    None => C::zero_in(&self.codomain),
                };
                if lhs != rhs && check.holds {
                    check.holds = false;
                    check.failure = Some(format!(
                        "{}: image of left side is {lhs}, image of right side is {rhs}",
                        inst.describe(&self.domain)
                    ));
                }
            }
            relations.push(check);
        }

        let mut graded = true;
        let mut grading_failure = None;
        let mut zero_vertex_images = Vec::new();
        for g in self.domain.generators() {
            let img = self.image(g);
            let degs = img.degrees();
            if degs.iter().any(|&d| d != g.degree()) && graded {
                graded = false;
                grading_failure = Some(format!(
                    "{} has degree {} but its image {img} has degrees {:?}",
                    self.domain.generator_name(g),
                    g.degree(),
                    degs
                ));
            }
            if matches!(g, Generator::Vertex(_)) && img.is_zero() {
                zero_vertex_images.push(self.domain.generator_name(g));
            }
        }
        Ok(HomReport {
            relations,
            graded,
            grading_failure,
            vertex_images_nonzero: zero_vertex_images.is_empty(),
            zero_vertex_images,
        })
    }
}

/// `h ⊗ id` applied to a tensor over the domain of `h`.
pub fn tensor_with_identity<K: Scalar>(
    h: &GeneratorMap<K, Element<K>>,
    t: &TensorElement<K>,
) -> Result<TensorElement<K>, MorphismError> {
    if !Lpa::same(t.lpa(), h.domain()) {
        return Err(MorphismError::DomainMismatch(format!("{} ⊗ id", h.name())));
    }
    let mut err = None;
    let out = t.map_left(h.codomain(), |m| match h.apply_monomial(m) {
        Ok(e) => Ok(e),
        Err(MorphismError::Lpa(e)) => Err(e),
        Err(e) => {
            err = Some(e);
            Ok(Element::zero(h.codomain()))
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
