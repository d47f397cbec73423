//! JSON descriptors for homomorphisms.
//!
//! ```json
//! {"kind": "f", "graph": "display7.json", "v0": "v0"}
//! {"kind": "custom", "role": "f", "graph": "display7.json", "v0": "v0",
//!  "images": {"x0": "0"}}
//! ```
//!
//! `graph` is a path (relative to the descriptor file) or an inline graph
//! object, and is always the full graph `Q` of the trimmable pair. The one
//! exception is a `delta` role without `v0`, where `graph` is `Q'` itself.
//! A custom descriptor starts from the standard map of its `role` and
//! replaces the listed images.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{make_delta, Codomain, GeneratorMap, HomReport, MorphismError, Trimmed};
use crate::graph::{Graph, GraphError, GraphFile};
use crate::lpa::{Element, Lpa, TensorElement};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomKind {
    Pi1,
    Pi2,
    F,
    Delta,
    Custom,
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HomKind::Pi1 => "pi1",
            HomKind::Pi2 => "pi2",
            HomKind::F => "f",
            HomKind::Delta => "delta",
            HomKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Path(String),
    Inline(GraphFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDescriptor {
    pub kind: HomKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<HomKind>,
    pub graph: GraphRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub images: BTreeMap<String, String>,
}

#[derive(Debug, Error)]
pub enum DescriptorError {
    #[error("malformed descriptor: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("a custom descriptor needs a role (pi1, pi2, f or delta)")]
    MissingRole,
    #[error("role must be pi1, pi2, f or delta")]
    BadRole,
    #[error("only custom descriptors may list images (kind is {0})")]
    ImagesOnStandardKind(HomKind),
    #[error("descriptor for {0} needs v0")]
    MissingV0(HomKind),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// A built map of either codomain type.
#[derive(Debug, Clone)]
pub enum AnyMap<K: Scalar> {
    Plain(GeneratorMap<K, Element<K>>),
    Tensor(GeneratorMap<K, TensorElement<K>>),
}

impl<K: Scalar> AnyMap<K> {
    pub fn name(&self) -> &str {
        match self {
            AnyMap::Plain(m) => m.name(),
            AnyMap::Tensor(m) => m.name(),
        }
    }

    pub fn domain(&self) -> &Arc<Lpa> {
        match self {
            AnyMap::Plain(m) => m.domain(),
            AnyMap::Tensor(m) => m.domain(),
        }
    }

    pub fn codomain(&self) -> &Arc<Lpa> {
        match self {
            AnyMap::Plain(m) => m.codomain(),
            AnyMap::Tensor(m) => m.codomain(),
        }
    }

    pub fn report(&self) -> &HomReport {
        match self {
            AnyMap::Plain(m) => m.report(),
            AnyMap::Tensor(m) => m.report(),
        }
    }

    /// Applies the map and renders the image in the text grammar.
    pub fn apply_to_text(&self, a: &Element<K>) -> Result<String, MorphismError> {
        Ok(match self {
            AnyMap::Plain(m) => m.apply(a)?.to_string(),
            AnyMap::Tensor(m) => m.apply(a)?.to_string(),
        })
    }
}

fn with_overrides<K: Scalar, C: Codomain<K>>(
    map: GeneratorMap<K, C>,
    images: &BTreeMap<String, String>,
) -> Result<GeneratorMap<K, C>, MorphismError> {
    if images.is_empty() {
        return Ok(map);
    }
    let mut overrides = Vec::new();
    for (gen, text) in images {
        let g = map.domain().generator_by_name(gen)?;
        overrides.push((g, C::parse_in(map.codomain(), text)?));
    }
    map.with_images(overrides)
}

impl HomDescriptor {
    pub fn from_json(text: &str) -> Result<HomDescriptor, DescriptorError> {
        let d: HomDescriptor = serde_json::from_str(text)?;
        d.role()?;
        if d.kind != HomKind::Custom && !d.images.is_empty() {
            return Err(DescriptorError::ImagesOnStandardKind(d.kind));
        }
        Ok(d)
    }

    /// Reads a descriptor and the graph it refers to.
    pub fn load(path: &Path) -> Result<(HomDescriptor, Graph), DescriptorError> {
        let text = std::fs::read_to_string(path).map_err(|source| DescriptorError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let d = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let graph = d.resolve_graph(base)?;
        Ok((d, graph))
    }

    pub fn resolve_graph(&self, base: &Path) -> Result<Graph, DescriptorError> {
        match &self.graph {
            GraphRef::Inline(file) => Ok(Graph::from_file(file)?),
            GraphRef::Path(p) => {
                let path = base.join(p);
                let text = std::fs::read_to_string(&path).map_err(|source| DescriptorError::Io { path, source })?;
                Ok(Graph::from_json(&text)?)
            }
        }
    }

    /// The map being described: `kind`, or `role` for custom descriptors.
    pub fn role(&self) -> Result<HomKind, DescriptorError> {
        match (self.kind, self.role) {
            (HomKind::Custom, None) => Err(DescriptorError::MissingRole),
            (HomKind::Custom, Some(HomKind::Custom)) => Err(DescriptorError::BadRole),
            (HomKind::Custom, Some(r)) => Ok(r),
            (k, _) => Ok(k),
        }
    }

    /// Builds the map over `graph`.
    pub fn build<K: Scalar>(&self, graph: Graph) -> Result<AnyMap<K>, DescriptorError> {
        let role = self.role()?;
        let lpa = Lpa::new(graph);
        match &self.v0 {
            None if role == HomKind::Delta => {
                Ok(AnyMap::Tensor(with_overrides(make_delta(&lpa)?, &self.images)?))
            }
            None => Err(DescriptorError::MissingV0(role)),
            Some(v0) => self.build_in(&Trimmed::new(&lpa, v0)?),
        }
    }

    /// Builds the map over the algebras of an existing trimmable pair.
    pub fn build_in<K: Scalar>(&self, t: &Trimmed) -> Result<AnyMap<K>, DescriptorError> {
        Ok(match self.role()? {
            HomKind::Pi1 => AnyMap::Plain(with_overrides(t.pi1()?, &self.images)?),
            HomKind::Pi2 => AnyMap::Plain(with_overrides(t.pi2()?, &self.images)?),
            HomKind::F => AnyMap::Tensor(with_overrides(t.f()?, &self.images)?),
            HomKind::Delta => AnyMap::Tensor(with_overrides(t.delta()?, &self.images)?),
            HomKind::Custom => return Err(DescriptorError::BadRole),
        })
    }
}
