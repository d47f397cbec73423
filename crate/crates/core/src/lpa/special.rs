use crate::graph::{EdgeId, Graph, VertexId};

use super::LpaError;

/// One chosen outgoing edge `γ(v)` per non-sink vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialEdgeChoice {
    chosen: Vec<Option<EdgeId>>,
}

impl SpecialEdgeChoice {
    /// The lexicographically smallest outgoing edge at every vertex.
    pub fn lexicographic(g: &Graph) -> SpecialEdgeChoice {
        Self::rotated(g, 0)
    }

    /// The outgoing edge at position `shift mod outdeg(v)` in identifier order.
    pub fn rotated(g: &Graph, shift: usize) -> SpecialEdgeChoice {
        let chosen = g
            .vertex_ids()
            .map(|v| {
                let out = g.outgoing(v);
                (!out.is_empty()).then(|| out[shift % out.len()])
            })
            .collect();
        SpecialEdgeChoice { chosen }
    }

    /// Builds a choice from `(vertex, edge)` names; vertices that are not
    /// listed get their smallest outgoing edge.
    pub fn from_names<'a, I>(g: &Graph, pairs: I) -> Result<SpecialEdgeChoice, LpaError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut choice = Self::lexicographic(g);
        for (v, e) in pairs {
            let v = g.vertex(v)?;
            let e = g.edge_by_name(e)?;
            choice.chosen[v.0] = Some(e);
        }
        choice.check(g)?;
        Ok(choice)
    }

    /// Transfers the choice on `parent` to a subgraph: an edge that survives
    /// is kept, otherwise the smallest surviving outgoing edge is used.
    pub fn restrict(&self, parent: &Graph, sub: &Graph) -> SpecialEdgeChoice {
        let chosen = sub
            .vertex_ids()
            .map(|v| {
                let out = sub.outgoing(v);
                if out.is_empty() {
                    return None;
                }
                let inherited = parent
                    .find_vertex(sub.vertex_name(v))
                    .and_then(|pv| self.get(pv))
                    .and_then(|pe| sub.find_edge(parent.edge_name(pe)));
                Some(inherited.unwrap_or(out[0]))
            })
            .collect();
        SpecialEdgeChoice { chosen }
    }

    pub fn get(&self, v: VertexId) -> Option<EdgeId> {
        self.chosen.get(v.0).copied().flatten()
    }

    pub(crate) fn check(&self, g: &Graph) -> Result<(), LpaError> {
        if self.chosen.len() != g.num_vertices() {
            return Err(LpaError::InvalidSpecialEdge("vertex count mismatch".into()));
        }
        for v in g.vertex_ids() {
            match (self.get(v), g.outgoing(v).is_empty()) {
                (None, true) => {}
                (Some(e), false) if e.0 < g.num_edges() && g.src(e) == v => {}
                _ => {
                    return Err(LpaError::InvalidSpecialEdge(format!(
                        "vertex {} needs one of its own outgoing edges",
                        g.vertex_name(v)
                    )))
                }
            }
        }
        Ok(())
    }

    /// `v=e` pairs, for diagnostics.
    pub fn describe(&self, g: &Graph) -> Vec<String> {
        g.vertex_ids()
            .filter_map(|v| self.get(v).map(|e| format!("{}={}", g.vertex_name(v), g.edge_name(e))))
            .collect()
    }
}
