use std::collections::HashSet;
use std::sync::Arc;

use super::{GeneratorMap, MorphismError};
use crate::graph::TrimmabilityReport;
use crate::lpa::{Element, Generator, Lpa, TensorElement};
use crate::scalar::Scalar;

/// The algebras attached to a trimmable pair: `L(Q)`, `L(Q')` with `v0`
/// removed, and `L(Q'')` with the loop `x0` removed. The special edges of
/// `Q'` and `Q''` are inherited from `Q` where the edge survives.
#[derive(Debug, Clone)]
pub struct Trimmed {
    pub report: TrimmabilityReport,
    pub q: Arc<Lpa>,
    pub qp: Arc<Lpa>,
    pub qpp: Arc<Lpa>,
    pub v0: String,
    pub x0: String,
}

impl Trimmed {
    pub fn new(q: &Arc<Lpa>, v0: &str) -> Result<Trimmed, MorphismError> {
        let report = q.graph().is_trimmable(v0)?;
        if !report.verdict {
            return Err(MorphismError::NotTrimmable(Box::new(report)));
        }
        let qp_graph = report.trimmed.clone().expect("trimmable pair has Q'");
        let qpp_graph = report.unlooped.clone().expect("trimmable pair has Q''");
        let x0 = report.loop_edge.clone().expect("trimmable pair has a loop");
        let qp_choice = q.special().restrict(q.graph(), &qp_graph);
        let qpp_choice = q.special().restrict(q.graph(), &qpp_graph);
        Ok(Trimmed {
            qp: Lpa::with_choice(qp_graph, qp_choice)?,
            qpp: Lpa::with_choice(qpp_graph, qpp_choice)?,
            q: Arc::clone(q),
            v0: v0.to_string(),
            x0,
            report,
        })
    }

    /// `π1 : L(Q) → L(Q')`
    pub fn pi1<K: Scalar>(&self) -> Result<GeneratorMap<K, Element<K>>, MorphismError> {
        projection("pi1", &self.q, &self.qp)
    }

    /// `π2 : L(Q'') → L(Q')`
    pub fn pi2<K: Scalar>(&self) -> Result<GeneratorMap<K, Element<K>>, MorphismError> {
        projection("pi2", &self.qpp, &self.qp)
    }

    /// `f : L(Q) → L(Q'') ⊗ k[u, u⁻¹]`
    pub fn f<K: Scalar>(&self) -> Result<GeneratorMap<K, TensorElement<K>>, MorphismError> {
        let q = &self.q;
        let qpp = &self.qpp;
        let x0 = q.graph().edge_by_name(&self.x0)?;
        let v0 = qpp.generator_by_name(&format!("[{}]", self.v0))?;
        GeneratorMap::new("f", q, qpp, |g| {
            let (target, n) = match g {
                Generator::Edge(e) if e == x0 => (v0, 1),
                Generator::Ghost(e) if e == x0 => (v0, -1),
                _ => (qpp.generator_by_name(&q.generator_name(g))?, g.degree()),
            };
            Ok(TensorElement::generator(qpp, target, n))
        })
    }

    /// `δ : L(Q') → L(Q') ⊗ k[u, u⁻¹]`
    pub fn delta<K: Scalar>(&self) -> Result<GeneratorMap<K, TensorElement<K>>, MorphismError> {
        make_delta(&self.qp)
    }
}

/// Identity on generators that survive in `codomain` (matched by name), zero
/// on the rest.
fn projection<K: Scalar>(
    name: &str,
    domain: &Arc<Lpa>,
    codomain: &Arc<Lpa>,
) -> Result<GeneratorMap<K, Element<K>>, MorphismError> {
    let cg = codomain.graph();
    GeneratorMap::new(name, domain, codomain, |g| {
        let dg = domain.graph();
        let image = match g {
            Generator::Vertex(v) => cg.find_vertex(dg.vertex_name(v)).map(Generator::Vertex),
            Generator::Edge(e) => cg.find_edge(dg.edge_name(e)).map(Generator::Edge),
            Generator::Ghost(e) => cg.find_edge(dg.edge_name(e)).map(Generator::Ghost),
        };
        Ok(match image {
            Some(h) => Element::generator(codomain, h),
            None => Element::zero(codomain),
        })
    })
}

/// `π2 : L(Q'') → L(Q')` built from `Q''` alone, where `v0` must be a sink of
/// `Q''`. `Q'` is `Q''` with `v0` removed.
pub fn make_pi2<K: Scalar>(qpp: &Arc<Lpa>, v0: &str) -> Result<GeneratorMap<K, Element<K>>, MorphismError> {
    if !qpp.graph().is_sink(v0)? {
        return Err(MorphismError::MalformedGraph(format!(
            "{v0} emits edges, so this is not a graph with its loop removed"
        )));
    }
    let qp_graph = qpp.graph().delete_vertex(v0)?.graph;
    let choice = qpp.special().restrict(qpp.graph(), &qp_graph);
    let qp = Lpa::with_choice(qp_graph, choice)?;
    projection("pi2", qpp, &qp)
}

/// `δ : L(Q') → L(Q') ⊗ k[u, u⁻¹]`, sending each generator to itself times
/// `u` raised to its degree.
pub fn make_delta<K: Scalar>(qp: &Arc<Lpa>) -> Result<GeneratorMap<K, TensorElement<K>>, MorphismError> {
    GeneratorMap::new("delta", qp, qp, |g| Ok(TensorElement::generator(qp, g, g.degree())))
}

/// Normal forms of the words `x y*` with paths `x`, `y` ending at `v` and
/// `|x| + |y| ≤ max_len`, without zeros or repetitions. For a sink or a loop
/// base these span the ideal generated by `v`.
pub fn ideal_span<K: Scalar>(lpa: &Arc<Lpa>, v: &str, max_len: usize) -> Result<Vec<Element<K>>, MorphismError> {
    let g = lpa.graph();
    let vid = g.vertex(v)?;
    if !g.is_sink_id(vid) && !g.has_loop_at(vid) {
        return Err(MorphismError::NotHereditary(v.to_string()));
    }
    let paths = g.paths_ending_at(vid, max_len);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in &paths {
        for y in &paths {
            if x.len() + y.len() > max_len {
                continue;
            }
            let mut word: Vec<Generator> = x.edges.iter().map(|&e| Generator::Edge(e)).collect();
            word.extend(y.edges.iter().rev().map(|&e| Generator::Ghost(e)));
            if word.is_empty() {
                word.push(Generator::Vertex(vid));
            }
            let nf = Element::<K>::normal_form(lpa, &word)?;
            if !nf.is_zero() && seen.insert(nf.to_string()) {
                out.push(nf);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::lpa::text::{parse_element, parse_tensor};
    use crate::scalar::Rational;

    fn lpa7() -> Arc<Lpa> {
        Lpa::new(
            Graph::new(
                ["v0", "v1", "v2"],
                [("x0", "v0", "v0"), ("e1", "v1", "v2"), ("e2", "v1", "v0")],
            )
            .unwrap(),
        )
    }

    fn trimmed() -> Trimmed {
        Trimmed::new(&lpa7(), "v0").unwrap()
    }

    fn image_text<C: std::fmt::Display>(c: &C) -> String {
        c.to_string()
    }

    #[test]
    fn pi1_images() {
        let t = trimmed();
        let pi1 = t.pi1::<Rational>().unwrap();
        let gen = |n: &str| t.q.generator_by_name(n).unwrap();
        assert_eq!(image_text(pi1.image(gen("e1"))), "e1");
        assert_eq!(image_text(pi1.image(gen("x0"))), "0");
        assert_eq!(image_text(pi1.image(gen("e2"))), "0");
        assert_eq!(image_text(pi1.image(gen("v0"))), "0");
        assert!(pi1.report().relations_hold());
        assert!(pi1.report().graded);
        assert!(!pi1.report().vertex_images_nonzero);
        assert_eq!(pi1.report().zero_vertex_images, ["[v0]"]);
    }

    #[test]
    fn pi2_images() {
        let t = trimmed();
        let pi2 = t.pi2::<Rational>().unwrap();
        let gen = |n: &str| t.qpp.generator_by_name(n).unwrap();
        assert_eq!(image_text(pi2.image(gen("v0"))), "0");
        assert_eq!(image_text(pi2.image(gen("e1*"))), "e1^*");
        assert_eq!(image_text(pi2.image(gen("e2"))), "0");
        assert!(pi2.report().relations_hold() && pi2.report().graded);

        let alone = make_pi2::<Rational>(&t.qpp, "v0").unwrap();
        assert_eq!(alone.codomain().graph(), t.qp.graph());
        assert!(matches!(
            make_pi2::<Rational>(&t.q, "v0"),
            Err(MorphismError::MalformedGraph(_))
        ));
    }

    #[test]
    fn f_images() {
        let t = trimmed();
        let f = t.f::<Rational>().unwrap();
        let gen = |n: &str| t.q.generator_by_name(n).unwrap();
        assert_eq!(image_text(f.image(gen("x0"))), "[v0] @ u");
        assert_eq!(image_text(f.image(gen("x0*"))), "[v0] @ u^-1");
        assert_eq!(image_text(f.image(gen("e2"))), "e2 @ u");
        assert_eq!(image_text(f.image(gen("v1"))), "[v1] @ 1");
        let r = f.report();
        assert!(r.relations_hold() && r.graded && r.vertex_images_nonzero);
    }

    #[test]
    fn delta_images() {
        let t = trimmed();
        let d = t.delta::<Rational>().unwrap();
        let gen = |n: &str| t.qp.generator_by_name(n).unwrap();
        assert_eq!(image_text(d.image(gen("v2"))), "[v2] @ 1");
        assert_eq!(image_text(d.image(gen("e1"))), "e1 @ u");
        assert_eq!(image_text(d.image(gen("e1*"))), "e1^* @ u^-1");
        let r = d.report();
        assert!(r.relations_hold() && r.graded && r.vertex_images_nonzero);
    }

    #[test]
    fn applying_maps() {
        let t = trimmed();
        let pi1 = t.pi1::<Rational>().unwrap();
        let f = t.f::<Rational>().unwrap();
        let d = t.delta::<Rational>().unwrap();
        let a: Element = parse_element(&t.q, "e2 . e2*").unwrap();
        assert!(pi1.apply(&a).unwrap().is_zero());
        let b: Element = parse_element(&t.q, "x0 . x0*").unwrap();
        assert_eq!(f.apply(&b).unwrap(), parse_tensor(&t.qpp, "[v0] @ 1").unwrap());
        let c: Element = parse_element(&t.qp, "[v1]").unwrap();
        assert_eq!(d.apply(&c).unwrap(), parse_tensor(&t.qp, "[v1] @ 1").unwrap());
        assert!(matches!(d.apply(&a), Err(MorphismError::DomainMismatch(_))));
    }

    #[test]
    fn rejects_untrimmable_pairs() {
        let g = Graph::new(
            ["v0", "v1", "v2"],
            [("x0", "v0", "v0"), ("e1", "v2", "v1"), ("e2", "v1", "v0")],
        )
        .unwrap();
        match Trimmed::new(&Lpa::new(g), "v0") {
            Err(MorphismError::NotTrimmable(r)) => assert!(!r.verdict),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ideal_spans() {
        let lpa = lpa7();
        let span = ideal_span::<Rational>(&lpa, "v2", 1).unwrap();
        let texts: Vec<String> = span.iter().map(|e| e.to_string()).collect();
        assert_eq!(texts, ["[v2]", "e1^*", "e1"]);

        let zero = ideal_span::<Rational>(&lpa, "v2", 0).unwrap();
        assert_eq!(zero.len(), 1);

        let span = ideal_span::<Rational>(&lpa, "v0", 2).unwrap();
        let texts: HashSet<String> = span.iter().map(|e| e.to_string()).collect();
        for want in ["[v0]", "x0", "x0^*", "e2", "e2^*", "e2 . e2^*", "x0 . e2^*", "e2 . x0^*"] {
            assert!(texts.contains(want), "missing {want} in {texts:?}");
        }
        assert_eq!(texts.len(), span.len());

        assert!(matches!(
            ideal_span::<Rational>(&lpa, "v1", 2),
            Err(MorphismError::NotHereditary(_))
        ));
    }
}
