mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use leavitt::graph::Graph;
use leavitt::{Element, Generator, Lpa, Rational, SpecialEdgeChoice};
use proptest::prelude::*;

type E = Element<Rational>;

/// A random graph on up to four vertices with up to six edges.
fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=6).prop_map(move |edges| {
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, String, String)> = edges
                .iter()
                .enumerate()
                .map(|(i, (s, t))| (format!("e{i}"), format!("v{s}"), format!("v{t}")))
                .collect();
            Graph::new(vertices, edges).unwrap()
        })
    })
}

fn alphabet(g: &Graph) -> Vec<Generator> {
    let mut out: Vec<Generator> = g.vertex_ids().map(Generator::Vertex).collect();
    out.extend(g.edge_ids().map(Generator::Edge));
    out.extend(g.edge_ids().map(Generator::Ghost));
    out
}

/// A graph together with a few random words over its generators.
fn graph_and_words(count: usize) -> impl Strategy<Value = (Graph, Vec<Vec<Generator>>)> {
    graph().prop_flat_map(move |g| {
        let letters = alphabet(&g);
        let k = letters.len();
        let words = proptest::collection::vec(proptest::collection::vec(0..k, 0..=5), count);
        (Just(g), words).prop_map(move |(g, ws)| {
            let ws = ws.into_iter().map(|w| w.into_iter().map(|i| letters[i]).collect()).collect();
            (g, ws)
        })
    })
}

fn nf(a: &Arc<Lpa>, w: &[Generator]) -> E {
    E::normal_form(a, w).unwrap()
}

fn star_word(w: &[Generator]) -> Vec<Generator> {
    w.iter()
        .rev()
        .map(|&g| match g {
            Generator::Vertex(v) => Generator::Vertex(v),
            Generator::Edge(e) => Generator::Ghost(e),
            Generator::Ghost(e) => Generator::Edge(e),
        })
        .collect()
}

/// The involution, applied termwise to a normal form.
fn star(a: &Arc<Lpa>, x: &E) -> E {
    x.terms().iter().fold(E::zero(a), |acc, (m, c)| {
        let w = if m.is_vertex() { vec![Generator::Vertex(m.vertex())] } else { a.word(m) };
        &acc + &nf(a, &star_word(&w)).scale(c)
    })
}

/// Terms of an element spelled with generator names, for comparing across
/// renamed graphs.
fn spelled(a: &Lpa, x: &E, rename: impl Fn(&str) -> String) -> BTreeSet<(Vec<String>, String)> {
    x.terms()
        .iter()
        .map(|(m, c)| {
            let w = if m.is_vertex() { vec![Generator::Vertex(m.vertex())] } else { a.word(m) };
            (w.iter().map(|&g| rename(&a.generator_name(g))).collect(), c.to_string())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normal_forms_are_homogeneous_of_the_word_degree((g, ws) in graph_and_words(1)) {
        let a = Lpa::new(g);
        let w = &ws[0];
        let x = nf(&a, w);
        if !x.is_zero() {
            let d: i64 = w.iter().map(|g| g.degree()).sum();
            prop_assert_eq!(x.degrees(), BTreeSet::from([d]));
        }
    }

    #[test]
    fn multiplication_is_graded((g, ws) in graph_and_words(2)) {
        let a = Lpa::new(g);
        let (x, y) = (nf(&a, &ws[0]), nf(&a, &ws[1]));
        let p = x.multiply(&y).unwrap();
        for d in p.degrees() {
            prop_assert!(x.degrees().iter().any(|i| y.degrees().iter().any(|j| i + j == d)));
        }
    }

    #[test]
    fn unit_law_and_associativity((g, ws) in graph_and_words(3)) {
        let a = Lpa::new(g);
        let (x, y, z) = (nf(&a, &ws[0]), nf(&a, &ws[1]), nf(&a, &ws[2]));
        let one = E::unit(&a);
        prop_assert_eq!(&one.multiply(&x).unwrap(), &x);
        prop_assert_eq!(&x.multiply(&one).unwrap(), &x);
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn word_concatenation_is_multiplication((g, ws) in graph_and_words(2)) {
        let a = Lpa::new(g);
        let joined: Vec<Generator> = ws[0].iter().chain(&ws[1]).copied().collect();
        if !ws[0].is_empty() && !ws[1].is_empty() {
            prop_assert_eq!(nf(&a, &joined), nf(&a, &ws[0]).multiply(&nf(&a, &ws[1])).unwrap());
        }
    }

    #[test]
    fn ghost_involution_is_an_anti_automorphism((g, ws) in graph_and_words(2)) {
        let a = Lpa::new(g);
        let (x, y) = (nf(&a, &ws[0]), nf(&a, &ws[1]));
        prop_assert_eq!(star(&a, &star(&a, &x)), x.clone());
        prop_assert_eq!(star(&a, &nf(&a, &ws[0])), nf(&a, &star_word(&ws[0])));
        let xy = x.multiply(&y).unwrap();
        prop_assert_eq!(star(&a, &xy), star(&a, &y).multiply(&star(&a, &x)).unwrap());
    }

    #[test]
    fn basis_windows_are_nested(g in graph(), n in 0usize..4) {
        let a = Lpa::new(g);
        let small: BTreeSet<_> = a.basis_monomials(n).into_iter().collect();
        let large: BTreeSet<_> = a.basis_monomials(n + 1).into_iter().collect();
        prop_assert!(small.is_subset(&large));
        prop_assert!(small.iter().all(|m| a.is_basis(m) && m.len() <= n));
    }

    #[test]
    fn cuntz_krieger_sum_is_the_vertex(g in graph()) {
        let a = Lpa::new(g.clone());
        for v in g.vertex_ids() {
            if g.outgoing(v).is_empty() {
                continue;
            }
            let sum = g.outgoing(v).iter().fold(E::zero(&a), |acc, &e| {
                &acc + &nf(&a, &[Generator::Edge(e), Generator::Ghost(e)])
            });
            prop_assert_eq!(sum, E::generator(&a, Generator::Vertex(v)));
        }
    }

    #[test]
    fn renaming_commutes_with_normal_forms((g, ws) in graph_and_words(1)) {
        // Reverse the name order so a lexicographic choice would differ;
        // the special edges are carried over explicitly.
        let nv = g.num_vertices();
        let ne = g.num_edges();
        let vname = |s: &str| format!("w{}", nv - s[1..].parse::<usize>().unwrap());
        let ename = |s: &str| format!("f{}", ne - s[1..].parse::<usize>().unwrap());
        let renamed = Graph::new(
            g.vertex_ids().map(|v| vname(g.vertex_name(v))),
            g.edge_ids().map(|e| {
                (ename(g.edge_name(e)), vname(g.vertex_name(g.src(e))), vname(g.vertex_name(g.tgt(e))))
            }),
        ).unwrap();
        let a = Lpa::new(g.clone());
        let special = a.special().describe(&g);
        let pairs: Vec<(String, String)> = special
            .iter()
            .map(|s| {
                let (v, e) = s.split_once('=').unwrap();
                (vname(v), ename(e))
            })
            .collect();
        let choice = SpecialEdgeChoice::from_names(&renamed, pairs.iter().map(|(v, e)| (v.as_str(), e.as_str()))).unwrap();
        let b = Lpa::with_choice(renamed, choice).unwrap();

        let rename = |name: &str| {
            let (base, ghost) = match name.strip_suffix('*') { Some(b) => (b, "*"), None => (name, "") };
            if let Some(v) = base.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                format!("[{}]", vname(v))
            } else {
                format!("{}{ghost}", ename(base))
            }
        };
        let translated: Vec<Generator> = ws[0]
            .iter()
            .map(|&x| b.generator_by_name(&rename(&a.generator_name(x))).unwrap())
            .collect();
        let x = nf(&a, &ws[0]);
        let y = nf(&b, &translated);
        prop_assert_eq!(spelled(&a, &x, rename), spelled(&b, &y, |s| s.to_string()));
    }

    #[test]
    fn trimming_creates_no_new_sinks(g in graph()) {
        for v in g.vertex_ids() {
            let name = g.vertex_name(v).to_string();
            let r = g.is_trimmable(&name).unwrap();
            if r.verdict {
                let trimmed = r.trimmed.unwrap();
                let mut before = g.sinks();
                before.remove(&name);
                prop_assert_eq!(trimmed.sinks(), before);
                prop_assert!(!r.unlooped.unwrap().sinks().is_empty());
            }
        }
    }

    #[test]
    fn equality_does_not_depend_on_the_special_edges((g, ws) in graph_and_words(2), shift in 1usize..3) {
        let a = Lpa::new(g.clone());
        let b = Lpa::with_choice(g.clone(), SpecialEdgeChoice::rotated(&g, shift)).unwrap();
        let same_a = nf(&a, &ws[0]) == nf(&a, &ws[1]);
        let same_b = nf(&b, &ws[0]) == nf(&b, &ws[1]);
        prop_assert_eq!(same_a, same_b);
        prop_assert_eq!(nf(&a, &ws[0]).is_zero(), nf(&b, &ws[0]).is_zero());
        for n in 0..4 {
            prop_assert_eq!(a.basis_monomials(n).len(), b.basis_monomials(n).len());
        }
    }
}
