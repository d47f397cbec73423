mod common;

use std::time::Instant;

use common::*;
use leavitt::graph::{EdgeId, Graph};
use leavitt::verify::oracle::{basis_rank, compare, random_path_word, random_word, OracleModel};
use leavitt::{Rational, SpecialEdgeChoice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Paths of `g` as edge lists with their end vertex, of length at most `n`.
fn paths(g: &Graph, n: usize) -> Vec<(usize, Vec<EdgeId>)> {
    let mut all: Vec<(usize, Vec<EdgeId>)> = g.vertex_ids().map(|v| (v.0, Vec::new())).collect();
    let mut frontier = all.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for (end, p) in &frontier {
            for e in g.edge_ids().filter(|&e| g.src(e).0 == *end) {
                let mut q = p.clone();
                q.push(e);
                next.push((g.tgt(e).0, q));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Counts pairs of paths `(a, b)` with a common end vertex and total length
/// at most `n`, minus those whose last edges agree and are special.
fn expected_basis_count(g: &Graph, n: usize) -> usize {
    let special = SpecialEdgeChoice::lexicographic(g);
    let ps = paths(g, n);
    let mut count = 0;
    for (ea, a) in &ps {
        for (eb, b) in &ps {
            if ea != eb || a.len() + b.len() > n {
                continue;
            }
            // Vertex paths are only paired with themselves.
            if a.is_empty() && b.is_empty() {
                count += 1;
                continue;
            }
            match (a.last(), b.last()) {
                (Some(&x), Some(&y)) if x == y && special.get(g.src(x)) == Some(x) => {}
                _ => count += 1,
            }
        }
    }
    count
}

fn fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("display7", display7()),
        ("display7 Q'", display7_trimmed()),
        ("display7 Q''", display7_unlooped()),
        ("single loop", single_loop()),
    ]
}

#[test]
fn trimmed_graph_has_rank_four_at_length_two() {
    let model: OracleModel<Rational> = OracleModel::build(&display7_trimmed(), 2).unwrap();
    assert_eq!(model.rank(), 4);
    assert_eq!(expected_basis_count(&display7_trimmed(), 2), 4);
}

#[test]
fn basis_counts_match_oracle_ranks() {
    for (name, g) in fixtures() {
        let a = lpa(g.clone());
        for n in 0..=4 {
            assert_eq!(a.basis_monomials(n).len(), expected_basis_count(&g, n), "{name} basis at L={n}");
        }
        // Windows shorter than 2 cannot hold a relation.
        for n in 2..=4 {
            let model: OracleModel<Rational> = OracleModel::build(&g, n).unwrap();
            let expected = expected_basis_count(&g, n);
            assert_eq!(model.rank(), expected, "{name} oracle rank at L={n}");
            assert_eq!(basis_rank(&a, &model).unwrap(), expected, "{name} basis independence at L={n}");
        }
    }
}

#[test]
fn normal_form_equality_matches_oracle_on_random_words() {
    let start = Instant::now();
    for (k, (name, g)) in fixtures().into_iter().enumerate() {
        let a = lpa(g.clone());
        let model: OracleModel<Rational> = OracleModel::build(&g, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
        let words: Vec<_> = (0..10_000)
            .map(|i| {
                if i % 2 == 0 {
                    random_path_word(&g, 4, &mut rng)
                } else {
                    random_word(&g, 4, &mut rng)
                }
            })
            .collect();
        let agreement = compare(&a, &model, &words).unwrap();
        assert!(agreement.agrees(), "{name}: {:?}", agreement.mismatch);
        assert_eq!(agreement.normal_form_classes, agreement.oracle_classes);
        assert!(agreement.oracle_classes > 3, "{name}: sample too degenerate");
    }
    assert!(start.elapsed().as_secs() < 60 || cfg!(debug_assertions));
}
