#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use leavitt::{Graph, Lpa, Rational};
use num_traits::{One, Zero};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_graph(name: &str) -> Graph {
    let text = std::fs::read_to_string(fixtures_dir().join(name)).expect("fixture readable");
    Graph::from_json(&text).expect("fixture parses")
}

pub fn display7() -> Graph {
    fixture_graph("display7.json")
}

/// Q' of display7: v1 -> v2.
pub fn display7_trimmed() -> Graph {
    Graph::new(["v1", "v2"], [("e1", "v1", "v2")]).unwrap()
}

/// Q'' of display7: the loop removed.
pub fn display7_unlooped() -> Graph {
    Graph::new(["v0", "v1", "v2"], [("e1", "v1", "v2"), ("e2", "v1", "v0")]).unwrap()
}

pub fn single_loop() -> Graph {
    fixture_graph("single-loop.json")
}

pub fn lpa(g: Graph) -> Arc<Lpa> {
    Lpa::new(g)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rank of a family of vectors indexed by arbitrary ordered keys, by plain
/// dense Gaussian elimination over the rationals.
pub fn rank<T: Ord + Clone>(vectors: &[BTreeMap<T, Rational>]) -> usize {
    let mut keys: Vec<T> = vectors.iter().flat_map(|v| v.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let index: BTreeMap<T, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let mut rows: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![Rational::zero(); keys.len()];
            for (k, c) in v {
                row[index[k]] = c.clone();
            }
            row
        })
        .collect();
    let mut r = 0;
    for col in 0..keys.len() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][col].clone();
        let pivot: Vec<Rational> = rows[r].iter().map(|x| x.clone() * inv.clone()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}
