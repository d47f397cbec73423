mod common;

use common::*;
use leavitt::graph::Graph;
use leavitt::lpa::rewrite::{rewrite, step_bound, Strategy};
use leavitt::verify::oracle::{random_path_word, random_word};
use leavitt::{Element, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const WORDS: usize = 10_000;

fn max_out(g: &Graph) -> usize {
    g.vertex_ids().map(|v| g.outgoing(v).len()).max().unwrap_or(0)
}

fn check_confluence(g: Graph, seed: u64) {
    let a = lpa(g.clone());
    let mut words_rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let out = max_out(&g);
    for i in 0..WORDS {
        let word = if i % 2 == 0 {
            random_path_word(&g, 6, &mut words_rng)
        } else {
            random_word(&g, 6, &mut words_rng)
        };
        let incremental: Element<Rational> = Element::normal_form(&a, &word).unwrap();
        let leftmost = rewrite::<Rational, ChaCha8Rng>(&a, &word, Strategy::Leftmost).unwrap();
        let random = rewrite::<Rational, _>(&a, &word, Strategy::Random(&mut order_rng)).unwrap();
        assert_eq!(leftmost.element, incremental, "leftmost rewriting of {word:?}");
        assert_eq!(random.element, incremental, "random rewriting of {word:?}");
        let bound = step_bound(word.len(), out);
        assert!(leftmost.steps as u128 <= bound, "{} steps > bound {bound}", leftmost.steps);
        assert!(random.steps as u128 <= bound, "{} steps > bound {bound}", random.steps);
    }
}

#[test]
fn display7_rewriting_is_confluent() {
    check_confluence(display7(), 1);
}

#[test]
fn trimmed_graph_rewriting_is_confluent() {
    check_confluence(display7_trimmed(), 2);
}

#[test]
fn unlooped_graph_rewriting_is_confluent() {
    check_confluence(display7_unlooped(), 3);
}

#[test]
fn single_loop_rewriting_is_confluent() {
    check_confluence(single_loop(), 4);
}

#[test]
fn two_loops_rewriting_is_confluent() {
    check_confluence(fixture_graph("two-loops.json"), 5);
}

#[test]
fn display8_rewriting_is_confluent() {
    check_confluence(fixture_graph("display8.json"), 6);
}
