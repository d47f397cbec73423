//! Word-level rewriting for `L_k(Q)`.
//!
//! This works on linear combinations of raw generator words and applies one
//! rule at a time, at a position chosen by a [`Strategy`]. It exists to check
//! that the incremental normal form in [`Element::normal_form`] is
//! independent of rewriting order, and to bound the number of steps.
//!
//! Rules, on adjacent pairs:
//!
//! * vertex–vertex, vertex–edge, edge–vertex: absorb or annihilate;
//! * incomposable letters: annihilate;
//! * `x* y` → `δ_{xy} t(x)`;
//! * `γ(v) γ(v)*` → `v - Σ_{e ≠ γ(v)} e e*`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::{Element, Generator, Lpa, LpaError, Monomial};
use crate::scalar::Scalar;

/// How the next redex is chosen.
pub enum Strategy<'r, R: Rng> {
    /// First term, leftmost redex.
    Leftmost,
    /// Uniformly random term and redex.
    Random(&'r mut R),
}

#[derive(Debug, Clone)]
pub struct Rewritten<K: Scalar> {
    pub element: Element<K>,
    pub steps: usize,
}

type Word = Vec<Generator>;

/// An upper bound on the number of rule applications needed for a word of
/// length `len` when no vertex emits more than `max_out` edges.
///
/// Every rule except the Cuntz–Krieger expansion shortens or kills a word;
/// the expansion keeps the length and removes one `γγ*` junction from each
/// of its `max_out` output words without creating another. So along any
/// branch there are at most `len` shortening steps and, at length `l`, at
/// most `l / 2` expansions.
pub fn step_bound(len: usize, max_out: usize) -> u128 {
    let expansions: u32 = (1..=len).map(|l| (l / 2) as u32).sum();
    let branching = max_out.max(1) as u128;
    (len as u128 + expansions as u128 + 1) * branching.saturating_pow(expansions)
}

fn redex_output<K: Scalar>(lpa: &Lpa, a: Generator, b: Generator) -> Option<Vec<(Word, K)>> {
    use Generator::*;
    let g = lpa.graph();
    let keep = |x: Generator| Some(vec![(vec![x], K::one())]);
    let kill = || Some(Vec::new());
    match (a, b) {
        (Vertex(v), Vertex(w)) => {
            if v == w {
                keep(a)
            } else {
                kill()
            }
        }
        (Vertex(v), l) => {
            if lpa.gen_src(l) == v {
                keep(l)
            } else {
                kill()
            }
        }
        (l, Vertex(v)) => {
            if lpa.gen_tgt(l) == v {
                keep(l)
            } else {
                kill()
            }
        }
        (l1, l2) if lpa.gen_tgt(l1) != lpa.gen_src(l2) => kill(),
        (Ghost(x), Edge(y)) => {
            if x == y {
                keep(Vertex(g.tgt(x)))
            } else {
                kill()
            }
        }
        (Edge(x), Ghost(y)) if x == y && lpa.is_special(x) => {
            let v = g.src(x);
            let mut out = vec![(vec![Vertex(v)], K::one())];
            for &e in g.outgoing(v) {
                if e != x {
                    out.push((vec![Edge(e), Ghost(e)], -K::one()));
                }
            }
            Some(out)
        }
        _ => None,
    }
}

fn redexes(lpa: &Lpa, w: &[Generator]) -> Vec<usize> {
    (0..w.len().saturating_sub(1))
        .filter(|&i| redex_output::<crate::scalar::Rational>(lpa, w[i], w[i + 1]).is_some())
        .collect()
}

fn add_word<K: Scalar>(terms: &mut BTreeMap<Word, K>, w: Word, c: K) {
    let entry = terms.entry(w).or_insert_with(K::zero);
    *entry = entry.clone() + c;
}

/// Reads an irreducible word as a normal-form monomial.
fn as_monomial(lpa: &Lpa, w: &[Generator]) -> Option<Monomial> {
    if let [Generator::Vertex(v)] = w {
        return Some(Monomial::at_vertex(*v));
    }
    let split = w.iter().position(|g| !matches!(g, Generator::Edge(_))).unwrap_or(w.len());
    let mut alpha = Vec::new();
    for g in &w[..split] {
        let Generator::Edge(e) = g else { return None };
        alpha.push(*e);
    }
    let mut beta = Vec::new();
    for g in w[split..].iter().rev() {
        let Generator::Ghost(e) = g else { return None };
        beta.push(*e);
    }
    let graph = lpa.graph();
    let vertex = match (alpha.last(), beta.last()) {
        (Some(&a), _) => graph.tgt(a),
        (None, Some(&b)) => graph.tgt(b),
        (None, None) => return None,
    };
    let m = Monomial::new(alpha, beta, vertex);
    lpa.is_basis(&m).then_some(m)
}

/// Rewrites `word` to normal form with the given strategy.
pub fn rewrite<K: Scalar, R: Rng>(
    lpa: &Arc<Lpa>,
    word: &[Generator],
    mut strategy: Strategy<'_, R>,
) -> Result<Rewritten<K>, LpaError> {
    for &g in word {
        lpa.check_generator(g)?;
    }
    let mut terms: BTreeMap<Word, K> = BTreeMap::new();
    if word.is_empty() {
        for v in lpa.graph().vertex_ids() {
            terms.insert(vec![Generator::Vertex(v)], K::one());
        }
    } else {
        terms.insert(word.to_vec(), K::one());
    }
    let mut steps = 0;
    loop {
        terms.retain(|_, c| !c.is_zero());
        let reducible: Vec<(&Word, Vec<usize>)> = terms
            .keys()
            .map(|w| (w, redexes(lpa, w)))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        if reducible.is_empty() {
            break;
        }
        let (w, pos) = match &mut strategy {
            Strategy::Leftmost => (reducible[0].0.clone(), reducible[0].1[0]),
            Strategy::Random(rng) => {
                let (w, rs) = &reducible[rng.random_range(0..reducible.len())];
                ((*w).clone(), rs[rng.random_range(0..rs.len())])
            }
        };
        let c = terms.remove(&w).expect("term chosen from the map");
        let out = redex_output::<K>(lpa, w[pos], w[pos + 1]).expect("position is a redex");
        for (middle, k) in out {
            let mut nw = Vec::with_capacity(w.len());
            nw.extend_from_slice(&w[..pos]);
            nw.extend(middle);
            nw.extend_from_slice(&w[pos + 2..]);
            add_word(&mut terms, nw, c.clone() * k);
        }
        steps += 1;
    }
    let mut element = Element::zero(lpa);
    for (w, c) in terms {
        let m = as_monomial(lpa, &w).unwrap_or_else(|| {
            panic!("irreducible word is not a normal-form monomial: {w:?}")
        });
        element.add_term(m, c);
    }
    Ok(Rewritten { element, steps })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::scalar::Rational;
    use rand::SeedableRng;

    type Rng = rand::rngs::StdRng;

    #[test]
    fn leftmost_matches_incremental_normal_form() {
        let lpa = lpa7();
        let w = super::super::text::parse_word(&lpa, "e1 . e1* . e2 . x0 . x0* . e2*").unwrap();
        let r: Rewritten<Rational> = rewrite(&lpa, &w, Strategy::<Rng>::Leftmost).unwrap();
        assert_eq!(r.element, Element::normal_form(&lpa, &w).unwrap());
        assert!(r.steps > 0);
    }

    #[test]
    fn random_orders_agree() {
        let lpa = lpa7();
        let w = super::super::text::parse_word(&lpa, "x0 . x0* . e2* . e1 . e1* . e2 . x0").unwrap();
        let expected: Element<Rational> = Element::normal_form(&lpa, &w).unwrap();
        let mut rng = Rng::seed_from_u64(7);
        for _ in 0..50 {
            let r: Rewritten<Rational> = rewrite(&lpa, &w, Strategy::Random(&mut rng)).unwrap();
            assert_eq!(r.element, expected);
            assert!((r.steps as u128) <= step_bound(w.len(), 2));
        }
    }

    #[test]
    fn bound_grows_with_length() {
        assert!(step_bound(2, 1) >= 2);
        assert!(step_bound(6, 3) > step_bound(5, 3));
    }
}
