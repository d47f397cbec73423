use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;


use super::{Generator, Lpa, LpaError, Monomial};
use crate::scalar::{Rational, Scalar};

/// A finite linear combination of normal-form monomials.
#[derive(Clone)]
pub struct Element<K: Scalar = Rational> {
    lpa: Arc<Lpa>,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Scalar> PartialEq for Element<K> {
    fn eq(&self, other: &Self) -> bool {
        Lpa::same(&self.lpa, &other.lpa) && self.terms == other.terms
    }
}

impl<K: Scalar> Eq for Element<K> {}

impl<K: Scalar> fmt::Debug for Element<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl<K: Scalar> Element<K> {
    pub fn zero(lpa: &Arc<Lpa>) -> Self {
        Element {
            lpa: Arc::clone(lpa),
            terms: BTreeMap::new(),
        }
    }

    /// The sum of all vertices.
    pub fn unit(lpa: &Arc<Lpa>) -> Self {
        let terms = lpa
            .graph()
            .vertex_ids()
            .map(|v| (Monomial::at_vertex(v), K::one()))
            .collect();
        Element {
            lpa: Arc::clone(lpa),
            terms,
        }
    }

    pub fn generator(lpa: &Arc<Lpa>, g: Generator) -> Self {
        Self::monomial(lpa, lpa.generator_monomial(g))
    }

    /// Looks a generator up by name (`v`, `[v]`, `x`, `x*`).
    pub fn named(lpa: &Arc<Lpa>, name: &str) -> Result<Self, LpaError> {
        Ok(Self::generator(lpa, lpa.generator_by_name(name)?))
    }

    /// Wraps a monomial that is already in normal form.
    pub fn monomial(lpa: &Arc<Lpa>, m: Monomial) -> Self {
        debug_assert!(lpa.is_basis(&m));
        let mut terms = BTreeMap::new();
        terms.insert(m, K::one());
        Element {
            lpa: Arc::clone(lpa),
            terms,
        }
    }

    /// Builds an element from normal-form monomials, rejecting anything else.
    pub fn from_basis_terms<I>(lpa: &Arc<Lpa>, terms: I) -> Result<Self, LpaError>
    where
        I: IntoIterator<Item = (Monomial, K)>,
    {
        let mut out = Self::zero(lpa);
        for (m, c) in terms {
            if !lpa.is_basis(&m) {
                return Err(LpaError::NotBasis(format!("{m:?}")));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// The normal form of a word in the generators. The empty word is the unit.
    pub fn normal_form(lpa: &Arc<Lpa>, word: &[Generator]) -> Result<Self, LpaError> {
        for &g in word {
            lpa.check_generator(g)?;
        }
        let Some((&first, rest)) = word.split_first() else {
            return Ok(Self::unit(lpa));
        };
        let mut acc = Self::generator(lpa, first);
        for &g in rest {
            if acc.is_zero() {
                break;
            }
            acc = acc.mul_generator(g);
        }
        Ok(acc)
    }

    pub fn lpa(&self) -> &Arc<Lpa> {
        &self.lpa
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, K> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LpaError> {
        if Lpa::same(&self.lpa, &other.lpa) {
            Ok(())
        } else {
            Err(LpaError::AmbientMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LpaError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LpaError> {
        self.try_add(&other.scale(&-K::one()))
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero(&self.lpa);
        if c.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
            .collect();
        out
    }

    /// Right multiplication by one generator.
    pub fn mul_generator(&self, g: Generator) -> Self {
        let mut out = Self::zero(&self.lpa);
        for (m, c) in &self.terms {
            for (n, k) in self.lpa.mul_generator(m, g) {
                out.add_term(n, c.clone() * K::from_i64(k));
            }
        }
        out
    }

    /// The product in `L_k(Q)`, in normal form.
    pub fn multiply(&self, other: &Self) -> Result<Self, LpaError> {
        self.check_ambient(other)?;
        let lpa = &self.lpa;
        let mut out = Self::zero(lpa);
        for (m2, c2) in &other.terms {
            let word = lpa.word(m2);
            for (m1, c1) in &self.terms {
                if lpa.right_end(m1) != lpa.left_end(m2) {
                    continue;
                }
                let mut partial = vec![(m1.clone(), K::one())];
                for &g in &word {
                    let mut next = Vec::with_capacity(partial.len());
                    for (m, c) in &partial {
                        for (n, k) in lpa.mul_generator(m, g) {
                            next.push((n, c.clone() * K::from_i64(k)));
                        }
                    }
                    partial = next;
                }
                let coef = c1.clone() * c2.clone();
                for (m, c) in partial {
                    out.add_term(m, c * coef.clone());
                }
            }
        }
        Ok(out)
    }

    /// Splits into homogeneous components. Summing the parts gives `self`.
    pub fn degree_split(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(&self.lpa))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms.keys().map(Monomial::degree).collect()
    }

    /// Longest monomial, or 0 for the zero element.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }
}

impl<K: Scalar> fmt::Display for Element<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.lpa.graph();
        let terms = self.terms.iter().map(|(m, c)| (m.display(g), c));
        f.write_str(&super::text::render_terms(terms))
    }
}

impl<K: Scalar> Add for &Element<K> {
    type Output = Element<K>;
    /// Panics when the operands live in different algebras.
    fn add(self, rhs: Self) -> Element<K> {
        self.try_add(rhs).expect("adding elements of different algebras")
    }
}

impl<K: Scalar> Sub for &Element<K> {
    type Output = Element<K>;
    fn sub(self, rhs: Self) -> Element<K> {
        self.try_sub(rhs).expect("subtracting elements of different algebras")
    }
}

impl<K: Scalar> Mul for &Element<K> {
    type Output = Element<K>;
    fn mul(self, rhs: Self) -> Element<K> {
        self.multiply(rhs).expect("multiplying elements of different algebras")
    }
}

impl<K: Scalar> Neg for &Element<K> {
    type Output = Element<K>;
    fn neg(self) -> Element<K> {
        self.scale(&-K::one())
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use num_traits::One;
    use crate::graph::Graph;

    type E = Element<Rational>;

    fn word(lpa: &Arc<Lpa>, names: &[&str]) -> E {
        let w: Vec<Generator> = names.iter().map(|n| lpa.generator_by_name(n).unwrap()).collect();
        E::normal_form(lpa, &w).unwrap()
    }

    #[test]
    fn vertex_idempotents() {
        let lpa = lpa7();
        assert_eq!(word(&lpa, &["v1", "v1"]).to_string(), "[v1]");
        assert!(word(&lpa, &["v1", "v2"]).is_zero());
    }

    #[test]
    fn ghost_real_and_real_ghost_junctions() {
        let lpa = lpa7();
        assert_eq!(word(&lpa, &["x0*", "x0"]).to_string(), "[v0]");
        assert_eq!(word(&lpa, &["x0", "x0*"]).to_string(), "[v0]");
        assert_eq!(word(&lpa, &["e1", "e1*"]).to_string(), "[v1] - e2 . e2^*");
        assert!(word(&lpa, &["e1*", "e2"]).is_zero());
    }

    #[test]
    fn products() {
        let lpa = lpa7();
        let e1 = E::named(&lpa, "e1").unwrap();
        let e2 = E::named(&lpa, "e2").unwrap();
        let x0 = E::named(&lpa, "x0").unwrap();
        let v2 = E::named(&lpa, "v2").unwrap();
        let unit = E::unit(&lpa);

        assert_eq!(&unit * &e2, e2);
        assert_eq!(&e2 * &unit, e2);
        assert!((&v2 * &e1).is_zero());
        let p = &e2 * &x0;
        assert_eq!(p.to_string(), "e2/x0");
        assert_eq!(p.degrees().into_iter().collect::<Vec<_>>(), [2]);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = E::unit(&lpa7());
        let b = E::unit(&single_loop());
        assert_eq!(a.multiply(&b).unwrap_err(), LpaError::AmbientMismatch);
        assert_eq!(a.try_add(&b).unwrap_err(), LpaError::AmbientMismatch);
        // structurally equal algebras behind different Arcs are compatible
        let c = E::unit(&lpa7());
        assert!(a.multiply(&c).is_ok());
    }

    #[test]
    fn degree_split_examples() {
        let lpa = lpa7();
        let v0 = E::named(&lpa, "v0").unwrap();
        let split = v0.degree_split();
        assert_eq!(split.len(), 1);
        assert_eq!(split[&0], v0);

        let x = &E::named(&lpa, "x0").unwrap() + &E::named(&lpa, "x0*").unwrap();
        let split = x.degree_split();
        assert_eq!(split[&1].to_string(), "x0");
        assert_eq!(split[&-1].to_string(), "x0^*");

        let y = word(&lpa, &["e2", "x0", "x0*"]);
        let split = y.degree_split();
        assert_eq!(split.len(), 1);
        assert_eq!(split[&1].to_string(), "e2");
    }

    #[test]
    fn from_basis_terms_rejects_excluded_words() {
        let lpa = lpa7();
        let g = lpa.graph();
        let e1 = g.edge_by_name("e1").unwrap();
        let v2 = g.vertex("v2").unwrap();
        let bad = Monomial::new(vec![e1], vec![e1], v2);
        assert!(E::from_basis_terms(&lpa, [(bad, Rational::one())]).is_err());
    }

    #[test]
    fn cuntz_krieger_sum_is_the_vertex() {
        let g = Graph::new(
            ["a", "b", "c"],
            [("p", "a", "b"), ("q", "a", "c"), ("r", "a", "a"), ("s", "b", "a")],
        )
        .unwrap();
        let lpa = Lpa::new(g);
        for v in ["a", "b"] {
            let vid = lpa.graph().vertex(v).unwrap();
            let mut sum = E::zero(&lpa);
            for &e in lpa.graph().outgoing(vid) {
                let t = E::normal_form(&lpa, &[Generator::Edge(e), Generator::Ghost(e)]).unwrap();
                sum = &sum + &t;
            }
            assert_eq!(sum, E::named(&lpa, v).unwrap());
        }
    }
}
