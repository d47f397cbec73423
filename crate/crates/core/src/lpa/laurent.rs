use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;


use super::{Element, Generator, Lpa, LpaError, Monomial};
use crate::scalar::{Rational, Scalar};

fn add_into<T: Ord, K: Scalar>(map: &mut BTreeMap<T, K>, key: T, c: K) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().clone() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

/// An element of `k[u, u⁻¹]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly<K: Scalar = Rational> {
    coeffs: BTreeMap<i64, K>,
}

impl<K: Scalar> LaurentPoly<K> {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    /// `c·uⁿ`
    pub fn term(n: i64, c: K) -> Self {
        let mut p = Self::zero();
        add_into(&mut p.coeffs, n, c);
        p
    }

    /// `uⁿ`
    pub fn power(n: i64) -> Self {
        Self::term(n, K::one())
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, K> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<K: Scalar> Add for &LaurentPoly<K> {
    type Output = LaurentPoly<K>;
    fn add(self, rhs: Self) -> LaurentPoly<K> {
        let mut out = self.clone();
        for (&n, c) in &rhs.coeffs {
            add_into(&mut out.coeffs, n, c.clone());
        }
        out
    }
}

impl<K: Scalar> Mul for &LaurentPoly<K> {
    type Output = LaurentPoly<K>;
    fn mul(self, rhs: Self) -> LaurentPoly<K> {
        let mut out = LaurentPoly::zero();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                add_into(&mut out.coeffs, i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<K: Scalar> fmt::Display for LaurentPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().map(|(&n, c)| (power_text(n), c));
        f.write_str(&super::text::render_terms(terms))
    }
}

pub(crate) fn power_text(n: i64) -> String {
    match n {
        0 => "1".to_string(),
        1 => "u".to_string(),
        n => format!("u^{n}"),
    }
}

/// An element of `L_k(Q) ⊗ k[u, u⁻¹]`, stored as a combination of pairs
/// `m ⊗ uⁿ`. Its grading comes from the Laurent factor alone: `m ⊗ uⁿ` has
/// degree `n` whatever the degree of `m`.
#[derive(Clone)]
pub struct TensorElement<K: Scalar = Rational> {
    lpa: Arc<Lpa>,
    terms: BTreeMap<(Monomial, i64), K>,
}

impl<K: Scalar> PartialEq for TensorElement<K> {
    fn eq(&self, other: &Self) -> bool {
        Lpa::same(&self.lpa, &other.lpa) && self.terms == other.terms
    }
}

impl<K: Scalar> Eq for TensorElement<K> {}

impl<K: Scalar> fmt::Debug for TensorElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement({self})")
    }
}

impl<K: Scalar> TensorElement<K> {
    pub fn zero(lpa: &Arc<Lpa>) -> Self {
        TensorElement {
            lpa: Arc::clone(lpa),
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(lpa: &Arc<Lpa>) -> Self {
        Self::from_parts(&Element::unit(lpa), &LaurentPoly::power(0))
    }

    /// `a ⊗ p`
    pub fn from_parts(a: &Element<K>, p: &LaurentPoly<K>) -> Self {
        let mut out = Self::zero(a.lpa());
        for (m, c) in a.terms() {
            for (&n, d) in p.coeffs() {
                add_into(&mut out.terms, (m.clone(), n), c.clone() * d.clone());
            }
        }
        out
    }

    /// `g ⊗ uⁿ` for a single generator.
    pub fn generator(lpa: &Arc<Lpa>, g: Generator, n: i64) -> Self {
        Self::from_parts(&Element::generator(lpa, g), &LaurentPoly::power(n))
    }

    /// `[v] ⊗ uⁿ` for a vertex given by name.
    pub fn named(lpa: &Arc<Lpa>, name: &str, n: i64) -> Result<Self, LpaError> {
        Ok(Self::from_parts(&Element::named(lpa, name)?, &LaurentPoly::power(n)))
    }

    pub fn lpa(&self) -> &Arc<Lpa> {
        &self.lpa
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, i64), K> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, n: i64, c: K) {
        add_into(&mut self.terms, (m, n), c);
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
        for ((m, n), c) in &other.terms {
            out.add_term(m.clone(), *n, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero(&self.lpa);
        for ((m, n), a) in &self.terms {
            out.add_term(m.clone(), *n, a.clone() * c.clone());
        }
        out
    }

    /// `(m₁ ⊗ uⁱ)(m₂ ⊗ uʲ) = m₁m₂ ⊗ u^{i+j}`, extended bilinearly.
    pub fn tensor_multiply(&self, other: &Self) -> Result<Self, LpaError> {
        self.check_ambient(other)?;
        let mut out = Self::zero(&self.lpa);
        for ((m1, i), a) in &self.terms {
            let left: Element<K> = Element::monomial(&self.lpa, m1.clone());
            for ((m2, j), b) in &other.terms {
                let right = Element::monomial(&self.lpa, m2.clone());
                let prod = left.multiply(&right)?;
                let coef = a.clone() * b.clone();
                for (m, c) in prod.terms() {
                    out.add_term(m.clone(), i + j, c.clone() * coef.clone());
                }
            }
        }
        Ok(out)
    }

    /// Applies `h ⊗ id` where `h` acts on the left tensorand.
    pub fn map_left<F>(&self, target: &Arc<Lpa>, mut h: F) -> Result<Self, LpaError>
    where
        F: FnMut(&Monomial) -> Result<Element<K>, LpaError>,
    {
        let mut out = Self::zero(target);
        for ((m, n), c) in &self.terms {
            let image = h(m)?;
            if !Lpa::same(image.lpa(), target) {
                return Err(LpaError::AmbientMismatch);
            }
            for (m2, d) in image.terms() {
                out.add_term(m2.clone(), *n, d.clone() * c.clone());
            }
        }
        Ok(out)
    }

    /// Tensor degrees present (the Laurent exponents).
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms.keys().map(|(_, n)| *n).collect()
    }

    /// Components by tensor degree.
    pub fn degree_split(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for ((m, n), c) in &self.terms {
            out.entry(*n)
                .or_insert_with(|| Self::zero(&self.lpa))
                .add_term(m.clone(), *n, c.clone());
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|(m, _)| m.len()).max().unwrap_or(0)
    }
}

impl<K: Scalar> fmt::Display for TensorElement<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.lpa.graph();
        let terms = self
            .terms
            .iter()
            .map(|((m, n), c)| (format!("{} @ {}", m.display(g), power_text(*n)), c));
        f.write_str(&super::text::render_terms(terms))
    }
}

impl<K: Scalar> Add for &TensorElement<K> {
    type Output = TensorElement<K>;
    fn add(self, rhs: Self) -> TensorElement<K> {
        self.try_add(rhs).expect("adding tensors over different algebras")
    }
}

impl<K: Scalar> Sub for &TensorElement<K> {
    type Output = TensorElement<K>;
    fn sub(self, rhs: Self) -> TensorElement<K> {
        self.try_add(&rhs.scale(&-K::one()))
            .expect("subtracting tensors over different algebras")
    }
}

impl<K: Scalar> Neg for &TensorElement<K> {
    type Output = TensorElement<K>;
    fn neg(self) -> TensorElement<K> {
        self.scale(&-K::one())
    }
}

impl<K: Scalar> Mul for &TensorElement<K> {
    type Output = TensorElement<K>;
    fn mul(self, rhs: Self) -> TensorElement<K> {
        self.tensor_multiply(rhs)
            .expect("multiplying tensors over different algebras")
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    type T = TensorElement<Rational>;

    #[test]
    fn laurent_arithmetic() {
        let u: LaurentPoly = LaurentPoly::power(1);
        let uinv = LaurentPoly::power(-1);
        assert_eq!(&u * &uinv, LaurentPoly::power(0));
        let s = &u + &uinv;
        assert_eq!(s.to_string(), "u^-1 + u");
        assert!((&s + &LaurentPoly::term(1, Rational::from_i64(-1))).coeffs().len() == 1);
    }

    #[test]
    fn exponents_add() {
        let lpa = lpa7();
        let a = T::named(&lpa, "v0", 1).unwrap();
        let b = T::named(&lpa, "v0", -1).unwrap();
        assert_eq!((&a * &b).to_string(), "[v0] @ 1");
        let v1 = T::named(&lpa, "v1", 0).unwrap();
        let e1u = T::named(&lpa, "e1", 1).unwrap();
        assert_eq!(&v1 * &e1u, e1u);
    }

    #[test]
    fn products_in_the_unlooped_graph() {
        let qpp = Lpa::new(display7().delete_edge("x0").unwrap());
        let e2 = T::named(&qpp, "e2", 1).unwrap();
        let e2s = T::named(&qpp, "e2*", -1).unwrap();
        assert_eq!((&e2 * &e2s).to_string(), "e2 . e2^* @ 1");
        assert!(T::named(&qpp, "x0", 1).is_err());
    }

    #[test]
    fn grading_is_the_laurent_exponent() {
        let lpa = lpa7();
        let t = T::named(&lpa, "e2", -3).unwrap();
        assert_eq!(t.degrees().into_iter().collect::<Vec<_>>(), [-3]);
    }
}
