//! Exact sparse linear algebra: incremental echelon forms, kernels, images,
//! intersections and preimages of subspaces.
//!
//! Pivoting is deterministic: a vector's pivot is its smallest nonzero
//! coordinate, and vectors are processed in the order given. Kernel vectors
//! therefore have the shape `e_i - (combination of earlier columns)`.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;


use crate::scalar::Scalar;

pub type SparseVec<K> = BTreeMap<usize, K>;

/// `a += c·b`, dropping zeros.
pub fn axpy<K: Scalar>(a: &mut SparseVec<K>, c: &K, b: &SparseVec<K>) {
    for (&i, x) in b {
        let entry = a.entry(i).or_insert_with(K::zero);
        *entry = entry.clone() + c.clone() * x.clone();
        if entry.is_zero() {
            a.remove(&i);
        }
    }
}

pub fn unit_vector<K: Scalar>(i: usize) -> SparseVec<K> {
    let mut v = SparseVec::new();
    v.insert(i, K::one());
    v
}

/// A row echelon basis of a subspace, built incrementally. Each stored row
/// has a leading 1 at its pivot column and no entries before it.
#[derive(Debug, Clone)]
pub struct Echelon<K: Scalar> {
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<usize, usize>,
}

impl<K: Scalar> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }
}

impl<K: Scalar> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a, I>(vs: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
    {
        let mut e = Self::new();
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    /// Reduces `v` against every pivot. The result is the canonical
    /// representative of `v` modulo the span, and is zero exactly when `v`
    /// lies in the span.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        self.reduce_tracked(&mut v, None);
        v
    }

    fn reduce_tracked(&self, v: &mut SparseVec<K>, mut track: Option<(&mut SparseVec<K>, &[SparseVec<K>])>) {
        let mut from = 0;
        loop {
            let next = v
                .range(from..)
                .find(|(k, _)| self.pivots.contains_key(k))
                .map(|(&k, c)| (k, c.clone()));
            let Some((col, c)) = next else { break };
            let row = self.pivots[&col];
            let neg = -c;
            axpy(v, &neg, &self.rows[row]);
            if let Some((comb, combs)) = track.as_mut() {
                axpy(comb, &neg, &combs[row]);
            }
            from = col + 1;
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns its pivot if it was independent.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<usize> {
        let mut r = self.reduce(&v);
        let (&lead, c) = r.iter().next()?;
        let inv = K::one() / c.clone();
        for x in r.values_mut() {
            *x = x.clone() * inv.clone();
        }
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(r);
        Some(lead)
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.rows.iter().all(|r| other.contains(r))
    }

    /// Rows of `self` that are not in `other`.
    pub fn not_in<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = &'a SparseVec<K>> + 'a {
        self.rows.iter().filter(move |r| !other.contains(r))
    }
}

/// Kernel of the linear map sending basis vector `i` to `images[i]`.
pub fn kernel<K: Scalar>(images: &[SparseVec<K>]) -> Vec<SparseVec<K>> {
    let mut basis = Echelon::new();
    let mut combs: Vec<SparseVec<K>> = Vec::new();
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut comb = unit_vector::<K>(i);
        basis.reduce_tracked(&mut v, Some((&mut comb, &combs)));
        match v.iter().next() {
            None => out.push(comb),
            Some((&lead, c)) => {
                let inv = K::one() / c.clone();
                for x in v.values_mut() {
                    *x = x.clone() * inv.clone();
                }
                for x in comb.values_mut() {
                    *x = x.clone() * inv.clone();
                }
                basis.pivots.insert(lead, basis.rows.len());
                basis.rows.push(v);
                combs.push(comb);
            }
        }
    }
    out
}

/// `Σ vᵢ · gens[i]`
pub fn combine<K: Scalar>(v: &SparseVec<K>, gens: &[SparseVec<K>]) -> SparseVec<K> {
    let mut out = SparseVec::new();
    for (&i, c) in v {
        axpy(&mut out, c, &gens[i]);
    }
    out
}

/// `span(a) ∩ span(b)`
pub fn intersection<K: Scalar>(a: &[SparseVec<K>], b: &[SparseVec<K>]) -> Echelon<K> {
    let minus_one = -K::one();
    let mut cols: Vec<SparseVec<K>> = a.to_vec();
    for v in b {
        let mut neg = SparseVec::new();
        axpy(&mut neg, &minus_one, v);
        cols.push(neg);
    }
    let mut out = Echelon::new();
    for k in kernel(&cols) {
        let left: SparseVec<K> = k.into_iter().filter(|(i, _)| *i < a.len()).collect();
        out.insert(combine(&left, a));
    }
    out
}

/// Domain vectors `x` with `Σ xᵢ·images[i] ∈ target`, as coordinate
/// vectors over the domain basis.
pub fn preimage<K: Scalar>(images: &[SparseVec<K>], target: &Echelon<K>) -> Vec<SparseVec<K>> {
    let reduced: Vec<SparseVec<K>> = images.iter().map(|v| target.reduce(v)).collect();
    kernel(&reduced)
}

/// Assigns dense coordinates to keys in first-seen order.
#[derive(Debug, Clone)]
pub struct Interner<T: Eq + Hash + Clone> {
    index: HashMap<T, usize>,
    keys: Vec<T>,
}

impl<T: Eq + Hash + Clone> Default for Interner<T> {
    fn default() -> Self {
        Interner {
            index: HashMap::new(),
            keys: Vec::new(),
        }
    }
}

impl<T: Eq + Hash + Clone> Interner<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, key: &T) -> usize {
        if let Some(&i) = self.index.get(key) {
            return i;
        }
        let i = self.keys.len();
        self.index.insert(key.clone(), i);
        self.keys.push(key.clone());
        i
    }

    pub fn get(&self, key: &T) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn key(&self, i: usize) -> &T {
        &self.keys[i]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::{Fp, Rational};

    fn v(entries: &[(usize, i64)]) -> SparseVec<Rational> {
        entries
            .iter()
            .map(|&(i, c)| (i, Rational::from_i64(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    #[test]
    fn rank_and_membership() {
        let e = Echelon::from_vectors(&[v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])]);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 2), (1, 4), (2, 2)])));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn canonical_remainders() {
        let e = Echelon::from_vectors(&[v(&[(0, 1), (1, 1)])]);
        assert_eq!(e.reduce(&v(&[(0, 1)])), e.reduce(&v(&[(1, -1)])));
    }

    #[test]
    fn kernel_witness_is_a_zero_column() {
        // columns: (1,0), (0,1), 0, (1,1)
        let imgs = [v(&[(0, 1)]), v(&[(1, 1)]), v(&[]), v(&[(0, 1), (1, 1)])];
        let k = kernel(&imgs);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], v(&[(2, 1)]));
        assert_eq!(k[1], v(&[(0, -1), (1, -1), (3, 1)]));
        for kv in &k {
            assert!(combine(kv, &imgs).is_empty());
        }
    }

    #[test]
    fn intersections_and_preimages() {
        let a = [v(&[(0, 1)]), v(&[(1, 1)])];
        let b = [v(&[(0, 1), (1, 1)]), v(&[(2, 1)])];
        let i = intersection(&a, &b);
        assert_eq!(i.rank(), 1);
        assert!(i.contains(&v(&[(0, 1), (1, 1)])));

        let target = Echelon::from_vectors(&[v(&[(0, 1)])]);
        let pre = preimage(&[v(&[(0, 1)]), v(&[(1, 1)]), v(&[(0, 2), (1, 3)])], &target);
        assert_eq!(pre.len(), 2);
        assert_eq!(pre[0], v(&[(0, 1)]));
        assert_eq!(pre[1], v(&[(1, -3), (2, 1)]));
    }

    #[test]
    fn prime_field_elimination() {
        type F = Fp<3>;
        let e: Echelon<F> = Echelon::from_vectors(&[
            [(0, F::new(1)), (1, F::new(1))].into_iter().collect(),
            [(0, F::new(2)), (1, F::new(2))].into_iter().collect(),
        ]);
        assert_eq!(e.rank(), 1);
    }
}
