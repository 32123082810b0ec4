//! Finite formal linear combinations of basis labels.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;


use crate::coeff::Scalar;

/// A sparse vector with deterministic (ordered) iteration. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct SparseVec<K: Ord, R> {
    terms: BTreeMap<K, R>,
}

impl<K: Ord, R> Default for SparseVec<K, R> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone, R: Scalar> SparseVec<K, R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, R::one())
    }

    pub fn term(key: K, coeff: R) -> Self {
        let mut v = Self::new();
        v.add_term(key, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&R> {
        self.terms.get(key)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, R> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, R> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: K, coeff: R) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: &R) {
        if factor.is_zero() {
            return;
        }
        let unit = factor.is_one();
        for (k, v) in &other.terms {
            let c = if unit { v.clone() } else { v.clone() * factor };
            self.add_term(k.clone(), c);
        }
    }

    pub fn add_vec(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_vec(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }

    pub fn scale(&self, factor: &R) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, factor);
        out
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&R) -> S) -> SparseVec<K, S> {
        let mut out = SparseVec::new();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    /// Linear extension of a map on basis labels.
    pub fn flat_map<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> SparseVec<K2, R>) -> SparseVec<K2, R> {
        let mut out = SparseVec::new();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<K, R> {
        self.terms
    }
}

impl<K: Ord + Clone, R: Scalar> FromIterator<(K, R)> for SparseVec<K, R> {
    fn from_iter<I: IntoIterator<Item = (K, R)>>(iter: I) -> Self {
        let mut v = Self::new();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl<'a, K: Ord, R> IntoIterator for &'a SparseVec<K, R> {
    type Item = (&'a K, &'a R);
    type IntoIter = btree_map::Iter<'a, K, R>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Ord + fmt::Debug, R: fmt::Display> fmt::Debug for SparseVec<K, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})·{k:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, Rational};

    #[test]
    fn cancellation_removes_entries() {
        let mut v: SparseVec<i32, Rational> = SparseVec::basis(3);
        v.add_term(3, int(-1));
        assert!(v.is_zero());
        v.add_term(1, int(0));
        assert!(v.is_zero());
    }

    #[test]
    fn flat_map_is_linear() {
        let v: SparseVec<i32, Rational> = [(1, int(2)), (2, int(3))].into_iter().collect();
        let w = v.flat_map(|k| SparseVec::term(k * 10, int(*k as i64)));
        assert_eq!(w.get(&10), Some(&int(2)));
        assert_eq!(w.get(&20), Some(&int(6)));
    }
}
