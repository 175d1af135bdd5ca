//! Sparse exact linear algebra over `Q`: finitely supported vectors indexed by
//! an ordered key type, and reduced row echelon forms with "smallest key is
//! the pivot" convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Q;

/// A finitely supported vector; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Q::one())
    }

    pub fn term(k: K, q: Q) -> Self {
        let mut v = Self::zero();
        v.add_term(k, q);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Q)>) -> Self {
        let mut v = Self::zero();
        for (k, q) in terms {
            v.add_term(k, q);
        }
        v
    }

    pub fn add_term(&mut self, k: K, q: Q) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &q;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += q * other`.
    pub fn add_scaled(&mut self, other: &Self, q: &Q) {
        if q.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * q);
        }
    }

    pub fn scaled(&self, q: &Q) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        SparseVec { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect() }
    }

    pub fn get(&self, k: &K) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
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

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn leading(&self) -> Option<(&K, &Q)> {
        self.terms.iter().next()
    }

    /// Apply a key map, collecting like terms; keys mapped to `None` are dropped.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Option<L>) -> SparseVec<L> {
        SparseVec::from_terms(self.terms.iter().filter_map(|(k, q)| f(k).map(|l| (l, q.clone()))))
    }

    /// Fallible variant of [`SparseVec::map_keys`].
    pub fn try_map_keys<L: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<Option<L>, E>,
    ) -> Result<SparseVec<L>, E> {
        let mut out = SparseVec::zero();
        for (k, q) in &self.terms {
            if let Some(l) = f(k)? {
                out.add_term(l, q.clone());
            }
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> std::ops::Add for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn add(self, rhs: &SparseVec<K>) -> SparseVec<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl<K: Ord + Clone> std::ops::Sub for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn sub(self, rhs: &SparseVec<K>) -> SparseVec<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl<K: Ord + Clone> std::ops::Neg for &SparseVec<K> {
    type Output = SparseVec<K>;
    fn neg(self) -> SparseVec<K> {
        self.scaled(&-Q::one())
    }
}

impl<K: Ord + Clone> FromIterator<(K, Q)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Q)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<K: Ord + fmt::Display> fmt::Display for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{q}*[{k}]")?;
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct Term<K> {
    #[serde(flatten)]
    key: K,
    coeff: Q,
}

impl<K: Ord + Serialize> Serialize for SparseVec<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermRef<'a, K> {
            #[serde(flatten)]
            key: &'a K,
            coeff: &'a Q,
        }
        s.collect_seq(self.terms.iter().map(|(key, coeff)| TermRef { key, coeff }))
    }
}

impl<'de, K: Ord + Clone + Deserialize<'de>> Deserialize<'de> for SparseVec<K> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term<K>>::deserialize(d)?;
        Ok(terms.into_iter().map(|t| (t.key, t.coeff)).collect())
    }
}

/// Reduced row echelon form of a subspace.
///
/// Every row has coefficient 1 at its pivot (its smallest key) and no other
/// row mentions that pivot, so [`Echelon::reduce`] yields a canonical coset
/// representative independent of insertion order.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord> {
    rows: BTreeMap<K, SparseVec<K>>,
    // non-pivot column -> pivots of the rows that mention it
    column_index: BTreeMap<K, BTreeSet<K>>,
}

impl<K: Ord> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new(), column_index: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SparseVec<K>>) -> Self
    where
        K: 'a,
    {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Rows in pivot order.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        for (k, q) in v.iter() {
            if let Some(row) = self.rows.get(k) {
                out.add_scaled(row, &-q);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.leading() else { return false };
        let pivot = pivot.clone();
        let r = r.scaled(&lead.recip());

        let touched: Vec<K> = self.column_index.remove(&pivot).map(|s| s.into_iter().collect()).unwrap_or_default();
        for q in touched {
            let mut row = self.rows.remove(&q).expect("indexed row exists");
            self.unindex(&q, &row);
            let c = row.get(&pivot);
            row.add_scaled(&r, &-c);
            self.index(&q, &row);
            self.rows.insert(q, row);
        }
        self.index(&pivot, &r);
        self.rows.insert(pivot, r);
        true
    }

    fn index(&mut self, pivot: &K, row: &SparseVec<K>) {
        for k in row.keys() {
            if k != pivot {
                self.column_index.entry(k.clone()).or_default().insert(pivot.clone());
            }
        }
    }

    fn unindex(&mut self, pivot: &K, row: &SparseVec<K>) {
        for k in row.keys() {
            if let Some(s) = self.column_index.get_mut(k) {
                s.remove(pivot);
                if s.is_empty() {
                    self.column_index.remove(k);
                }
            }
        }
    }
}
