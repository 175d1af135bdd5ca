//! `W(Y)`: rational combinations of `theta_{a,b}` symbols modulo the
//! four-term relations, truncated to a max-norm window.
//!
//! Each relation only touches symbols whose index triangle `{±a, ±b, ±(a-b)}`
//! agrees with that of its own `(a, b)`. The relation span therefore splits
//! into small independent components, and the basis is assembled from
//! per-component echelon forms (in parallel, merged in a fixed order).

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_pairs, LatticeMap, LatticeVector, ThetaPair, Window};
use crate::linalg::{Echelon, SparseVec};
use crate::rational::Q;

/// A finite rational combination of `theta_{a,b}` symbols.
pub type WVector = SparseVec<ThetaPair>;

/// `theta_{a,b}` as a vector.
pub fn theta(a: &[i64], b: &[i64]) -> WVector {
    WVector::basis(ThetaPair::of(a, b))
}

/// `theta_{a-b,-b} - theta_{b-a,-a} - theta_{a,a-b} + theta_{b,b-a}`.
pub fn relation(a: &LatticeVector, b: &LatticeVector) -> Result<WVector> {
    let p = ThetaPair::new(a.clone(), b.clone())?;
    Ok(relation_of(&p))
}

fn relation_of(p: &ThetaPair) -> WVector {
    let (a, b) = (p.a(), p.b());
    let amb = a.sub(b);
    let bma = b.sub(a);
    let t = |x: LatticeVector, y: LatticeVector| ThetaPair::new_unchecked(x, y);
    WVector::from_terms([
        (t(amb.clone(), b.neg()), Q::one()),
        (t(bma.clone(), a.neg()), -Q::one()),
        (t(a.clone(), amb), -Q::one()),
        (t(b.clone(), bma), Q::one()),
    ])
}

/// Canonical label of the relation component containing `theta_{a,b}`.
pub fn component_of(p: &ThetaPair) -> Vec<LatticeVector> {
    let d = p.a().sub(p.b());
    let mut c = vec![p.a().clone(), p.a().neg(), p.b().clone(), p.b().neg(), d.neg(), d];
    c.sort();
    c.dedup();
    c
}

/// Smallest window bound containing every symbol of `v` (0 for `v = 0`).
pub fn required_bound(v: &WVector) -> i64 {
    v.keys().map(ThetaPair::max_norm).max().unwrap_or(0)
}

/// Echelon form of the window-internal relations.
#[derive(Clone, Debug)]
pub struct RelationBasis {
    window: Window,
    echelon: Echelon<ThetaPair>,
}

impl RelationBasis {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn rows(&self) -> impl Iterator<Item = &WVector> {
        self.echelon.rows()
    }

    pub fn is_pivot(&self, p: &ThetaPair) -> bool {
        self.echelon.is_pivot(p)
    }

    pub fn echelon(&self) -> &Echelon<ThetaPair> {
        &self.echelon
    }

    pub fn check_support(&self, v: &WVector) -> Result<()> {
        for p in v.keys() {
            if p.rank() != self.window.rank {
                return Err(Error::ArityMismatch { expected: self.window.rank, found: p.rank() });
            }
        }
        let required = required_bound(v);
        if required > self.window.bound {
            return Err(Error::OutsideWindow { bound: self.window.bound, required });
        }
        Ok(())
    }

    /// Canonical representative of `v` modulo the relation span.
    pub fn reduce(&self, v: &WVector) -> Result<WVector> {
        self.check_support(v)?;
        Ok(self.echelon.reduce(v))
    }
}

/// The relations whose four terms all lie in `w`, in pair order.
pub fn window_relations(w: Window) -> Vec<WVector> {
    enumerate_pairs(w).into_iter().filter(|p| p.triangle_norm() <= w.bound).map(|p| relation_of(&p)).collect()
}

pub fn build_relation_basis(w: Window) -> RelationBasis {
    let mut components: BTreeMap<Vec<LatticeVector>, Vec<WVector>> = BTreeMap::new();
    for p in enumerate_pairs(w) {
        if p.triangle_norm() <= w.bound {
            components.entry(component_of(&p)).or_default().push(relation_of(&p));
        }
    }
    let parts: Vec<Echelon<ThetaPair>> =
        components.into_par_iter().map(|(_, rels)| Echelon::from_vectors(&rels)).collect();
    let mut echelon = Echelon::new();
    for part in &parts {
        for row in part.rows() {
            echelon.insert(row);
        }
    }
    RelationBasis { window: w, echelon }
}

/// `|pairs(w)| - rank(relations)`.
pub fn quotient_rank(w: Window) -> usize {
    enumerate_pairs(w).len() - build_relation_basis(w).rank()
}

/// `theta_{a,b} -> theta_{Ma,Mb}`.
pub fn pushforward(inj: &LatticeMap, v: &WVector) -> Result<WVector> {
    inj.ensure_injective()?;
    v.try_map_keys(|p| {
        let a = inj.apply(p.a())?;
        let b = inj.apply(p.b())?;
        Ok(Some(ThetaPair::new_unchecked(a, b)))
    })
}

/// Left inverse of [`pushforward`]: symbols outside the image lattice go to 0.
pub fn retract(inj: &LatticeMap, v: &WVector) -> Result<WVector> {
    let inv = inj.left_inverse()?;
    v.try_map_keys(|p| {
        let (Some(a), Some(b)) = (inv.preimage(p.a())?, inv.preimage(p.b())?) else {
            return Ok(None);
        };
        Ok(Some(ThetaPair::new_unchecked(a, b)))
    })
}

/// Action of `-id` on `H_1`: `theta_{a,b} -> theta_{-a,-b}`.
pub fn iota_star(v: &WVector) -> WVector {
    v.map_keys(|p| Some(p.negated()))
}
