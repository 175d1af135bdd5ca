//! Brute-force reference computations used to cross-check the sparse
//! algorithms. They share no code with the modules they check beyond the
//! basic value types: relations are rebuilt from coordinates, elimination is
//! dense over `Rational64`, and the group-ring solver is replaced by a plain
//! linear solve on a bounded support.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::groupring::RingElement;
use crate::groupword::{GroupPresentation, Word};
use crate::lattice::{LatticeVector, ThetaPair, Window};
use crate::rational::Q;
use crate::wspace::WVector;

/// Dense reduced row echelon form; pivots are leftmost nonzero columns.
#[derive(Clone, Debug)]
pub struct DenseRref {
    pub rows: Vec<Vec<Rational64>>,
    pub pivots: Vec<usize>,
}

pub fn dense_rref(mut m: Vec<Vec<Rational64>>, ncols: usize) -> DenseRref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    DenseRref { rows: m, pivots }
}

pub fn dense_rank(m: Vec<Vec<Rational64>>, ncols: usize) -> usize {
    dense_rref(m, ncols).pivots.len()
}

fn box_vectors(w: Window) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..w.rank {
        let mut next = Vec::new();
        for v in &out {
            for c in -w.bound..=w.bound {
                let mut u = v.clone();
                u.push(c);
                next.push(u);
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().any(|&c| c != 0));
    out
}

/// Column index of every `theta_{a,b}` with `a, b` in the box, in lex order.
pub fn dense_columns(w: Window) -> BTreeMap<(Vec<i64>, Vec<i64>), usize> {
    let vs = box_vectors(w);
    let mut cols = Vec::new();
    for a in &vs {
        for b in &vs {
            if a != b {
                cols.push((a.clone(), b.clone()));
            }
        }
    }
    cols.sort();
    cols.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
}

/// Dense matrix of all four-term relations with every term in the box.
pub fn dense_relation_matrix(w: Window) -> (Vec<Vec<Rational64>>, usize) {
    let cols = dense_columns(w);
    let n = cols.len();
    let vs = box_vectors(w);
    let sub = |x: &[i64], y: &[i64]| -> Vec<i64> { x.iter().zip(y).map(|(p, q)| p - q).collect() };
    let neg = |x: &[i64]| -> Vec<i64> { x.iter().map(|p| -p).collect() };
    let mut rows = Vec::new();
    for a in &vs {
        for b in &vs {
            if a == b {
                continue;
            }
            let d = sub(a, b);
            if d.iter().any(|c| c.abs() > w.bound) {
                continue;
            }
            let mut row = vec![Rational64::zero(); n];
            let terms = [
                ((d.clone(), neg(b)), 1),
                ((neg(&d), neg(a)), -1),
                ((a.clone(), d.clone()), -1),
                ((b.clone(), neg(&d)), 1),
            ];
            for (k, s) in terms {
                row[cols[&k]] += Rational64::from_integer(s);
            }
            rows.push(row);
        }
    }
    (rows, n)
}

pub fn dense_quotient_rank(w: Window) -> usize {
    let (m, n) = dense_relation_matrix(w);
    n - dense_rank(m, n)
}

pub fn to_r64(q: &Q) -> Rational64 {
    let n: i64 = q.0.numer().try_into().expect("small numerator");
    let d: i64 = q.0.denom().try_into().expect("small denominator");
    Rational64::new(n, d)
}

fn from_r64(r: Rational64) -> Q {
    Q::new(*r.numer(), *r.denom())
}

/// Canonical representative of `v` by dense elimination.
pub fn dense_reduce(w: Window, v: &WVector) -> WVector {
    let cols = dense_columns(w);
    let (m, n) = dense_relation_matrix(w);
    let rref = dense_rref(m, n);
    let mut x = vec![Rational64::zero(); n];
    for (p, c) in v.iter() {
        x[cols[&(p.a().coords().to_vec(), p.b().coords().to_vec())]] += to_r64(c);
    }
    for (row, &pc) in rref.rows.iter().zip(&rref.pivots) {
        let f = x[pc];
        if !f.is_zero() {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi -= f * ri;
            }
        }
    }
    let keys: Vec<&(Vec<i64>, Vec<i64>)> = {
        let mut ks: Vec<_> = cols.iter().collect();
        ks.sort_by_key(|(_, &i)| i);
        ks.into_iter().map(|(k, _)| k).collect()
    };
    x.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let (a, b) = keys[i];
            let p = ThetaPair::new(LatticeVector::new(a.clone()), LatticeVector::new(b.clone()))
                .expect("admissible column");
            (p, from_r64(c))
        })
        .collect()
}

/// Verdict of the bounded solve for `beta - C_g(beta) = y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundedSolve {
    Solvable(RingElement),
    Unsolvable,
}

/// Solves `beta - C_g(beta) = y` over `Q` with `beta` supported on
/// `{ g^i w g^-i : w in supp(y), |i| <= depth }`, by dense elimination.
/// Rational solutions are reported as `Solvable` only if integral.
pub fn bounded_minus_conj_solve(pres: &GroupPresentation, g: &Word, y: &RingElement, depth: i64) -> BoundedSolve {
    let ginv = pres.inverse(g);
    // brute-force conjugation: repeated g . w . g^-1 by plain multiplication
    let conj = |h: &Word, w: &Word| -> Word {
        let hw = pres.multiply(h, w).expect("valid word");
        pres.multiply(&hw, &pres.inverse(h)).expect("valid word")
    };
    let mut support: Vec<Word> = Vec::new();
    for (w, _) in y.iter() {
        let mut fwd = w.clone();
        let mut bwd = w.clone();
        support.push(w.clone());
        for _ in 0..depth {
            fwd = conj(g, &fwd);
            bwd = conj(&ginv, &bwd);
            support.push(fwd.clone());
            support.push(bwd.clone());
        }
    }
    support.sort();
    support.dedup();

    // Rows are basis words of the codomain (support plus its g-image).
    let mut rows_idx: BTreeMap<Word, usize> = BTreeMap::new();
    for w in support.iter().chain(y.iter().map(|(w, _)| w)) {
        let n = rows_idx.len();
        rows_idx.entry(w.clone()).or_insert(n);
    }
    for w in &support {
        let cw = conj(g, w);
        let n = rows_idx.len();
        rows_idx.entry(cw).or_insert(n);
    }
    let nrows = rows_idx.len();
    let ncols = support.len();
    // Augmented system [A | y], one equation per codomain word.
    let mut m = vec![vec![Rational64::zero(); ncols + 1]; nrows];
    for (j, w) in support.iter().enumerate() {
        m[rows_idx[w]][j] += Rational64::one();
        let cw = conj(g, w);
        m[rows_idx[&cw]][j] -= Rational64::one();
    }
    for (w, c) in y.iter() {
        m[rows_idx[w]][ncols] += Rational64::from_integer(c);
    }
    let rref = dense_rref(m, ncols + 1);
    if rref.pivots.last() == Some(&ncols) {
        return BoundedSolve::Unsolvable;
    }
    // Free variables set to zero; pivot variables read off the augmented column.
    let mut terms = Vec::new();
    for (row, &pc) in rref.rows.iter().zip(&rref.pivots) {
        let val = row[ncols];
        if !val.is_zero() {
            if !val.is_integer() {
                return BoundedSolve::Unsolvable;
            }
            terms.push((support[pc].clone(), val.to_integer()));
        }
    }
    BoundedSolve::Solvable(RingElement::from_terms(terms))
}
