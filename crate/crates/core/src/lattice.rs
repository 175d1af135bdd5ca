//! The lattice `Z^b` standing for `H_1(Y;Z)/tors`.
//!
//! Vectors are ordered lexicographically; that order fixes pivot order in
//! every elimination downstream, so results never depend on insertion order
//! or thread count.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "lattice vectors have arity >= 1");
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector::new(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        LatticeVector(self.0.iter().zip(&other.0).map(|(x, y)| x - y).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        LatticeVector(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|x| k * x).collect())
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::ArityMismatch { expected: self.rank(), found: other.rank() });
        }
        Ok(())
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector::new(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `a, b, a - b` all nonzero.
pub fn is_admissible(a: &LatticeVector, b: &LatticeVector) -> Result<bool> {
    a.check_arity(b)?;
    Ok(!a.is_zero() && !b.is_zero() && a != b)
}

/// An admissible index pair `(a, b)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct ThetaPair {
    a: LatticeVector,
    b: LatticeVector,
}

#[derive(Deserialize)]
struct RawPair {
    a: LatticeVector,
    b: LatticeVector,
}

impl TryFrom<RawPair> for ThetaPair {
    type Error = Error;
    fn try_from(r: RawPair) -> Result<Self> {
        ThetaPair::new(r.a, r.b)
    }
}

impl ThetaPair {
    pub fn new(a: LatticeVector, b: LatticeVector) -> Result<Self> {
        if !is_admissible(&a, &b)? {
            return Err(Error::Inadmissible { a: a.to_string(), b: b.to_string() });
        }
        Ok(ThetaPair { a, b })
    }

    /// Convenience constructor from raw coordinates; panics on bad input.
    pub fn of(a: &[i64], b: &[i64]) -> Self {
        ThetaPair::new(LatticeVector::new(a.to_vec()), LatticeVector::new(b.to_vec())).expect("admissible pair")
    }

    // Callers guarantee admissibility (images of admissible pairs).
    pub(crate) fn new_unchecked(a: LatticeVector, b: LatticeVector) -> Self {
        debug_assert!(is_admissible(&a, &b).unwrap_or(false));
        ThetaPair { a, b }
    }

    pub fn a(&self) -> &LatticeVector {
        &self.a
    }

    pub fn b(&self) -> &LatticeVector {
        &self.b
    }

    pub fn rank(&self) -> usize {
        self.a.rank()
    }

    pub fn swapped(&self) -> Self {
        ThetaPair { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn negated(&self) -> Self {
        ThetaPair { a: self.a.neg(), b: self.b.neg() }
    }

    /// `max(|a|_inf, |b|_inf)`.
    pub fn max_norm(&self) -> i64 {
        self.a.max_norm().max(self.b.max_norm())
    }

    /// `max(|a|_inf, |b|_inf, |a - b|_inf)`.
    pub fn triangle_norm(&self) -> i64 {
        self.max_norm().max(self.a.sub(&self.b).max_norm())
    }
}

impl fmt::Display for ThetaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl fmt::Debug for ThetaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// The max-norm box `|v|_inf <= bound` in `Z^rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub rank: usize,
    pub bound: i64,
}

impl Window {
    pub fn new(rank: usize, bound: i64) -> Self {
        assert!(rank >= 1 && bound >= 1, "window needs rank >= 1 and bound >= 1");
        Window { rank, bound }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.rank() == self.rank && v.max_norm() <= self.bound
    }

    pub fn contains_pair(&self, p: &ThetaPair) -> bool {
        p.rank() == self.rank && p.max_norm() <= self.bound
    }

    /// All vectors of the box in lexicographic order.
    pub fn vectors(&self) -> Vec<LatticeVector> {
        let n = self.bound;
        let mut out = vec![Vec::with_capacity(self.rank)];
        for _ in 0..self.rank {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (-n..=n).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(LatticeVector::new).collect()
    }

    pub fn nonzero_vectors(&self) -> Vec<LatticeVector> {
        self.vectors().into_iter().filter(|v| !v.is_zero()).collect()
    }
}

/// Admissible pairs with both entries in the window, strictly increasing.
pub fn enumerate_pairs(w: Window) -> Vec<ThetaPair> {
    let vs = w.nonzero_vectors();
    let mut out = Vec::new();
    for a in &vs {
        for b in &vs {
            if a != b {
                out.push(ThetaPair { a: a.clone(), b: b.clone() });
            }
        }
    }
    out
}

/// An integer matrix `Z^cols -> Z^rows`, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LatticeMap {
    rows: Vec<Vec<i64>>,
    cols: usize,
}

impl LatticeMap {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Precondition("lattice map needs at least one row and column".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ArityMismatch { expected: cols, found: r.len() });
        }
        Ok(LatticeMap { rows, cols })
    }

    /// The map `Z -> Z^b`, `1 |-> v`.
    pub fn from_column(v: &LatticeVector) -> Self {
        LatticeMap { rows: v.coords().iter().map(|&c| vec![c]).collect(), cols: 1 }
    }

    pub fn identity(rank: usize) -> Self {
        let rows = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        LatticeMap { rows, cols: rank }
    }

    pub fn scalar(rank: usize, k: i64) -> Self {
        let rows = (0..rank).map(|i| (0..rank).map(|j| if i == j { k } else { 0 }).collect()).collect();
        LatticeMap { rows, cols: rank }
    }

    pub fn source_rank(&self) -> usize {
        self.cols
    }

    pub fn target_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.rank() != self.cols {
            return Err(Error::ArityMismatch { expected: self.cols, found: v.rank() });
        }
        Ok(LatticeVector::new(self.rows.iter().map(|r| r.iter().zip(v.coords()).map(|(x, y)| x * y).sum()).collect()))
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        self.row_reduced().1.len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn ensure_injective(&self) -> Result<()> {
        let rank = self.rank();
        if rank < self.cols {
            return Err(Error::NonInjective { rank, cols: self.cols });
        }
        Ok(())
    }

    // Row echelon form of the transpose-free matrix over Q with pivot columns.
    fn row_reduced(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        let mut m: Vec<Vec<Q>> = self.rows.iter().map(|r| r.iter().map(|&x| Q::from_int(x)).collect()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for x in m[row].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..m.len() {
                if i != row && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    for j in 0..self.cols {
                        let d = &f * &m[row][j];
                        m[i][j] = &m[i][j] - &d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// A left inverse over `Q` of an injective map.
    pub fn left_inverse(&self) -> Result<LeftInverse> {
        self.ensure_injective()?;
        // Pick `cols` linearly independent rows greedily, then invert that
        // square block by Gauss-Jordan.
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..self.rows.len() {
            let mut trial: Vec<Vec<i64>> = chosen.iter().map(|&j| self.rows[j].clone()).collect();
            trial.push(self.rows[i].clone());
            let m = LatticeMap { rows: trial, cols: self.cols };
            if m.rank() == chosen.len() + 1 {
                chosen.push(i);
            }
            if chosen.len() == self.cols {
                break;
            }
        }
        let n = self.cols;
        let mut aug: Vec<Vec<Q>> = chosen
            .iter()
            .enumerate()
            .map(|(r, &i)| {
                let mut row: Vec<Q> = self.rows[i].iter().map(|&x| Q::from_int(x)).collect();
                row.extend((0..n).map(|j| Q::from_int(i64::from(r == j))));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&i| !aug[i][col].is_zero()).expect("square block is invertible");
            aug.swap(col, p);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..n {
                if i != col && !aug[i][col].is_zero() {
                    let f = aug[i][col].clone();
                    for j in 0..2 * n {
                        let d = &f * &aug[col][j];
                        aug[i][j] = &aug[i][j] - &d;
                    }
                }
            }
        }
        let inverse = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(LeftInverse { map: self.clone(), rows_used: chosen, inverse })
    }
}

/// Exact preimages under an injective [`LatticeMap`].
#[derive(Clone, Debug)]
pub struct LeftInverse {
    map: LatticeMap,
    rows_used: Vec<usize>,
    inverse: Vec<Vec<Q>>,
}

impl LeftInverse {
    /// The unique `x` with `map(x) = a`, if `a` lies in the image lattice.
    pub fn preimage(&self, a: &LatticeVector) -> Result<Option<LatticeVector>> {
        if a.rank() != self.map.target_rank() {
            return Err(Error::ArityMismatch { expected: self.map.target_rank(), found: a.rank() });
        }
        let sub: Vec<Q> = self.rows_used.iter().map(|&i| Q::from_int(a.coords()[i])).collect();
        let mut x = Vec::with_capacity(self.inverse.len());
        for row in &self.inverse {
            let mut acc = Q::zero();
            for (c, s) in row.iter().zip(&sub) {
                acc += &(c * s);
            }
            if !acc.is_integer() {
                return Ok(None);
            }
            x.push(i64::try_from(acc.0.to_integer()).expect("preimage coordinate fits in i64"));
        }
        let x = LatticeVector::new(x);
        if &self.map.apply(&x)? == a {
            Ok(Some(x))
        } else {
            Ok(None)
        }
    }
}
