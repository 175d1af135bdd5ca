//! Whitehead brackets of the classes `t_i^a w_ij` in the configuration
//! spaces of two and three points, the coface maps `delta_2^k`, and the
//! pairing `Theta` into the span of `theta` and `zeta` symbols.
//!
//! Pairing values follow the table with every sign equal to `+1`:
//!
//! | bracket                        | value                        |
//! |--------------------------------|------------------------------|
//! | `[t1^a w12, t2^b w23]`         | `theta_{a,-b}`               |
//! | `[ti^a wij, ti^b wij]`         | `zeta^ij_{a,b} - zeta^ij_{b,a}` |
//! | `[t1^a w12, t1^b w13]`         | `-theta_{a,a-b}`             |
//! | `[t1^a w13, t2^b w23]`         | `-theta_{a-b,-b}`            |
//!
//! The last two rows follow from the three-term relation among the
//! `w_ij` brackets and are what makes `Theta . delta_2^k` land on the
//! four-term relations.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_pairs, LatticeVector, ThetaPair, Window};
use crate::linalg::{Echelon, SparseVec};
use crate::rational::Q;
use crate::wspace::build_relation_basis;

/// `t_i^alpha w_ij`, `1 <= i < j <= 3`, `alpha != 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorSymbol {
    pub i: u8,
    pub j: u8,
    pub alpha: LatticeVector,
}

impl GeneratorSymbol {
    pub fn new(i: u8, j: u8, alpha: LatticeVector) -> Result<Self> {
        if !(1 <= i && i < j && j <= 3) {
            return Err(Error::BadSymbol(format!("indices ({i},{j}) need 1 <= i < j <= 3")));
        }
        if alpha.is_zero() {
            return Err(Error::BadSymbol(format!("t_{i}^0 w_{i}{j} vanishes")));
        }
        Ok(GeneratorSymbol { i, j, alpha })
    }

    /// Panicking shorthand for tests and examples.
    pub fn of(i: u8, j: u8, alpha: &[i64]) -> Self {
        Self::new(i, j, LatticeVector::new(alpha.to_vec())).expect("valid symbol")
    }

    fn with(&self, i: u8, j: u8) -> Self {
        GeneratorSymbol { i, j, alpha: self.alpha.clone() }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}^{} w{}{}", self.i, self.alpha, self.i, self.j)
    }
}

impl fmt::Debug for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered bracket `[g, h]` with `g < h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bracket {
    pub left: GeneratorSymbol,
    pub right: GeneratorSymbol,
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

impl fmt::Debug for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A rational combination of brackets, stored in canonical argument order.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct BracketClass(SparseVec<Bracket>);

impl BracketClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `[g, h]`; `[h, g] = -[g, h]` and `[g, g] = 0`.
    pub fn bracket(g: GeneratorSymbol, h: GeneratorSymbol) -> Self {
        let mut c = Self::zero();
        c.add_bracket(g, h, Q::one());
        c
    }

    pub fn add_bracket(&mut self, g: GeneratorSymbol, h: GeneratorSymbol, q: Q) {
        use std::cmp::Ordering::*;
        match g.cmp(&h) {
            Less => self.0.add_term(Bracket { left: g, right: h }, q),
            Greater => self.0.add_term(Bracket { left: h, right: g }, -q),
            Equal => {}
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        BracketClass(&self.0 + &other.0)
    }

    pub fn scaled(&self, q: &Q) -> Self {
        BracketClass(self.0.scaled(q))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Bracket, &Q)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BracketClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// `delta_2^k` on a single `C_2` symbol.
pub fn coface_symbol(k: u8, s: &GeneratorSymbol) -> Result<Vec<GeneratorSymbol>> {
    if (s.i, s.j) != (1, 2) {
        return Err(Error::NotC2Symbol(s.to_string()));
    }
    Ok(match k {
        0 => vec![s.with(2, 3)],
        1 => vec![s.with(1, 3), s.with(2, 3)],
        2 => vec![s.with(1, 2), s.with(1, 3)],
        3 => vec![s.with(1, 2)],
        _ => return Err(Error::Precondition(format!("coface index {k} is not in 0..=3"))),
    })
}

/// `delta_2^k` extended bilinearly over brackets.
pub fn coface(k: u8, c: &BracketClass) -> Result<BracketClass> {
    let mut out = BracketClass::zero();
    for (br, q) in c.terms() {
        let left = coface_symbol(k, &br.left)?;
        let right = coface_symbol(k, &br.right)?;
        for x in &left {
            for y in &right {
                out.add_bracket(x.clone(), y.clone(), q.clone());
            }
        }
    }
    Ok(out)
}

/// Basis symbol of the pairing codomain. All `zeta` keys sort before all
/// `theta` keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PairingKey {
    /// `zeta^ij_{a,b}` with `(a, b) < (b, a)`.
    Zeta {
        i: u8,
        j: u8,
        #[serde(flatten)]
        pair: ThetaPair,
    },
    Theta(ThetaPair),
}

impl fmt::Display for PairingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairingKey::Zeta { i, j, pair } => write!(f, "zeta{i}{j}_{pair}"),
            PairingKey::Theta(p) => write!(f, "theta_{p}"),
        }
    }
}

impl fmt::Debug for PairingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PairingKey {
    /// Whether the symbol lies in the window: `a, b` in the box for `theta`,
    /// `a, b, a - b` in the box for `zeta`.
    pub fn in_window(&self, w: Window) -> bool {
        match self {
            PairingKey::Theta(p) => w.contains_pair(p),
            PairingKey::Zeta { pair, .. } => pair.rank() == w.rank && pair.triangle_norm() <= w.bound,
        }
    }
}

pub type PairingVector = SparseVec<PairingKey>;

pub fn theta_vec(a: &LatticeVector, b: &LatticeVector) -> PairingVector {
    match ThetaPair::new(a.clone(), b.clone()) {
        Ok(p) => PairingVector::basis(PairingKey::Theta(p)),
        Err(_) => PairingVector::zero(),
    }
}

/// `zeta^ij_{a,b} - zeta^ij_{b,a}` in antisymmetric storage (0 when the
/// indices are inadmissible).
pub fn zeta_diff(i: u8, j: u8, a: &LatticeVector, b: &LatticeVector) -> PairingVector {
    let Ok(p) = ThetaPair::new(a.clone(), b.clone()) else {
        return PairingVector::zero();
    };
    let s = p.swapped();
    if p < s {
        PairingVector::basis(PairingKey::Zeta { i, j, pair: p })
    } else {
        PairingVector::term(PairingKey::Zeta { i, j, pair: s }, -Q::one())
    }
}

/// Signs of the pairing table, `+1` everywhere by default. Other values are
/// only used to exercise the self-test's negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairingTable {
    pub theta_sign: i64,
    pub zeta_sign: i64,
    /// Sign of the `[t1 w12, t1 w13]` entry.
    pub mixed_12_13: i64,
    /// Sign of the `[t1 w13, t2 w23]` entry.
    pub mixed_13_23: i64,
}

impl Default for PairingTable {
    fn default() -> Self {
        PairingTable { theta_sign: 1, zeta_sign: 1, mixed_12_13: 1, mixed_13_23: 1 }
    }
}

impl PairingTable {
    fn bracket_value(&self, br: &Bracket) -> PairingVector {
        let (g, h) = (&br.left, &br.right);
        let (a, b) = (&g.alpha, &h.alpha);
        match ((g.i, g.j), (h.i, h.j)) {
            (x, y) if x == y => zeta_diff(g.i, g.j, a, b).scaled(&Q::from_int(self.zeta_sign)),
            ((1, 2), (2, 3)) => theta_vec(a, &b.neg()).scaled(&Q::from_int(self.theta_sign)),
            ((1, 2), (1, 3)) => theta_vec(a, &a.sub(b)).scaled(&Q::from_int(-self.mixed_12_13)),
            ((1, 3), (2, 3)) => theta_vec(&a.sub(b), &b.neg()).scaled(&Q::from_int(-self.mixed_13_23)),
            _ => PairingVector::zero(),
        }
    }

    pub fn theta_map(&self, c: &BracketClass) -> PairingVector {
        let mut out = PairingVector::zero();
        for (br, q) in c.terms() {
            out.add_scaled(&self.bracket_value(br), q);
        }
        out
    }
}

/// `Theta` with the standard table.
pub fn theta_map(c: &BracketClass) -> PairingVector {
    PairingTable::default().theta_map(c)
}

/// The closed-form generator of `Im(Theta . delta_2^k)` indexed by `(a, b)`.
pub fn closed_form_generator(k: u8, a: &LatticeVector, b: &LatticeVector) -> PairingVector {
    let amb = a.sub(b);
    let bma = b.sub(a);
    match k {
        0 => zeta_diff(2, 3, a, b),
        1 => {
            let mut v = &zeta_diff(1, 3, a, b) + &zeta_diff(2, 3, a, b);
            v = &v - &theta_vec(&amb, &b.neg());
            &v + &theta_vec(&bma, &a.neg())
        }
        2 => {
            let mut v = &zeta_diff(1, 2, a, b) + &zeta_diff(1, 3, a, b);
            v = &v - &theta_vec(a, &amb);
            &v + &theta_vec(b, &bma)
        }
        3 => zeta_diff(1, 2, a, b),
        _ => PairingVector::zero(),
    }
}

/// `Theta(delta_2^k [t1^a w12, t1^b w12])`.
pub fn computed_generator(table: &PairingTable, k: u8, a: &LatticeVector, b: &LatticeVector) -> PairingVector {
    let x = GeneratorSymbol { i: 1, j: 2, alpha: a.clone() };
    let y = GeneratorSymbol { i: 1, j: 2, alpha: b.clone() };
    let c = coface(k, &BracketClass::bracket(x, y)).expect("C_2 symbols");
    table.theta_map(&c)
}

fn spans_with(
    w: Window,
    gen: impl Fn(u8, &LatticeVector, &LatticeVector) -> PairingVector + Sync,
) -> [Vec<PairingVector>; 4] {
    let pairs = enumerate_pairs(w);
    let per_k = |k: u8| -> Vec<PairingVector> {
        pairs
            .par_iter()
            .map(|p| gen(k, p.a(), p.b()))
            .filter(|v| !v.is_zero() && v.keys().all(|key| key.in_window(w)))
            .collect()
    };
    [per_k(0), per_k(1), per_k(2), per_k(3)]
}

/// Window-internal generators of `Im(Theta . delta_2^k)`, `k = 0..=3`, from
/// the closed forms.
pub fn image_spans(w: Window) -> [Vec<PairingVector>; 4] {
    spans_with(w, closed_form_generator)
}

/// Same generators recomputed through [`coface`] and [`theta_map`].
pub fn image_spans_via_coface(w: Window, table: &PairingTable) -> [Vec<PairingVector>; 4] {
    spans_with(w, |k, a, b| computed_generator(table, k, a, b))
}

/// Outcome of comparing `span{theta, zeta diffs} / sum Im` with `W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BkReport {
    pub window: Window,
    pub dim_generators: usize,
    pub rank_images: usize,
    pub rank_bk: usize,
    pub rank_w: usize,
    /// Every `zeta` symbol dies in the quotient.
    pub zeta_killed: bool,
    /// `Im` meets the `theta` span exactly in the four-term relation span.
    pub theta_relations_match: bool,
    pub basis_bijection: bool,
}

impl BkReport {
    pub fn ranks_agree(&self) -> bool {
        self.rank_bk == self.rank_w
    }
}

/// Window-internal `zeta` keys (one per unordered `{a, b}`) and `theta` keys.
pub fn window_keys(w: Window) -> (Vec<PairingKey>, Vec<PairingKey>) {
    let pairs = enumerate_pairs(w);
    let mut zetas = Vec::new();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        for p in &pairs {
            let key = PairingKey::Zeta { i, j, pair: p.clone() };
            if p < &p.swapped() && key.in_window(w) {
                zetas.push(key);
            }
        }
    }
    let thetas = pairs.into_iter().map(PairingKey::Theta).collect();
    (zetas, thetas)
}

pub fn bk_quotient_check_with(w: Window, table: &PairingTable) -> BkReport {
    let (zetas, thetas) = window_keys(w);
    let spans = image_spans_via_coface(w, table);
    let mut im: Echelon<PairingKey> = Echelon::new();
    for span in &spans {
        for v in span {
            im.insert(v);
        }
    }
    let rb = build_relation_basis(w);
    let zeta_killed = zetas.iter().all(|z| im.is_pivot(z));
    let theta_rows: Vec<PairingVector> =
        im.rows().filter(|r| matches!(r.leading(), Some((PairingKey::Theta(_), _)))).cloned().collect();
    let relation_rows: Vec<PairingVector> =
        rb.rows().map(|r| r.map_keys(|p| Some(PairingKey::Theta(p.clone())))).collect();
    let theta_relations_match = theta_rows == relation_rows;
    let dim = zetas.len() + thetas.len();
    let rank_bk = dim - im.rank();
    let rank_w = thetas.len() - rb.rank();
    BkReport {
        window: w,
        dim_generators: dim,
        rank_images: im.rank(),
        rank_bk,
        rank_w,
        zeta_killed,
        theta_relations_match,
        basis_bijection: zeta_killed && theta_relations_match,
    }
}

pub fn bk_quotient_check(w: Window) -> BkReport {
    bk_quotient_check_with(w, &PairingTable::default())
}
