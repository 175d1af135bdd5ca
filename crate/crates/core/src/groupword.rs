//! Free products of cyclic groups and their normal-form words.
//!
//! A word is a list of syllables `(factor, exponent)` with adjacent syllables
//! in distinct factors; exponents of a `Z/m` factor lie in `[1, m-1]`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `factor_orders[i] = 0` is a `Z` factor, `m >= 2` is `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub factor_orders: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    syllables: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Sum of `|exponent|` over syllables.
    pub fn letter_length(&self) -> u64 {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }
}

/// Shortlex: fewer syllables first, then lexicographic on syllables.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.syllables.cmp(&other.syllables))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const LETTERS: &[u8] = b"stuvwxyzabcdefghijklmnopqr";

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        for (i, &(k, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match LETTERS.get(k) {
                Some(&c) => write!(f, "{}", c as char)?,
                None => write!(f, "g{k}_")?,
            }
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

/// Verdict of [`GroupPresentation::conjugation_orbit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orbit {
    /// The full cycle `x, gxg^-1, ..., ` up to the repeat of `x`.
    Finite(Vec<Word>),
    /// Leading iterates `g^i x g^-i`, `i = 0, 1, ...`, while they stay within
    /// `length_bound` letters.
    Infinite(Vec<Word>),
}

impl Orbit {
    pub fn is_finite(&self) -> bool {
        matches!(self, Orbit::Finite(_))
    }

    pub fn words(&self) -> &[Word] {
        match self {
            Orbit::Finite(w) | Orbit::Infinite(w) => w,
        }
    }
}

/// Hard cap on orbit walking steps before giving up with `Inconclusive`.
pub const MAX_ORBIT_STEPS: usize = 100_000;

impl GroupPresentation {
    pub fn new(factor_orders: Vec<u32>) -> Result<Self> {
        if factor_orders.is_empty() {
            return Err(Error::Precondition("a presentation needs at least one factor".into()));
        }
        if factor_orders.contains(&1) {
            return Err(Error::Precondition("factor order 1 is the trivial group; use >= 2 or 0".into()));
        }
        Ok(GroupPresentation { factor_orders })
    }

    /// Free group of the given rank.
    pub fn free(rank: usize) -> Self {
        GroupPresentation::new(vec![0; rank]).expect("rank >= 1")
    }

    pub fn num_factors(&self) -> usize {
        self.factor_orders.len()
    }

    /// True when the group is cyclic, hence abelian.
    pub fn is_abelian(&self) -> bool {
        self.factor_orders.len() == 1
    }

    fn normalize_exp(&self, factor: usize, e: i64) -> i64 {
        match self.factor_orders[factor] {
            0 => e,
            m => e.rem_euclid(i64::from(m)),
        }
    }

    fn push(&self, out: &mut Vec<(usize, i64)>, (f, e): (usize, i64)) {
        if let Some(last) = out.last_mut() {
            if last.0 == f {
                let merged = self.normalize_exp(f, last.1 + e);
                if merged == 0 {
                    out.pop();
                } else {
                    last.1 = merged;
                }
                return;
            }
        }
        let e = self.normalize_exp(f, e);
        if e != 0 {
            out.push((f, e));
        }
    }

    /// Checks that `w` is a normal-form word of this presentation.
    pub fn validate(&self, w: &Word) -> Result<()> {
        let bad = |reason: String| Error::PresentationMismatch { word: w.to_string(), reason };
        let mut prev: Option<usize> = None;
        for &(f, e) in &w.syllables {
            let Some(&m) = self.factor_orders.get(f) else {
                return Err(bad(format!("factor index {f} out of range (have {})", self.num_factors())));
            };
            if e == 0 || (m != 0 && !(1..i64::from(m)).contains(&e)) {
                return Err(bad(format!("exponent {e} is not reduced for factor {f}")));
            }
            if prev == Some(f) {
                return Err(bad(format!("adjacent syllables in factor {f}")));
            }
            prev = Some(f);
        }
        Ok(())
    }

    /// Normal form of an arbitrary syllable list.
    pub fn word(&self, syllables: &[(usize, i64)]) -> Result<Word> {
        let mut out = Vec::new();
        for &(f, e) in syllables {
            if f >= self.num_factors() {
                return Err(Error::PresentationMismatch {
                    word: format!("{syllables:?}"),
                    reason: format!("factor index {f} out of range (have {})", self.num_factors()),
                });
            }
            self.push(&mut out, (f, e));
        }
        Ok(Word { syllables: out })
    }

    /// The generator of factor `i`.
    pub fn generator(&self, i: usize) -> Result<Word> {
        self.word(&[(i, 1)])
    }

    pub fn multiply(&self, u: &Word, v: &Word) -> Result<Word> {
        self.validate(u)?;
        self.validate(v)?;
        let mut out = u.syllables.clone();
        for &s in &v.syllables {
            self.push(&mut out, s);
        }
        Ok(Word { syllables: out })
    }

    pub fn multiply_all<'a>(&self, ws: impl IntoIterator<Item = &'a Word>) -> Result<Word> {
        let mut acc = Word::identity();
        for w in ws {
            acc = self.multiply(&acc, w)?;
        }
        Ok(acc)
    }

    /// Inverse; `u` is assumed to be a valid word of this presentation.
    pub fn inverse(&self, u: &Word) -> Word {
        Word { syllables: u.syllables.iter().rev().map(|&(f, e)| (f, self.normalize_exp(f, -e))).collect() }
    }

    pub fn power(&self, u: &Word, k: i64) -> Result<Word> {
        self.validate(u)?;
        let base = if k < 0 { self.inverse(u) } else { u.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = self.multiply(&out, &base)?;
        }
        Ok(out)
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: &Word, x: &Word) -> Result<Word> {
        let gx = self.multiply(g, x)?;
        self.multiply(&gx, &self.inverse(g))
    }

    /// `(core, conjugator)` with `x = conjugator . core . conjugator^-1` and
    /// `core` cyclically reduced.
    pub fn cyclic_reduce(&self, x: &Word) -> Result<(Word, Word)> {
        self.validate(x)?;
        let mut core = x.syllables.clone();
        let mut conj: Vec<(usize, i64)> = Vec::new();
        while core.len() >= 2 && core[0].0 == core[core.len() - 1].0 {
            let first = core.remove(0);
            self.push(&mut core, first);
            self.push(&mut conj, first);
        }
        Ok((Word { syllables: core }, Word { syllables: conj }))
    }

    /// Order of `x`, `None` for infinite order.
    pub fn order(&self, x: &Word) -> Result<Option<u64>> {
        let (core, _) = self.cyclic_reduce(x)?;
        Ok(match core.syllables.as_slice() {
            [] => Some(1),
            [(f, e)] => match self.factor_orders[*f] {
                0 => None,
                m => {
                    let m = u64::from(m);
                    Some(m / m.gcd(&e.unsigned_abs()))
                }
            },
            _ => None,
        })
    }

    /// `x . x = 1`; true for the identity as well.
    pub fn is_two_torsion(&self, x: &Word) -> Result<bool> {
        Ok(self.multiply(x, x)?.is_identity())
    }

    pub fn commutes(&self, g: &Word, x: &Word) -> Result<bool> {
        Ok(self.multiply(g, x)? == self.multiply(x, g)?)
    }

    /// The orbit of `x` under `C_g`.
    ///
    /// For `g` of finite order the cycle is enumerated. For `g` of infinite
    /// order the orbit is finite exactly when `g` and `x` commute, because
    /// centralizers of infinite-order elements in a free product of cyclic
    /// groups are infinite cyclic; otherwise the iterates are pairwise
    /// distinct and the leading ones within `length_bound` letters are
    /// returned.
    pub fn conjugation_orbit(&self, g: &Word, x: &Word, length_bound: usize) -> Result<Orbit> {
        self.validate(g)?;
        self.validate(x)?;
        if x.is_identity() {
            return Err(Error::IdentityWord("orbit base point"));
        }
        match self.order(g)? {
            Some(n) => {
                let mut cycle = vec![x.clone()];
                let mut cur = self.conjugate(g, x)?;
                for _ in 1..n {
                    if &cur == x {
                        break;
                    }
                    cycle.push(cur.clone());
                    cur = self.conjugate(g, &cur)?;
                }
                debug_assert_eq!(&cur, x);
                Ok(Orbit::Finite(cycle))
            }
            None => {
                if self.commutes(g, x)? {
                    return Ok(Orbit::Finite(vec![x.clone()]));
                }
                let mut prefix = vec![x.clone()];
                let mut cur = x.clone();
                for _ in 0..MAX_ORBIT_STEPS {
                    cur = self.conjugate(g, &cur)?;
                    if cur.letter_length() > length_bound as u64 {
                        break;
                    }
                    prefix.push(cur.clone());
                }
                Ok(Orbit::Infinite(prefix))
            }
        }
    }

    /// The `i` with `g^i from g^-i = to`, if any.
    ///
    /// For infinite-order `g` the search runs in the frame `g = c h c^-1`
    /// with `h` cyclically reduced, where the length of `h^i u h^-i` is a
    /// convex function of `i` (syllable length when `h` has at least two
    /// syllables, letter length when `h` is a power of a `Z` generator).
    /// Each direction stops once the length exceeds that of the target and
    /// is still increasing.
    pub fn conjugation_index(&self, g: &Word, from: &Word, to: &Word) -> Result<Option<i64>> {
        self.validate(g)?;
        self.validate(from)?;
        self.validate(to)?;
        if from == to {
            return Ok(Some(0));
        }
        if let Some(n) = self.order(g)? {
            let mut cur = from.clone();
            for i in 1..n {
                cur = self.conjugate(g, &cur)?;
                if &cur == to {
                    return Ok(Some(i as i64));
                }
                if &cur == from {
                    return Ok(None);
                }
            }
            return Ok(None);
        }
        if self.commutes(g, from)? {
            return Ok(None);
        }
        let (h, c) = self.cyclic_reduce(g)?;
        let cinv = self.inverse(&c);
        let u = self.conjugate(&cinv, from)?;
        let target = self.conjugate(&cinv, to)?;
        let measure = |w: &Word| -> u64 {
            if h.len() >= 2 {
                w.len() as u64
            } else {
                w.letter_length()
            }
        };
        let goal = measure(&target);
        let hinv = self.inverse(&h);
        for (step, sign) in [(&h, 1i64), (&hinv, -1i64)] {
            let mut cur = u.clone();
            let mut prev_len = measure(&cur);
            for i in 1..=MAX_ORBIT_STEPS as i64 {
                cur = self.conjugate(step, &cur)?;
                if cur == target {
                    return Ok(Some(sign * i));
                }
                let len = measure(&cur);
                if len > goal && len > prev_len {
                    break;
                }
                if i == MAX_ORBIT_STEPS as i64 {
                    return Err(Error::Inconclusive(format!(
                        "no verdict for {from} ~ {to} under conjugation by {g} within {MAX_ORBIT_STEPS} steps"
                    )));
                }
                prev_len = len;
            }
        }
        Ok(None)
    }
}
