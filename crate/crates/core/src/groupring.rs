//! The group ring `Z[G \ 1]` over a free product of cyclic groups, with the
//! conjugation operators `C_g` and the solver for `beta - C_g(beta) = y`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groupword::{GroupPresentation, Orbit, Word};

/// A finitely supported integer combination of non-identity words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    terms: BTreeMap<Word, i64>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(w: Word, c: i64) -> Self {
        let mut x = Self::zero();
        x.add_term(w, c);
        x
    }

    /// Collects like terms; identity words and zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut x = Self::zero();
        for (w, c) in terms {
            x.add_term(w, c);
        }
        x
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 || w.is_identity() {
            return;
        }
        let e = self.terms.entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn get(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
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

    pub fn iter(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_terms(self.iter().map(|(w, c)| (w.clone(), k * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-1))
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1)
    }

    /// Sorted multiset of coefficients.
    pub fn coefficient_multiset(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.values().copied().collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[{w}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RingElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|(w, c)| WordTerm { word: w.clone(), coeff: c }))
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<WordTerm>::deserialize(d)?;
        Ok(RingElement::from_terms(terms.into_iter().map(|t| (t.word, t.coeff))))
    }
}

/// A `(word, coefficient)` term, the file form of ring elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordTerm {
    pub word: Word,
    #[serde(with = "crate::rational::int_string")]
    pub coeff: i64,
}

fn validate(p: &GroupPresentation, x: &RingElement) -> Result<()> {
    x.support().try_for_each(|w| p.validate(w))
}

/// `C_g(x)`: every basis word `w` goes to `g w g^-1`.
pub fn conj_action(p: &GroupPresentation, g: &Word, x: &RingElement) -> Result<RingElement> {
    p.validate(g)?;
    validate(p, x)?;
    let mut out = RingElement::zero();
    for (w, c) in x.iter() {
        out.add_term(p.conjugate(g, w)?, c);
    }
    Ok(out)
}

/// `beta - C_g(beta)`.
pub fn minus_conj(p: &GroupPresentation, g: &Word, beta: &RingElement) -> Result<RingElement> {
    Ok(beta.sub(&conj_action(p, g, beta)?))
}

/// `sum_k c_k (g^k + g^-k)`, `k = 1..=c.len()`.
pub fn dax_composite(p: &GroupPresentation, c: &[i64], g: &Word) -> Result<RingElement> {
    p.validate(g)?;
    if g.is_identity() {
        return Err(Error::IdentityWord("dax composite base element"));
    }
    let mut out = RingElement::zero();
    for (i, &ck) in c.iter().enumerate() {
        let k = i as i64 + 1;
        out.add_term(p.power(g, k)?, ck);
        out.add_term(p.power(g, -k)?, ck);
    }
    Ok(out)
}

/// A `C_g`-orbit meeting `supp(y)` whose coefficients do not sum to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitObstruction {
    /// Shortlex-least word of the orbit among those in `supp(y)`.
    pub representative: Word,
    /// Members of `supp(y)` in the orbit, with their coefficients in `y`.
    pub members: Vec<WordTerm>,
    #[serde(with = "crate::rational::int_string")]
    pub sum: i64,
    /// Whether the whole orbit is finite.
    pub finite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjSolve {
    /// A `beta` with `beta - C_g(beta) = y`, checked by substitution.
    Solvable(RingElement),
    /// All orbits with nonzero coefficient sum.
    Unsolvable(Vec<OrbitObstruction>),
}

struct OrbitGroup {
    base: Word,
    // (index along the orbit relative to base, word, coefficient)
    members: Vec<(i64, Word, i64)>,
    // finite orbits: the full cycle starting at base
    cycle: Option<Vec<Word>>,
}

/// Partition of `supp(y)` into `C_g`-orbits, in order of first appearance.
fn orbit_groups(p: &GroupPresentation, g: &Word, y: &RingElement) -> Result<Vec<OrbitGroup>> {
    let finite_order = p.order(g)?.is_some();
    let mut groups: Vec<OrbitGroup> = Vec::new();
    'words: for (w, c) in y.iter() {
        for grp in groups.iter_mut() {
            if let Some(i) = p.conjugation_index(g, &grp.base, w)? {
                grp.members.push((i, w.clone(), c));
                continue 'words;
            }
        }
        let cycle = if finite_order || p.commutes(g, w)? {
            match p.conjugation_orbit(g, w, 0)? {
                Orbit::Finite(cyc) => Some(cyc),
                Orbit::Infinite(_) => unreachable!("finite orbit expected"),
            }
        } else {
            None
        };
        groups.push(OrbitGroup { base: w.clone(), members: vec![(0, w.clone(), c)], cycle });
    }
    // Cycle indices are taken mod the cycle length.
    for grp in groups.iter_mut() {
        if let Some(cyc) = &grp.cycle {
            let n = cyc.len() as i64;
            for m in grp.members.iter_mut() {
                m.0 = m.0.rem_euclid(n);
            }
        }
    }
    Ok(groups)
}

/// Decides whether `beta - C_g(beta) = y` has a solution in `Z[G \ 1]`.
///
/// Solvable iff every `C_g`-orbit meets `supp(y)` with coefficient sum zero.
/// The witness on each orbit is the running sum of `y` along the orbit.
pub fn minus_conj_solvable(p: &GroupPresentation, g: &Word, y: &RingElement) -> Result<ConjSolve> {
    p.validate(g)?;
    validate(p, y)?;
    let groups = orbit_groups(p, g, y)?;
    let mut obstructions = Vec::new();
    for grp in &groups {
        let sum: i64 = grp.members.iter().map(|m| m.2).sum();
        if sum != 0 {
            let mut members: Vec<WordTerm> =
                grp.members.iter().map(|(_, w, c)| WordTerm { word: w.clone(), coeff: *c }).collect();
            members.sort_by(|a, b| a.word.cmp(&b.word));
            obstructions.push(OrbitObstruction {
                representative: members[0].word.clone(),
                members,
                sum,
                finite: grp.cycle.is_some(),
            });
        }
    }
    if !obstructions.is_empty() {
        obstructions.sort_by(|a, b| a.representative.cmp(&b.representative));
        return Ok(ConjSolve::Unsolvable(obstructions));
    }
    let mut beta = RingElement::zero();
    for grp in &groups {
        let mut by_index: BTreeMap<i64, i64> = BTreeMap::new();
        for (i, _, c) in &grp.members {
            *by_index.entry(*i).or_insert(0) += c;
        }
        match &grp.cycle {
            Some(cyc) => {
                let mut acc = 0;
                for (j, w) in cyc.iter().enumerate() {
                    acc += by_index.get(&(j as i64)).copied().unwrap_or(0);
                    beta.add_term(w.clone(), acc);
                }
            }
            None => {
                let (&lo, _) = by_index.first_key_value().expect("nonempty orbit");
                let (&hi, _) = by_index.last_key_value().expect("nonempty orbit");
                let mut cur = grp.members.iter().find(|m| m.0 == lo).expect("member at lo").1.clone();
                let mut acc = 0;
                for j in lo..hi {
                    acc += by_index.get(&j).copied().unwrap_or(0);
                    beta.add_term(cur.clone(), acc);
                    cur = p.conjugate(g, &cur)?;
                }
            }
        }
    }
    if minus_conj(p, g, &beta)? != *y {
        return Err(Error::Inconclusive(format!("witness for {y} failed substitution")));
    }
    Ok(ConjSolve::Solvable(beta))
}

/// Basis of the vectors in `span(support)` fixed by every `C_g`, `g` in
/// `gens`: one orbit-indicator sum per orbit of the generated group.
pub fn fixed_vectors(p: &GroupPresentation, gens: &[Word], support: &[Word]) -> Result<Vec<RingElement>> {
    for g in gens {
        p.validate(g)?;
    }
    let mut idx: BTreeMap<Word, usize> = BTreeMap::new();
    for w in support {
        p.validate(w)?;
        if w.is_identity() {
            return Err(Error::IdentityWord("support word"));
        }
        let n = idx.len();
        idx.entry(w.clone()).or_insert(n);
    }
    let words: Vec<Word> = {
        let mut v: Vec<(usize, Word)> = idx.iter().map(|(w, &i)| (i, w.clone())).collect();
        v.sort();
        v.into_iter().map(|(_, w)| w).collect()
    };
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for g in gens {
        for (i, w) in words.iter().enumerate() {
            let image = p.conjugate(g, w)?;
            let Some(&j) = idx.get(&image) else {
                return Err(Error::SupportNotClosed(format!("{g} (sends {w} to {image})")));
            };
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut orbits: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    let mut roots: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        let r = find(&mut parent, i);
        roots.entry(r).or_default().push(w.clone());
    }
    for (_, mut ws) in roots {
        ws.sort();
        orbits.insert(ws[0].clone(), ws);
    }
    Ok(orbits.into_values().map(|ws| RingElement::from_terms(ws.into_iter().map(|w| (w, 1)))).collect())
}

/// Like [`fixed_vectors`], after shrinking `candidates` to the largest
/// subset closed under every `C_g` and `C_g^-1`.
pub fn fixed_vectors_within(p: &GroupPresentation, gens: &[Word], candidates: &[Word]) -> Result<Vec<RingElement>> {
    let mut set: std::collections::BTreeSet<Word> = candidates.iter().filter(|w| !w.is_identity()).cloned().collect();
    let all: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), p.inverse(g)]).collect();
    loop {
        let mut drop = Vec::new();
        for w in &set {
            for g in &all {
                if !set.contains(&p.conjugate(g, w)?) {
                    drop.push(w.clone());
                    break;
                }
            }
        }
        if drop.is_empty() {
            break;
        }
        for w in drop {
            set.remove(&w);
        }
    }
    let support: Vec<Word> = set.into_iter().collect();
    fixed_vectors(p, gens, &support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{bounded_minus_conj_solve, BoundedSolve};
    use proptest::prelude::*;

    fn w(p: &GroupPresentation, s: &[(usize, i64)]) -> Word {
        p.word(s).unwrap()
    }

    #[test]
    fn conj_action_examples() {
        let p = GroupPresentation::free(2);
        let x = RingElement::from_terms([(w(&p, &[(0, 1)]), 2), (w(&p, &[(1, 1), (0, 1)]), -1)]);
        assert_eq!(conj_action(&p, &Word::identity(), &x).unwrap(), x);
        let z = GroupPresentation::free(1);
        let y = RingElement::from_terms([(w(&z, &[(0, 2)]), 3)]);
        assert_eq!(conj_action(&z, &w(&z, &[(0, 5)]), &y).unwrap(), y);
    }

    #[test]
    fn conj_of_dax_composite() {
        let p = GroupPresentation::free(2);
        let (a1, a2) = (w(&p, &[(0, 1)]), w(&p, &[(1, 1)]));
        let alpha = p.multiply(&a1, &a2).unwrap();
        let c = [2, -1, 3];
        let b0 = dax_composite(&p, &c, &alpha).unwrap();
        let lhs = conj_action(&p, &a2, &b0).unwrap();
        let a21 = p.multiply(&a2, &a1).unwrap();
        let a1i2i = p.multiply(&p.inverse(&a1), &p.inverse(&a2)).unwrap();
        let mut rhs = RingElement::zero();
        for (i, &ck) in c.iter().enumerate() {
            let k = i as i64 + 1;
            rhs.add_term(p.power(&a21, k).unwrap(), ck);
            rhs.add_term(p.power(&a1i2i, k).unwrap(), ck);
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dax_examples() {
        let p = GroupPresentation::free(2);
        let s = w(&p, &[(0, 1)]);
        let g = w(&p, &[(0, 1), (1, 1)]);
        let ginv = p.inverse(&g);
        assert_eq!(dax_composite(&p, &[1], &g).unwrap(), RingElement::from_terms([(g.clone(), 1), (ginv, 1)]));
        let g2 = p.power(&g, 2).unwrap();
        assert_eq!(
            dax_composite(&p, &[0, 1], &g).unwrap(),
            RingElement::from_terms([(g2.clone(), 1), (p.inverse(&g2), 1)])
        );
        let expect = RingElement::from_terms([
            (s.clone(), 1),
            (w(&p, &[(0, -1)]), 1),
            (w(&p, &[(0, 2)]), -1),
            (w(&p, &[(0, -2)]), -1),
        ]);
        assert_eq!(dax_composite(&p, &[1, -1], &s).unwrap(), expect);
        assert!(matches!(dax_composite(&p, &[1], &Word::identity()), Err(Error::IdentityWord(_))));
    }

    #[test]
    fn solver_examples() {
        let p = GroupPresentation::free(2);
        let s = w(&p, &[(0, 1)]);
        let t = w(&p, &[(1, 1)]);
        assert_eq!(
            minus_conj_solvable(&p, &s, &RingElement::zero()).unwrap(),
            ConjSolve::Solvable(RingElement::zero())
        );

        let z = GroupPresentation::free(1);
        let g = w(&z, &[(0, 1)]);
        let y = RingElement::from_terms([(g.clone(), 1), (w(&z, &[(0, 2)]), -1)]);
        match minus_conj_solvable(&z, &g, &y).unwrap() {
            ConjSolve::Unsolvable(obs) => {
                assert_eq!(obs.len(), 2);
                assert_eq!(obs.iter().map(|o| o.sum).collect::<Vec<_>>(), vec![1, -1]);
            }
            other => panic!("expected unsolvable, got {other:?}"),
        }

        let sts = p.conjugate(&s, &t).unwrap();
        let y = RingElement::from_terms([(t.clone(), 1), (sts, -1)]);
        assert_eq!(minus_conj_solvable(&p, &s, &y).unwrap(), ConjSolve::Solvable(RingElement::term(t, 1)));
    }

    #[test]
    fn twisted_dax_obstruction() {
        for orders in [vec![0, 0], vec![0, 3], vec![0, 4], vec![3, 0]] {
            let p = GroupPresentation::new(orders).unwrap();
            let (a1, a2) = (w(&p, &[(0, 1)]), w(&p, &[(1, 1)]));
            let alpha = p.multiply(&a1, &a2).unwrap();
            let g = p.multiply(&a2, &a1).unwrap();
            let c = [1, -2, 3];
            let b0 = dax_composite(&p, &c, &alpha).unwrap();
            let y = b0.sub(&conj_action(&p, &a2, &b0).unwrap());
            let ConjSolve::Unsolvable(obs) = minus_conj_solvable(&p, &g, &y).unwrap() else {
                panic!("expected an obstruction");
            };
            for (i, &ck) in c.iter().enumerate() {
                let gk = p.power(&g, i as i64 + 1).unwrap();
                let o = obs.iter().find(|o| o.representative == gk).expect("orbit of (a2 a1)^k");
                assert_eq!(o.sum, -ck);
                assert!(o.finite);
            }
        }
    }

    #[test]
    fn fixed_vector_examples() {
        let p = GroupPresentation::free(2);
        let s = w(&p, &[(0, 1)]);
        let t = w(&p, &[(1, 1)]);
        let sup = vec![s.clone(), t.clone()];
        assert_eq!(fixed_vectors(&p, &[Word::identity()], &sup).unwrap().len(), 2);
        let z = GroupPresentation::free(1);
        let sup_z = vec![w(&z, &[(0, 1)]), w(&z, &[(0, -3)])];
        assert_eq!(fixed_vectors(&z, &[w(&z, &[(0, 2)])], &sup_z).unwrap().len(), 2);
        assert!(matches!(
            fixed_vectors(&p, std::slice::from_ref(&s), std::slice::from_ref(&t)),
            Err(Error::SupportNotClosed(_))
        ));
        let cands: Vec<Word> = (-2..=2).map(|i| p.conjugate(&p.power(&s, i).unwrap(), &t).unwrap()).collect();
        assert!(fixed_vectors_within(&p, std::slice::from_ref(&s), &cands).unwrap().is_empty());
        let with_fixed = vec![s.clone(), w(&p, &[(0, -2)]), t];
        let fv = fixed_vectors_within(&p, &[s], &with_fixed).unwrap();
        assert_eq!(fv.len(), 2);
    }

    fn arb_instance() -> impl Strategy<Value = (GroupPresentation, Word, RingElement)> {
        let pres = prop_oneof![Just(GroupPresentation::free(2)), Just(GroupPresentation::new(vec![3, 0]).unwrap())];
        pres.prop_flat_map(|p| {
            let word = prop::collection::vec((0usize..2, -2i64..=2), 1..=4);
            let pc = p.clone();
            (Just(p), word.clone(), prop::collection::vec((word, -2i64..=2), 0..=8)).prop_map(move |(p, gs, ys)| {
                let g = p.word(&gs).unwrap();
                let y = RingElement::from_terms(ys.into_iter().map(|(s, c)| (pc.word(&s).unwrap(), c)));
                (p, g, y)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn solver_agrees_with_bounded_oracle((p, g, y) in arb_instance()) {
            let verdict = minus_conj_solvable(&p, &g, &y).unwrap();
            let oracle = bounded_minus_conj_solve(&p, &g, &y, 4);
            match (&verdict, &oracle) {
                (ConjSolve::Solvable(beta), BoundedSolve::Solvable(_)) => {
                    prop_assert_eq!(&minus_conj(&p, &g, beta).unwrap(), &y);
                }
                (ConjSolve::Unsolvable(_), BoundedSolve::Unsolvable) => {}
                _ => prop_assert!(false, "disagreement: {:?} vs {:?}", verdict, oracle),
            }
        }

        #[test]
        fn conj_action_permutes_coefficients((p, g, y) in arb_instance()) {
            let cy = conj_action(&p, &g, &y).unwrap();
            prop_assert_eq!(cy.coefficient_multiset(), y.coefficient_multiset());
            prop_assert_eq!(conj_action(&p, &p.inverse(&g), &cy).unwrap(), y);
        }
    }
}
