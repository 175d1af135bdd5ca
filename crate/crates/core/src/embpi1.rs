//! The semidirect product `Z[G \ 1] x| G` with
//! `(x1, y1)(x2, y2) = (x1 + C_{y1}(x2), y1 y2)`, the loop classes built
//! from a pair of group elements, and the conjugacy decision for elements
//! sharing their group part.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupring::{conj_action, minus_conj_solvable, ConjSolve, OrbitObstruction, RingElement};
use crate::groupword::{GroupPresentation, Word};

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SemidirectElement {
    pub ring_part: RingElement,
    pub group_part: Word,
}

impl SemidirectElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(ring_part: RingElement, group_part: Word) -> Self {
        SemidirectElement { ring_part, group_part }
    }

    pub fn ring(x: RingElement) -> Self {
        Self::new(x, Word::identity())
    }

    pub fn group(y: Word) -> Self {
        Self::new(RingElement::zero(), y)
    }

    pub fn is_identity(&self) -> bool {
        self.ring_part.is_zero() && self.group_part.is_identity()
    }
}

pub fn sd_multiply(p: &GroupPresentation, u: &SemidirectElement, v: &SemidirectElement) -> Result<SemidirectElement> {
    let moved = conj_action(p, &u.group_part, &v.ring_part)?;
    Ok(SemidirectElement { ring_part: u.ring_part.add(&moved), group_part: p.multiply(&u.group_part, &v.group_part)? })
}

pub fn sd_product<'a>(
    p: &GroupPresentation,
    factors: impl IntoIterator<Item = &'a SemidirectElement>,
) -> Result<SemidirectElement> {
    let mut acc = SemidirectElement::identity();
    for f in factors {
        acc = sd_multiply(p, &acc, f)?;
    }
    Ok(acc)
}

/// `(x, y)^-1 = (-C_{y^-1}(x), y^-1)`.
pub fn sd_inverse(p: &GroupPresentation, u: &SemidirectElement) -> Result<SemidirectElement> {
    p.validate(&u.group_part)?;
    let yinv = p.inverse(&u.group_part);
    Ok(SemidirectElement { ring_part: conj_action(p, &yinv, &u.ring_part)?.neg(), group_part: yinv })
}

/// `w u w^-1`.
pub fn sd_conjugate(p: &GroupPresentation, w: &SemidirectElement, u: &SemidirectElement) -> Result<SemidirectElement> {
    let wu = sd_multiply(p, w, u)?;
    sd_multiply(p, &wu, &sd_inverse(p, w)?)
}

fn nontrivial(a1: &Word, a2: &Word) -> Result<()> {
    if a1.is_identity() {
        return Err(Error::IdentityWord("alpha_1"));
    }
    if a2.is_identity() {
        return Err(Error::IdentityWord("alpha_2"));
    }
    Ok(())
}

/// `(0, a1)(0, a2) = (0, a1 a2)`.
pub fn loop_class_standard(p: &GroupPresentation, a1: &Word, a2: &Word) -> Result<SemidirectElement> {
    nontrivial(a1, a2)?;
    sd_multiply(p, &SemidirectElement::group(a1.clone()), &SemidirectElement::group(a2.clone()))
}

/// `(0, a1)(beta0, 1)(0, a2)(-beta0, 1)`.
pub fn loop_class_twisted(
    p: &GroupPresentation,
    a1: &Word,
    a2: &Word,
    beta0: &RingElement,
) -> Result<SemidirectElement> {
    nontrivial(a1, a2)?;
    sd_product(
        p,
        &[
            SemidirectElement::group(a1.clone()),
            SemidirectElement::ring(beta0.clone()),
            SemidirectElement::group(a2.clone()),
            SemidirectElement::ring(beta0.neg()),
        ],
    )
}

/// `(C_{a1}(beta0) - C_{a1 a2}(beta0), a1 a2)`.
pub fn loop_class_twisted_closed_form(
    p: &GroupPresentation,
    a1: &Word,
    a2: &Word,
    beta0: &RingElement,
) -> Result<SemidirectElement> {
    nontrivial(a1, a2)?;
    let alpha = p.multiply(a1, a2)?;
    let ring = conj_action(p, a1, beta0)?.sub(&conj_action(p, &alpha, beta0)?);
    Ok(SemidirectElement::new(ring, alpha))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugacy {
    /// `w` with `w (0, alpha) w^-1 = (v, alpha)`, checked in the group.
    Conjugate(SemidirectElement),
    NotConjugate(Vec<OrbitObstruction>),
}

impl Conjugacy {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, Conjugacy::Conjugate(_))
    }
}

/// Decides whether `(v, alpha)` is conjugate to `(0, alpha)`, i.e. whether
/// `v` lies in the image of `id - C_alpha`.
pub fn are_conjugate_same_group_part(p: &GroupPresentation, v: &RingElement, alpha: &Word) -> Result<Conjugacy> {
    p.validate(alpha)?;
    if alpha.is_identity() {
        return Err(Error::IdentityWord("alpha"));
    }
    match minus_conj_solvable(p, alpha, v)? {
        ConjSolve::Solvable(beta) => {
            let w = SemidirectElement::ring(beta);
            let target = SemidirectElement::new(v.clone(), alpha.clone());
            if sd_conjugate(p, &w, &SemidirectElement::group(alpha.clone()))? != target {
                return Err(Error::Inconclusive("conjugator failed verification".into()));
            }
            Ok(Conjugacy::Conjugate(w))
        }
        ConjSolve::Unsolvable(obs) => Ok(Conjugacy::NotConjugate(obs)),
    }
}

/// The same decision after conjugating `(v, a1 a2)` by `(0, a1^-1)`, which
/// turns it into `(C_{a1^-1}(v), a2 a1)`.
pub fn are_conjugate_normalized(
    p: &GroupPresentation,
    v: &RingElement,
    a1: &Word,
    a2: &Word,
) -> Result<(SemidirectElement, Conjugacy)> {
    nontrivial(a1, a2)?;
    let alpha = p.multiply(a1, a2)?;
    let shift = SemidirectElement::group(p.inverse(a1));
    let moved = sd_conjugate(p, &shift, &SemidirectElement::new(v.clone(), alpha))?;
    let verdict = are_conjugate_same_group_part(p, &moved.ring_part, &moved.group_part)?;
    Ok((moved, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{dax_composite, minus_conj};
    use proptest::prelude::*;

    fn w(p: &GroupPresentation, s: &[(usize, i64)]) -> Word {
        p.word(s).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let p = GroupPresentation::free(2);
        let y = w(&p, &[(0, 1)]);
        let x = RingElement::from_terms([(w(&p, &[(1, 1)]), 2)]);
        let prod = sd_multiply(&p, &SemidirectElement::group(y.clone()), &SemidirectElement::ring(x.clone())).unwrap();
        assert_eq!(prod, SemidirectElement::new(conj_action(&p, &y, &x).unwrap(), y));
        let x2 = RingElement::from_terms([(w(&p, &[(0, 2)]), -1)]);
        let sum = sd_multiply(&p, &SemidirectElement::ring(x.clone()), &SemidirectElement::ring(x2.clone())).unwrap();
        assert_eq!(sum, SemidirectElement::ring(x.add(&x2)));
    }

    #[test]
    fn loop_class_examples() {
        let p = GroupPresentation::free(2);
        let (s, t) = (w(&p, &[(0, 1)]), w(&p, &[(1, 1)]));
        let st = p.multiply(&s, &t).unwrap();
        assert_eq!(loop_class_standard(&p, &s, &t).unwrap(), SemidirectElement::group(st.clone()));
        assert_eq!(
            loop_class_twisted(&p, &s, &t, &RingElement::zero()).unwrap(),
            loop_class_standard(&p, &s, &t).unwrap()
        );
        assert!(matches!(loop_class_standard(&p, &Word::identity(), &t), Err(Error::IdentityWord(_))));
        let b0 = dax_composite(&p, &[1, 2], &st).unwrap();
        let twisted = loop_class_twisted(&p, &s, &t, &b0).unwrap();
        assert_eq!(twisted, loop_class_twisted_closed_form(&p, &s, &t, &b0).unwrap());
        assert_eq!(twisted.group_part, st);
    }

    #[test]
    fn conjugacy_examples() {
        let p = GroupPresentation::free(2);
        let alpha = w(&p, &[(0, 1), (1, 1)]);
        assert_eq!(
            are_conjugate_same_group_part(&p, &RingElement::zero(), &alpha).unwrap(),
            Conjugacy::Conjugate(SemidirectElement::identity())
        );
        let x = RingElement::from_terms([(w(&p, &[(1, 1)]), 3), (w(&p, &[(0, -2)]), -1)]);
        let v = minus_conj(&p, &alpha, &x).unwrap();
        assert!(are_conjugate_same_group_part(&p, &v, &alpha).unwrap().is_conjugate());
    }

    #[test]
    fn twisted_loop_is_not_conjugate() {
        for orders in [vec![0, 0], vec![0, 3], vec![3, 0], vec![0, 4]] {
            let p = GroupPresentation::new(orders).unwrap();
            let (a1, a2) = (w(&p, &[(0, 1)]), w(&p, &[(1, 1)]));
            let alpha = p.multiply(&a1, &a2).unwrap();
            let b0 = dax_composite(&p, &[2, 0, -1], &alpha).unwrap();
            let twisted = loop_class_twisted(&p, &a1, &a2, &b0).unwrap();
            let direct = are_conjugate_same_group_part(&p, &twisted.ring_part, &alpha).unwrap();
            let (moved, normalized) = are_conjugate_normalized(&p, &twisted.ring_part, &a1, &a2).unwrap();
            assert!(!direct.is_conjugate());
            assert!(!normalized.is_conjugate());
            assert_eq!(moved.group_part, p.multiply(&a2, &a1).unwrap());
            let expect = b0.sub(&conj_action(&p, &a2, &b0).unwrap());
            assert_eq!(moved.ring_part, expect);
        }
    }

    // Exhaustive search for a conjugator (x, y): y ranges over short words
    // centralizing alpha, x over small combinations of nearby words.
    fn brute_conjugator(p: &GroupPresentation, v: &RingElement, alpha: &Word) -> bool {
        let gens: Vec<Word> = (0..p.num_factors()).flat_map(|i| [w(p, &[(i, 1)]), w(p, &[(i, -1)])]).collect();
        let mut ys = vec![Word::identity()];
        let mut frontier = ys.clone();
        for _ in 0..3 {
            let mut next = Vec::new();
            for u in &frontier {
                for g in &gens {
                    next.push(p.multiply(u, g).unwrap());
                }
            }
            ys.extend(next.iter().cloned());
            frontier = next;
        }
        ys.sort();
        ys.dedup();
        ys.retain(|y| p.commutes(y, alpha).unwrap());
        let mut cands: Vec<Word> = Vec::new();
        let ainv = p.inverse(alpha);
        for (u, _) in v.iter() {
            cands.push(u.clone());
            cands.push(p.conjugate(alpha, u).unwrap());
            cands.push(p.conjugate(&ainv, u).unwrap());
        }
        cands.sort();
        cands.dedup();
        let n = cands.len();
        let target = SemidirectElement::new(v.clone(), alpha.clone());
        let base = SemidirectElement::group(alpha.clone());
        let coeffs = [-2i64, -1, 0, 1, 2];
        let total = coeffs.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut x = RingElement::zero();
            for u in &cands {
                x.add_term(u.clone(), coeffs[c % coeffs.len()]);
                c /= coeffs.len();
            }
            if x.len() > 4 {
                continue;
            }
            for y in &ys {
                let wd = SemidirectElement::new(x.clone(), y.clone());
                if sd_conjugate(p, &wd, &base).unwrap() == target {
                    return true;
                }
            }
        }
        false
    }

    fn arb_sd(p: GroupPresentation) -> impl Strategy<Value = SemidirectElement> {
        let word = prop::collection::vec((0usize..2, -2i64..=2), 0..=3);
        (prop::collection::vec((word.clone(), -2i64..=2), 0..=3), word).prop_map(move |(ts, g)| {
            SemidirectElement::new(
                RingElement::from_terms(ts.into_iter().map(|(s, c)| (p.word(&s).unwrap(), c))),
                p.word(&g).unwrap(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn group_laws(
            u in arb_sd(GroupPresentation::free(2)),
            v in arb_sd(GroupPresentation::free(2)),
            x in arb_sd(GroupPresentation::free(2)),
        ) {
            let p = GroupPresentation::free(2);
            let l = sd_multiply(&p, &sd_multiply(&p, &u, &v).unwrap(), &x).unwrap();
            let r = sd_multiply(&p, &u, &sd_multiply(&p, &v, &x).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert!(sd_multiply(&p, &u, &sd_inverse(&p, &u).unwrap()).unwrap().is_identity());
            prop_assert!(sd_multiply(&p, &sd_inverse(&p, &u).unwrap(), &u).unwrap().is_identity());
        }

        #[test]
        fn twisted_closed_form(
            a in prop::collection::vec((0usize..2, -2i64..=2), 1..=3),
            b in prop::collection::vec((0usize..2, -2i64..=2), 1..=3),
            t in arb_sd(GroupPresentation::new(vec![3, 0]).unwrap()),
        ) {
            let p = GroupPresentation::new(vec![3, 0]).unwrap();
            let (a1, a2) = (p.word(&a).unwrap(), p.word(&b).unwrap());
            prop_assume!(!a1.is_identity() && !a2.is_identity());
            let b0 = t.ring_part;
            let lhs = loop_class_twisted(&p, &a1, &a2, &b0).unwrap();
            prop_assert_eq!(&lhs, &loop_class_twisted_closed_form(&p, &a1, &a2, &b0).unwrap());
            prop_assert_eq!(lhs.group_part, loop_class_standard(&p, &a1, &a2).unwrap().group_part);
        }

        #[test]
        fn decision_matches_brute_force(
            alpha in prop::collection::vec((0usize..2, -1i64..=1), 1..=3),
            ts in prop::collection::vec((prop::collection::vec((0usize..2, -1i64..=1), 1..=2), -1i64..=1), 1..=2),
            make_image in any::<bool>(),
        ) {
            let p = GroupPresentation::free(2);
            let alpha = p.word(&alpha).unwrap();
            prop_assume!(!alpha.is_identity());
            let x = RingElement::from_terms(ts.into_iter().map(|(s, c)| (p.word(&s).unwrap(), c)));
            let v = if make_image { minus_conj(&p, &alpha, &x).unwrap() } else { x };
            prop_assume!(v.len() <= 3);
            let verdict = are_conjugate_same_group_part(&p, &v, &alpha).unwrap();
            prop_assert_eq!(verdict.is_conjugate(), brute_conjugator(&p, &v, &alpha));
        }

        #[test]
        fn normalization_preserves_verdict(
            a in prop::collection::vec((0usize..2, -2i64..=2), 1..=2),
            b in prop::collection::vec((0usize..2, -2i64..=2), 1..=2),
            t in arb_sd(GroupPresentation::free(2)),
        ) {
            let p = GroupPresentation::free(2);
            let (a1, a2) = (p.word(&a).unwrap(), p.word(&b).unwrap());
            let alpha = p.multiply(&a1, &a2).unwrap();
            prop_assume!(!a1.is_identity() && !a2.is_identity() && !alpha.is_identity());
            let v = t.ring_part;
            let direct = are_conjugate_same_group_part(&p, &v, &alpha).unwrap();
            let (_, normalized) = are_conjugate_normalized(&p, &v, &a1, &a2).unwrap();
            prop_assert_eq!(direct.is_conjugate(), normalized.is_conjugate());
        }
    }
}
