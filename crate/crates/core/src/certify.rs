//! Certificate pipelines: independence and antisymmetry of invariant
//! classes in `W`, the covering-translate computation for a collection of
//! curves, and the conjugacy obstruction for twisted loop classes.
//!
//! Certificates are one-sided. `NotCertified` means no obstruction was found
//! at the given window, never that the underlying objects are trivial.

use serde::{Deserialize, Serialize};

use crate::embpi1::{
    are_conjugate_normalized, are_conjugate_same_group_part, loop_class_twisted, Conjugacy, SemidirectElement,
};
use crate::error::{Error, Result};
use crate::groupring::{dax_composite, OrbitObstruction};
use crate::groupword::{GroupPresentation, Word};
use crate::lattice::{LatticeMap, LatticeVector, Window};
use crate::linalg::Echelon;
use crate::rational::Q;
use crate::wspace::{build_relation_basis, iota_star, pushforward, required_bound, retract, RelationBasis, WVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified,
    Inconclusive,
}

/// How a curve's tubular map compares with the base curve's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveRelation {
    Independent,
    Equal,
    Negated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDatum {
    /// Image of the generator of `H_1` of the curve.
    pub image_class: LatticeVector,
    /// Signed intersection number with the base surface.
    #[serde(with = "crate::rational::int_string")]
    pub intersection: i64,
    pub relation: CurveRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntisymmetryFailure {
    pub index: usize,
    /// `reduce(iota_*(v) + v)`.
    pub residue: WVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CaseTally {
    pub equal: usize,
    pub negated: usize,
    pub independent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyEvidence {
    pub group_part: Word,
    pub ring_part: crate::groupring::RingElement,
    pub conjugate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SemidirectElement>,
    pub obstructions: Vec<OrbitObstruction>,
}

impl ConjugacyEvidence {
    fn new(target: &SemidirectElement, c: Conjugacy) -> Self {
        let (conjugate, witness, obstructions) = match c {
            Conjugacy::Conjugate(w) => (true, Some(w), Vec::new()),
            Conjugacy::NotConjugate(obs) => (false, None, obs),
        };
        ConjugacyEvidence {
            group_part: target.group_part.clone(),
            ring_part: target.ring_part.clone(),
            conjugate,
            witness,
            obstructions,
        }
    }
}

/// Expected versus observed orbit sum at `(a2 a1)^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSumCheck {
    pub k: usize,
    pub word: Word,
    #[serde(with = "crate::rational::int_string")]
    pub expected: i64,
    #[serde(with = "crate::rational::int_string")]
    pub observed: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    Independence {
        count: usize,
        rank: usize,
        reduced: Vec<WVector>,
        echelon: Vec<WVector>,
    },
    Antisymmetry {
        checked: usize,
        failures: Vec<AntisymmetryFailure>,
    },
    Irreducible {
        tally: CaseTally,
        k: usize,
        base_intersection: String,
        class: WVector,
        psi: WVector,
        retracted: WVector,
        closed_form: WVector,
        closed_form_holds: bool,
        reduced: WVector,
    },
    Reducible {
        alpha: Word,
        beta0: crate::groupring::RingElement,
        direct: ConjugacyEvidence,
        normalized: ConjugacyEvidence,
        expected_orbits: Vec<OrbitSumCheck>,
    },
    WindowTooSmall {
        bound: i64,
        required: i64,
    },
    /// Orbit enumeration hit its step cap.
    StepLimit {
        reason: String,
    },
}

fn too_small(bound: i64, required: i64) -> Certificate {
    Certificate { verdict: Verdict::Inconclusive, evidence: Evidence::WindowTooSmall { bound, required } }
}

fn certified(ok: bool) -> Verdict {
    if ok {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    }
}

/// Reduces each vector; an `OutsideWindow` error becomes `Err(required)`.
fn reduce_all(rb: &RelationBasis, vs: &[WVector]) -> Result<std::result::Result<Vec<WVector>, i64>> {
    let mut out = Vec::with_capacity(vs.len());
    for v in vs {
        match rb.reduce(v) {
            Ok(r) => out.push(r),
            Err(Error::OutsideWindow { .. }) => {
                let required = vs.iter().map(required_bound).max().unwrap_or(0);
                return Ok(Err(required));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(out))
}

/// Certified iff the reduced classes have full rational rank.
pub fn independence_certificate(classes: &[WVector], w: Window) -> Result<Certificate> {
    independence_with_basis(classes, &build_relation_basis(w))
}

pub fn independence_with_basis(classes: &[WVector], rb: &RelationBasis) -> Result<Certificate> {
    let reduced = match reduce_all(rb, classes)? {
        Ok(r) => r,
        Err(required) => return Ok(too_small(rb.window().bound, required)),
    };
    let ech = Echelon::from_vectors(&reduced);
    let rank = ech.rank();
    Ok(Certificate {
        verdict: certified(rank == classes.len()),
        evidence: Evidence::Independence {
            count: classes.len(),
            rank,
            reduced,
            echelon: ech.rows().cloned().collect(),
        },
    })
}

/// Certified iff `iota_*(v) = -v` in `W` for every class.
pub fn antisymmetry_check(classes: &[WVector], w: Window) -> Result<Certificate> {
    antisymmetry_with_basis(classes, &build_relation_basis(w))
}

pub fn antisymmetry_with_basis(classes: &[WVector], rb: &RelationBasis) -> Result<Certificate> {
    let sums: Vec<WVector> = classes.iter().map(|v| &iota_star(v) + v).collect();
    let residues = match reduce_all(rb, &sums)? {
        Ok(r) => r,
        Err(required) => return Ok(too_small(rb.window().bound, required)),
    };
    let failures: Vec<AntisymmetryFailure> = residues
        .into_iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(index, residue)| AntisymmetryFailure { index, residue })
        .collect();
    Ok(Certificate {
        verdict: certified(failures.is_empty()),
        evidence: Evidence::Antisymmetry { checked: classes.len(), failures },
    })
}

/// Input of [`irreducible_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleInput {
    /// Classes in the rank-one `W` of the solid torus.
    pub classes: Vec<WVector>,
    /// Coefficients combining `classes` into the class `v` carried by
    /// every translate.
    pub coefficients: Vec<i64>,
    /// The first curve is the base curve.
    pub curves: Vec<CurveDatum>,
    /// Rank-one window in which the retracted class is reduced.
    pub window: Window,
}

fn validate_curves(curves: &[CurveDatum]) -> Result<()> {
    let Some(base) = curves.first() else {
        return Err(Error::Precondition("at least one curve (the base curve) is required".into()));
    };
    if base.relation != CurveRelation::Equal {
        return Err(Error::Precondition("the first curve is the base curve and must be marked equal".into()));
    }
    if base.image_class.is_zero() {
        return Err(Error::Precondition("the base curve's image class must be nonzero".into()));
    }
    let b = base.image_class.rank();
    for (i, c) in curves.iter().enumerate() {
        if c.image_class.rank() != b {
            return Err(Error::ArityMismatch { expected: b, found: c.image_class.rank() });
        }
        let ok = match c.relation {
            CurveRelation::Equal => c.image_class == base.image_class,
            CurveRelation::Negated => c.image_class == base.image_class.neg(),
            CurveRelation::Independent => {
                LatticeMap::new(vec![base.image_class.coords().to_vec(), c.image_class.coords().to_vec()])?.rank() == 2
            }
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "curve {i} is marked {:?} but its class {} does not fit the base class {}",
                c.relation, c.image_class, base.image_class
            )));
        }
    }
    Ok(())
}

/// Sums the translate contributions, retracts along the base curve and
/// compares with `k . #(base) . v`.
pub fn irreducible_certificate(input: &IrreducibleInput) -> Result<Certificate> {
    if input.window.rank != 1 {
        return Err(Error::Precondition("the solid-torus window has rank 1".into()));
    }
    if input.coefficients.len() != input.classes.len() {
        return Err(Error::Precondition(format!(
            "{} coefficients for {} classes",
            input.coefficients.len(),
            input.classes.len()
        )));
    }
    if input.coefficients.iter().all(|&c| c == 0) {
        return Err(Error::Precondition("at least one coefficient must be nonzero".into()));
    }
    validate_curves(&input.curves)?;
    let mut v = WVector::zero();
    for (c, q) in input.classes.iter().zip(&input.coefficients) {
        v.add_scaled(c, &Q::from_int(*q));
    }
    let rb = build_relation_basis(input.window);
    if let Err(Error::OutsideWindow { bound, required }) = rb.check_support(&v) {
        return Ok(too_small(bound, required));
    }
    rb.check_support(&v)?;
    let iv = iota_star(&v);
    let mut tally = CaseTally::default();
    let mut psi = WVector::zero();
    for c in &input.curves {
        let map = LatticeMap::from_column(&c.image_class);
        let n = Q::from_int(c.intersection);
        match c.relation {
            CurveRelation::Equal => {
                tally.equal += 1;
                psi.add_scaled(&pushforward(&map, &v)?, &n);
            }
            CurveRelation::Negated => {
                tally.negated += 1;
                psi.add_scaled(&pushforward(&map, &iv)?, &-n);
            }
            CurveRelation::Independent => {
                tally.independent += 1;
                psi.add_scaled(&pushforward(&map, &v)?, &n);
            }
        }
    }
    let base = &input.curves[0];
    let retracted = retract(&LatticeMap::from_column(&base.image_class), &psi)?;
    let k = tally.equal + tally.negated;
    let closed_form = v.scaled(&Q::from_int(k as i64 * base.intersection));
    let closed_form_holds = retracted == closed_form;
    let reduced = rb.reduce(&retracted)?;
    Ok(Certificate {
        verdict: certified(!reduced.is_zero()),
        evidence: Evidence::Irreducible {
            tally,
            k,
            base_intersection: base.intersection.to_string(),
            class: v,
            psi,
            retracted,
            closed_form,
            closed_form_holds,
            reduced,
        },
    })
}

/// Conjugacy obstruction for the twisted loop class built from `a1`, `a2`
/// and `beta0 = sum_k c_k (alpha^k + alpha^-k)`, `alpha = a1 a2`.
pub fn reducible_certificate(p: &GroupPresentation, a1: &Word, a2: &Word, c: &[i64]) -> Result<Certificate> {
    p.validate(a1)?;
    p.validate(a2)?;
    if a1.is_identity() || a2.is_identity() {
        return Err(Error::Precondition("alpha_1 and alpha_2 must be nontrivial".into()));
    }
    if p.is_two_torsion(a2)? {
        return Err(Error::Precondition(format!("alpha_2 = {a2} has order 2")));
    }
    if c.iter().all(|&x| x == 0) {
        return Err(Error::Precondition("the coefficients c_k must not all vanish".into()));
    }
    let alpha = p.multiply(a1, a2)?;
    if alpha.is_identity() {
        return Err(Error::Precondition("alpha_1 alpha_2 must be nontrivial".into()));
    }
    let beta0 = dax_composite(p, c, &alpha)?;
    let run = || -> Result<(ConjugacyEvidence, ConjugacyEvidence)> {
        let twisted = loop_class_twisted(p, a1, a2, &beta0)?;
        let direct = are_conjugate_same_group_part(p, &twisted.ring_part, &alpha)?;
        let (moved, normalized) = are_conjugate_normalized(p, &twisted.ring_part, a1, a2)?;
        Ok((ConjugacyEvidence::new(&twisted, direct), ConjugacyEvidence::new(&moved, normalized)))
    };
    let (direct, normalized) = match run() {
        Ok(x) => x,
        Err(Error::Inconclusive(reason)) => {
            return Ok(Certificate { verdict: Verdict::Inconclusive, evidence: Evidence::StepLimit { reason } })
        }
        Err(e) => return Err(e),
    };
    let g = p.multiply(a2, a1)?;
    let mut expected_orbits = Vec::new();
    for (i, &ck) in c.iter().enumerate() {
        if ck == 0 {
            continue;
        }
        let word = p.power(&g, i as i64 + 1)?;
        let observed = normalized
            .obstructions
            .iter()
            .find(|o| o.members.iter().any(|m| m.word == word))
            .map(|o| o.sum)
            .unwrap_or(0);
        expected_orbits.push(OrbitSumCheck { k: i + 1, word, expected: -ck, observed });
    }
    let verdict =
        if direct.conjugate != normalized.conjugate { Verdict::Inconclusive } else { certified(!direct.conjugate) };
    Ok(Certificate { verdict, evidence: Evidence::Reducible { alpha, beta0, direct, normalized, expected_orbits } })
}

impl Certificate {
    /// Re-checks a `Certified` verdict from the evidence alone.
    pub fn verify(&self) -> bool {
        if self.verdict != Verdict::Certified {
            return true;
        }
        match &self.evidence {
            Evidence::Independence { count, rank, reduced, echelon } => {
                let ech = Echelon::from_vectors(echelon);
                let mut pivots: Vec<_> = echelon.iter().filter_map(|r| r.leading().map(|(k, _)| k.clone())).collect();
                pivots.dedup();
                ech.rank() == *count
                    && *rank == *count
                    && pivots.len() == echelon.len()
                    && reduced.iter().all(|v| ech.contains(v))
            }
            Evidence::Antisymmetry { failures, .. } => failures.is_empty(),
            Evidence::Irreducible { reduced, retracted, closed_form, closed_form_holds, .. } => {
                !reduced.is_zero() && (*closed_form_holds == (retracted == closed_form))
            }
            Evidence::Reducible { direct, normalized, expected_orbits, .. } => {
                let orbit_ok = |e: &ConjugacyEvidence| {
                    !e.conjugate
                        && !e.obstructions.is_empty()
                        && e.obstructions.iter().all(|o| {
                            o.sum != 0
                                && o.members.iter().map(|m| m.coeff).sum::<i64>() == o.sum
                                && o.members.iter().all(|m| e.ring_part.get(&m.word) == m.coeff)
                        })
                };
                orbit_ok(direct) && orbit_ok(normalized) && expected_orbits.iter().all(|l| l.expected == l.observed)
            }
            Evidence::WindowTooSmall { .. } | Evidence::StepLimit { .. } => false,
        }
    }
}
