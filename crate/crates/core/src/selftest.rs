//! Embedded verification suite behind `wcalc selftest`.
//!
//! Every check is exact and seeded, so the JSON report is byte-identical
//! across runs and thread counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::confpair::{bk_quotient_check_with, closed_form_generator, computed_generator, PairingTable};
use crate::groupring::{minus_conj, minus_conj_solvable, ConjSolve, RingElement};
use crate::groupword::{GroupPresentation, Word};
use crate::lattice::{enumerate_pairs, LatticeMap, ThetaPair, Window};
use crate::oracle::{bounded_minus_conj_solve, dense_quotient_rank, BoundedSolve};
use crate::rational::Q;
use crate::wspace::{pushforward, quotient_rank, retract, WVector};

pub const SELFTEST_SCHEMA: &str = "wcalc.selftest/v1";

/// Bounds of the reported quotient-rank sequence (rank-one lattice).
pub const RANK_SEQUENCE: std::ops::RangeInclusive<i64> = 2..=6;

const SEED: u64 = 0x5eed_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Flip the signs of the zeta and `[t1 w13, t2 w23]` table entries.
    Table,
}

impl Fault {
    fn table(self) -> PairingTable {
        match self {
            Fault::Table => PairingTable { zeta_sign: -1, mixed_13_23: -1, ..PairingTable::default() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub bound: i64,
    pub rank: usize,
    pub dense_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema: String,
    pub window: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    pub quotient_ranks: Vec<RankRow>,
}

impl SelftestReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn outcome(name: &str, cases: usize, failures: Vec<String>) -> CheckOutcome {
    let detail = match failures.first() {
        None => format!("{cases} cases"),
        Some(f) => format!("{} of {cases} cases failed; first: {f}", failures.len()),
    };
    CheckOutcome { name: name.to_string(), passed: failures.is_empty(), cases, detail }
}

/// Compares coface-and-pairing against the closed forms for all admissible
/// pairs of norm at most `n` in ranks 1 and 2.
pub fn check_coface(n: i64, table: &PairingTable) -> CheckOutcome {
    let pairs: Vec<ThetaPair> = [1, 2].into_iter().flat_map(|b| enumerate_pairs(Window::new(b, n))).collect();
    let failures: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|p| {
            (0u8..=3)
                .filter(move |&k| computed_generator(table, k, p.a(), p.b()) != closed_form_generator(k, p.a(), p.b()))
                .map(move |k| format!("k = {k}, (a, b) = ({}, {})", p.a(), p.b()))
        })
        .collect();
    outcome("coface_vs_closed_form", pairs.len() * 4, failures)
}

pub fn check_bk(w: Window, table: &PairingTable) -> CheckOutcome {
    let r = bk_quotient_check_with(w, table);
    let mut failures = Vec::new();
    if !(r.ranks_agree() && r.basis_bijection) {
        failures.push(format!(
            "rank {} vs {}, zeta killed {}, theta relations match {}, bijection {}",
            r.rank_bk, r.rank_w, r.zeta_killed, r.theta_relations_match, r.basis_bijection
        ));
    }
    let mut o = outcome(&format!("bk_quotient_rank{}_bound{}", w.rank, w.bound), 1, failures);
    if o.passed {
        o.detail = format!("rank {} from {} generators", r.rank_bk, r.dim_generators);
    }
    o
}

fn random_vector(rng: &mut ChaCha8Rng, rank: usize, n: i64) -> WVector {
    let mut v = WVector::zero();
    for _ in 0..rng.gen_range(1..=5) {
        let a: Vec<i64> = (0..rank).map(|_| rng.gen_range(-n..=n)).collect();
        let b: Vec<i64> = (0..rank).map(|_| rng.gen_range(-n..=n)).collect();
        if let Ok(p) = ThetaPair::new(a.into(), b.into()) {
            v.add_term(p, Q::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
        }
    }
    v
}

fn random_injective_map(rng: &mut ChaCha8Rng, source: usize, target: usize) -> LatticeMap {
    loop {
        let rows: Vec<Vec<i64>> = (0..target).map(|_| (0..source).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let m = LatticeMap::new(rows).expect("rectangular");
        if m.is_injective() {
            return m;
        }
    }
}

/// `retract . pushforward = id` on seeded random vectors and injective
/// maps `Z^b' -> Z^b`, `b' <= 2`, `b <= 3`.
pub fn check_retraction(n: i64, cases: usize, seed: u64) -> CheckOutcome {
    let failures: Vec<String> = (0..cases)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9));
            let source = rng.gen_range(1..=2);
            let target = rng.gen_range(source..=3);
            let m = random_injective_map(&mut rng, source, target);
            let v = random_vector(&mut rng, source, n.max(1));
            let back = pushforward(&m, &v).and_then(|pv| retract(&m, &pv));
            (back.as_ref() != Ok(&v)).then(|| format!("case {i}: {v}"))
        })
        .collect();
    outcome("retract_after_pushforward", cases, failures)
}

fn random_word(rng: &mut ChaCha8Rng, p: &GroupPresentation, max_len: usize) -> Word {
    let syl: Vec<(usize, i64)> =
        (0..rng.gen_range(1..=max_len)).map(|_| (rng.gen_range(0..p.num_factors()), rng.gen_range(-2..=2))).collect();
    p.word(&syl).expect("valid syllables")
}

/// One seeded solver instance; half are solvable by construction.
pub fn solver_instance(seed: u64, i: usize) -> (GroupPresentation, Word, RingElement) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x2545_f491_4f6c_dd1d));
    let p = if i.is_multiple_of(2) {
        GroupPresentation::free(2)
    } else {
        GroupPresentation::new(vec![3, 0]).expect("valid")
    };
    let mut g = random_word(&mut rng, &p, 4);
    while g.is_identity() {
        g = random_word(&mut rng, &p, 4);
    }
    let terms: Vec<(Word, i64)> =
        (0..rng.gen_range(0..=4)).map(|_| (random_word(&mut rng, &p, 4), rng.gen_range(-2..=2))).collect();
    let seed_elt = RingElement::from_terms(terms);
    let y = if rng.gen_bool(0.5) {
        minus_conj(&p, &g, &seed_elt).expect("valid")
    } else {
        let extra: Vec<(Word, i64)> =
            (0..rng.gen_range(0..=4)).map(|_| (random_word(&mut rng, &p, 4), rng.gen_range(-2..=2))).collect();
        seed_elt.add(&RingElement::from_terms(extra))
    };
    (p, g, y)
}

/// Solver versus bounded dense oracle; every witness is re-substituted.
pub fn check_solver(cases: usize, seed: u64) -> CheckOutcome {
    let failures: Vec<String> = (0..cases)
        .into_par_iter()
        .filter_map(|i| {
            let (p, g, y) = solver_instance(seed, i);
            let verdict = match minus_conj_solvable(&p, &g, &y) {
                Ok(v) => v,
                Err(e) => return Some(format!("case {i}: {e}")),
            };
            let oracle = bounded_minus_conj_solve(&p, &g, &y, 4);
            let ok = match (&verdict, &oracle) {
                (ConjSolve::Solvable(beta), BoundedSolve::Solvable(_)) => {
                    minus_conj(&p, &g, beta).ok() == Some(y.clone())
                }
                (ConjSolve::Unsolvable(_), BoundedSolve::Unsolvable) => true,
                _ => false,
            };
            (!ok).then(|| format!("case {i}: g = {g}"))
        })
        .collect();
    outcome("solver_vs_bounded_oracle", cases, failures)
}

pub fn rank_sequence() -> Vec<RankRow> {
    RANK_SEQUENCE
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| {
            let w = Window::new(1, n);
            RankRow { bound: n, rank: quotient_rank(w), dense_rank: dense_quotient_rank(w) }
        })
        .collect()
}

pub fn run_selftest(window: i64, fault: Option<Fault>) -> SelftestReport {
    let n = window.max(1);
    let table = fault.map(Fault::table).unwrap_or_default();
    let mut bk_windows: Vec<Window> = (1..=n.min(3)).map(|m| Window::new(1, m)).collect();
    bk_windows.push(Window::new(2, 1));
    let ((coface, bk), (retraction, (solver, quotient_ranks))) = rayon::join(
        || {
            rayon::join(
                || check_coface(n, &table),
                || bk_windows.par_iter().map(|&w| check_bk(w, &table)).collect::<Vec<_>>(),
            )
        },
        || rayon::join(|| check_retraction(n, 200, SEED), || rayon::join(|| check_solver(200, SEED), rank_sequence)),
    );
    let ranks_failures: Vec<String> = quotient_ranks
        .iter()
        .filter(|r| r.rank != r.dense_rank)
        .map(|r| format!("N = {}: {} vs dense {}", r.bound, r.rank, r.dense_rank))
        .collect();
    let mut ranks = outcome("quotient_rank_vs_dense", quotient_ranks.len(), ranks_failures);
    if ranks.passed {
        let seq: Vec<String> = quotient_ranks.iter().map(|r| r.rank.to_string()).collect();
        ranks.detail = format!("ranks for N = 2..6: {}", seq.join(", "));
    }
    let mut checks = vec![coface];
    checks.extend(bk);
    checks.extend([retraction, solver, ranks]);
    SelftestReport {
        schema: SELFTEST_SCHEMA.to_string(),
        window: n,
        fault,
        passed: checks.iter().all(|c| c.passed),
        checks,
        quotient_ranks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_windows_pass() {
        for n in [1, 2] {
            let r = run_selftest(n, None);
            assert!(r.passed, "{}", r.to_json());
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        for n in [1, 2] {
            let r = run_selftest(n, Some(Fault::Table));
            assert!(!r.passed);
            assert!(!r.checks[0].passed);
        }
    }

    #[test]
    fn instances_are_seeded() {
        assert_eq!(solver_instance(7, 3), solver_instance(7, 3));
    }
}
