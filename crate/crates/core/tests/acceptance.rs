//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! cargo test --test acceptance

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wcalc::certify::{
    antisymmetry_check, independence_certificate, irreducible_certificate, reducible_certificate, CurveDatum,
    CurveRelation, Evidence, IrreducibleInput, Verdict,
};
use wcalc::confpair::{bk_quotient_check, closed_form_generator, computed_generator, PairingTable};
use wcalc::groupring::{minus_conj, minus_conj_solvable, ConjSolve, RingElement};
use wcalc::groupword::{GroupPresentation, Word};
use wcalc::lattice::{enumerate_pairs, LatticeMap, ThetaPair, Window};
use wcalc::oracle::{
    bounded_minus_conj_solve, dense_columns, dense_quotient_rank, dense_rank, dense_reduce, to_r64, BoundedSolve,
};
use wcalc::selftest::run_selftest;
use wcalc::wspace::{iota_star, pushforward, quotient_rank, retract, WVector};
use wcalc::Q;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coface_consistency() -> Outcome {
    let table = PairingTable::default();
    let mut n = 0;
    for b in [1, 2] {
        for p in enumerate_pairs(Window::new(b, 3)) {
            for k in 0..=3u8 {
                let got = computed_generator(&table, k, p.a(), p.b());
                let want = closed_form_generator(k, p.a(), p.b());
                ensure(got == want, || format!("k = {k}, ({}, {}): {got} != {want}", p.a(), p.b()))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} generator comparisons"))
}

fn bk_isomorphism() -> Outcome {
    let mut ranks = Vec::new();
    for w in [Window::new(1, 1), Window::new(1, 2), Window::new(1, 3), Window::new(2, 1)] {
        let r = bk_quotient_check(w);
        ensure(r.ranks_agree() && r.basis_bijection, || format!("{w:?}: {r:?}"))?;
        let dense = dense_quotient_rank(w);
        ensure(r.rank_w == dense, || format!("{w:?}: W rank {} vs dense {dense}", r.rank_w))?;
        ranks.push(format!("({},{})->{}", w.rank, w.bound, r.rank_bk));
    }
    Ok(format!("ranks {}", ranks.join(" ")))
}

fn random_vector(rng: &mut ChaCha8Rng, rank: usize) -> WVector {
    let mut v = WVector::zero();
    for _ in 0..rng.gen_range(1..=6) {
        let a: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
        if let Ok(p) = ThetaPair::new(a.into(), b.into()) {
            v.add_term(p, Q::new(rng.gen_range(-7..=7), rng.gen_range(1..=4)));
        }
    }
    v
}

fn retraction_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nonzero = 0;
    for i in 0..500 {
        let source = rng.gen_range(1..=2);
        let target = rng.gen_range(source..=3);
        let m = loop {
            let rows: Vec<Vec<i64>> =
                (0..target).map(|_| (0..source).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let m = LatticeMap::new(rows).unwrap();
            if m.is_injective() {
                break m;
            }
        };
        let v = random_vector(&mut rng, source);
        nonzero += usize::from(!v.is_zero());
        let back = retract(&m, &pushforward(&m, &v).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(back == v, || format!("case {i}: {v} came back as {back}"))?;
    }
    Ok(format!("500 vectors ({nonzero} nonzero)"))
}

fn random_word(rng: &mut ChaCha8Rng, p: &GroupPresentation) -> Word {
    loop {
        let syl: Vec<(usize, i64)> =
            (0..rng.gen_range(1..=4)).map(|_| (rng.gen_range(0..2), rng.gen_range(-2..=2))).collect();
        let w = p.word(&syl).unwrap();
        if !w.is_identity() && w.len() <= 4 {
            return w;
        }
    }
}

fn solver_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let groups = [GroupPresentation::free(2), GroupPresentation::new(vec![0, 3]).unwrap()];
    let (mut solvable, mut unsolvable) = (0, 0);
    for i in 0..400 {
        let p = &groups[i % 2];
        let g = random_word(&mut rng, p);
        let y = if rng.gen_bool(0.5) {
            let beta = RingElement::from_terms(
                (0..rng.gen_range(1..=4)).map(|_| (random_word(&mut rng, p), rng.gen_range(-3..=3))),
            );
            minus_conj(p, &g, &beta).unwrap()
        } else {
            RingElement::from_terms(
                (0..rng.gen_range(1..=8)).map(|_| (random_word(&mut rng, p), rng.gen_range(-3..=3))),
            )
        };
        if y.len() > 8 {
            continue;
        }
        let verdict = minus_conj_solvable(p, &g, &y).map_err(|e| format!("case {i}: {e}"))?;
        match (verdict, bounded_minus_conj_solve(p, &g, &y, 6)) {
            (ConjSolve::Solvable(beta), BoundedSolve::Solvable(_)) => {
                ensure(minus_conj(p, &g, &beta).unwrap() == y, || format!("case {i}: witness does not substitute"))?;
                solvable += 1;
            }
            (ConjSolve::Unsolvable(_), BoundedSolve::Unsolvable) => unsolvable += 1,
            (v, o) => return Err(format!("case {i}: g = {g}, y = {y}: solver {v:?}, oracle {o:?}")),
        }
    }
    let total = solvable + unsolvable;
    ensure(total >= 200, || format!("only {total} instances"))?;
    Ok(format!("{total} instances ({solvable} solvable), full agreement"))
}

fn obstruction_coefficients() -> Outcome {
    let mut count = 0;
    for order in [3u32, 4, 0] {
        let p = GroupPresentation::new(vec![0, order]).unwrap();
        let (a1, a2) = (p.generator(0).unwrap(), p.generator(1).unwrap());
        let g = p.multiply(&a2, &a1).unwrap();
        for code in 1..7i64.pow(4) {
            let c: Vec<i64> = (0..4).map(|k| (code / 7i64.pow(k)) % 7 - 3).collect();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let cert = reducible_certificate(&p, &a1, &a2, &c).map_err(|e| format!("{c:?}: {e}"))?;
            ensure(cert.verdict == Verdict::Certified && cert.verify(), || {
                format!("order {order}, c = {c:?}: {:?}", cert.verdict)
            })?;
            let Evidence::Reducible { normalized, .. } = &cert.evidence else { unreachable!() };
            for (i, &ck) in c.iter().enumerate() {
                if ck == 0 {
                    continue;
                }
                let gk = p.power(&g, i as i64 + 1).unwrap();
                let orbit = normalized.obstructions.iter().find(|o| o.members.iter().any(|m| m.word == gk));
                let sum = orbit.map(|o| o.sum);
                ensure(sum == Some(-ck), || format!("order {order}, c = {c:?}, k = {}: orbit sum {sum:?}", i + 1))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} coefficient vectors over three groups"))
}

fn covering_translates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    for m in 1..=4usize {
        for n in 0..=(4 - m) {
            for x in [1i64, -2, 3] {
                for indep in [false, true] {
                    let v = random_vector(&mut rng, 1);
                    if v.is_zero() || v.keys().any(|p| p.max_norm() > 3) {
                        continue;
                    }
                    let base = vec![2, -1, 1];
                    let neg: Vec<i64> = base.iter().map(|c| -c).collect();
                    let mut curves = vec![
                        CurveDatum {
                            image_class: base.clone().into(),
                            intersection: x,
                            relation: CurveRelation::Equal
                        };
                        m
                    ];
                    curves.extend(vec![
                        CurveDatum {
                            image_class: neg.into(),
                            intersection: -x,
                            relation: CurveRelation::Negated
                        };
                        n
                    ]);
                    if indep {
                        curves.push(CurveDatum {
                            image_class: vec![0, 1, 1].into(),
                            intersection: 7,
                            relation: CurveRelation::Independent,
                        });
                    }
                    let input = IrreducibleInput {
                        classes: vec![v.clone()],
                        coefficients: vec![1],
                        curves,
                        window: Window::new(1, 3),
                    };
                    let cert = irreducible_certificate(&input).map_err(|e| e.to_string())?;
                    let Evidence::Irreducible { k, retracted, closed_form_holds, .. } = &cert.evidence else {
                        return Err(format!("unexpected evidence {:?}", cert.evidence));
                    };
                    let want = v.scaled(&Q::from_int((m + n) as i64 * x));
                    ensure(*k == m + n && *retracted == want && *closed_form_holds, || {
                        format!("m = {m}, n = {n}, # = {x}: got k = {k}, {retracted}, want {want}")
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} translate configurations"))
}

fn dense_row(cols: &std::collections::BTreeMap<(Vec<i64>, Vec<i64>), usize>, v: &WVector) -> Vec<Rational64> {
    let mut row = vec![Rational64::from_integer(0); cols.len()];
    for (p, q) in v.iter() {
        row[cols[&(p.a().coords().to_vec(), p.b().coords().to_vec())]] = to_r64(q);
    }
    row
}

fn independence_and_antisymmetry() -> Outcome {
    let w = Window::new(1, 3);
    let cols = dense_columns(w);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut full, mut deficient, mut anti, mut flagged) = (0, 0, 0, 0);
    for i in 0..150 {
        let size = rng.gen_range(1..=4);
        let mut fam: Vec<WVector> = (0..size).map(|_| random_vector(&mut rng, 1)).collect();
        if i % 3 == 0 {
            let j = rng.gen_range(0..size);
            fam.push(fam[j].scaled(&Q::new(rng.gen_range(1..=5), rng.gen_range(1..=3))));
        }
        let rows: Vec<Vec<Rational64>> = fam.iter().map(|v| dense_row(&cols, &dense_reduce(w, v))).collect();
        let oracle_rank = dense_rank(rows, cols.len());
        let cert = independence_certificate(&fam, w).map_err(|e| e.to_string())?;
        let want = if oracle_rank == fam.len() { Verdict::Certified } else { Verdict::NotCertified };
        ensure(cert.verdict == want && cert.verify(), || {
            format!("family {i}: {:?}, oracle rank {oracle_rank}", cert.verdict)
        })?;
        if i % 3 == 0 {
            ensure(cert.verdict == Verdict::NotCertified, || format!("family {i}: proportional family certified"))?;
        }
        if want == Verdict::Certified {
            full += 1
        } else {
            deficient += 1
        }

        let built: Vec<WVector> = fam.iter().map(|v| v - &iota_star(v)).collect();
        ensure(antisymmetry_check(&built, w).map_err(|e| e.to_string())?.verdict == Verdict::Certified, || {
            format!("family {i}: v - i*v not certified antisymmetric")
        })?;
        anti += 1;
        let raw = antisymmetry_check(&fam, w).map_err(|e| e.to_string())?;
        let Evidence::Antisymmetry { failures, .. } = &raw.evidence else { unreachable!() };
        for (j, v) in fam.iter().enumerate() {
            let bad = !dense_reduce(w, &(&iota_star(v) + v)).is_zero();
            ensure(bad == failures.iter().any(|f| f.index == j), || format!("family {i}, class {j}: flag mismatch"))?;
            flagged += usize::from(bad);
        }
    }
    Ok(format!(
        "{full} full-rank, {deficient} deficient families; {anti} antisymmetric families; {flagged} violations flagged"
    ))
}

fn rank_growth() -> Outcome {
    let mut seq = Vec::new();
    for n in 2..=6 {
        let w = Window::new(1, n);
        let (sparse, dense) = (quotient_rank(w), dense_quotient_rank(w));
        ensure(sparse == dense, || format!("N = {n}: {sparse} vs dense {dense}"))?;
        seq.push(sparse);
    }
    let report = run_selftest(2, None);
    let emitted: Vec<usize> = report.quotient_ranks.iter().map(|r| r.rank).collect();
    ensure(emitted == seq, || format!("selftest emitted {emitted:?}"))?;
    Ok(format!("N = 2..6: {seq:?}"))
}

fn determinism() -> Outcome {
    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_selftest(3, None).to_json())
    };
    let one = in_pool(1);
    for t in [2, 4, 8] {
        ensure(in_pool(t) == one, || format!("library report differs with {t} threads"))?;
    }
    let bin = env!("CARGO_BIN_EXE_wcalc");
    let cli = |threads: &str| {
        let out = Command::new(bin).args(["selftest", "--window", "2"]).env("WCALC_THREADS", threads).output().unwrap();
        (out.status.code(), out.stdout)
    };
    let a = cli("1");
    ensure(a.0 == Some(0), || format!("selftest exit {:?}", a.0))?;
    ensure(cli("4") == a, || "cli report differs between 1 and 4 threads".into())?;
    Ok(format!("{} identical bytes across 1/2/4/8 threads", one.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("coface/pairing consistency", coface_consistency, 10),
        ("W codomain isomorphism", bk_isomorphism, 60),
        ("retraction identity", retraction_identity, 5),
        ("solver/oracle agreement", solver_agreement, 120),
        ("obstruction coefficients -c_k", obstruction_coefficients, 60),
        ("covering-translate identity", covering_translates, 5),
        ("independence and antisymmetry", independence_and_antisymmetry, 5),
        ("quotient-rank growth", rank_growth, 120),
        ("determinism", determinism, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|d| {
            if took <= Duration::from_secs(*budget) {
                Ok(d)
            } else {
                Err(format!("{d}; took {:.2} s, budget {budget} s", took.as_secs_f64()))
            }
        });
        match result {
            Ok(d) => println!("criterion {} {name}: PASS ({:.2} s) {d}", i + 1, took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({:.2} s) {e}", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
