//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p langton-cli --test acceptance`.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use langton_cli::{cmd_fuzz, cmd_run, cmd_verify, CliError, ProblemFile, TraceFile};
use langton_core::arith::{
    determinant, smith_chain, ChainRing, Dvr, Mat, PrimeField, Rationals, Ring, Subspace, Valuation,
};
use langton_core::filtration::{is_semistable, max_destabilizer, MultiFiltration};
use langton_core::flags::{count_semistable, TypeDatum};
use langton_core::gen::{random_filtration, random_lattice, InstanceParams};
use langton_core::langton::{
    check_generic_fiber, check_lift, is_liftable, langton_run, max_lift_order, quotient_decomposition, Caps,
    GenericVerdict, LiftOrder, ReductionSequence, VerifyReason,
};
use langton_core::lattice::{residue_filtration, Lattice};
use langton_core::{ChainMat, FpMat, KSubspace, SubspaceF};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u128 = 1_000_000;
/// Runtime limit for the worked instances and the flag counts.
const FAST: Duration = Duration::from_secs(1);

const INSTANCE_A: &str = r#"{"p": 2, "n": 2, "chains": [[[["1", "0"]]], [[["1", "2"]]]]}"#;
const INSTANCE_B: &str = r#"{"p": 2, "n": 2, "chains": [[[["1", "0"]]], [[["1", "4"]]]]}"#;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn diag_lattice(a: i64, b: i64) -> Lattice {
    let q = |v: i64| BigRational::from_integer(v.into());
    Lattice::from_vectors(2, vec![vec![q(a), q(0)], vec![q(0), q(b)]]).unwrap()
}

fn worked_instance(text: &str, m: u32, second: i64) -> Outcome {
    let start = Instant::now();
    let file = ProblemFile::from_json(text).unwrap();
    let trace = cmd_run(&file).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let problem = file.parse().unwrap();
    let dvr = &problem.dvr;
    ensure(trace.steps.len() == 1, || format!("{} steps, expected 1", trace.steps.len()))?;
    ensure(trace.steps[0].lift_order == m, || format!("m = {}, expected {m}", trace.steps[0].lift_order))?;
    let last = trace.to_trace().unwrap().final_lattice;
    let expected = diag_lattice(1, second);
    ensure(last.contains(dvr, &expected) && expected.contains(dvr, &last), || "final lattice differs".into())?;
    let field = PrimeField::new(dvr.prime());
    let red = residue_filtration(dvr, &last, &problem.fil).unwrap();
    ensure(is_semistable(&field, &red, CAP).unwrap().semistable, || "final reduction unstable".into())?;
    ensure(elapsed < FAST, || format!("took {elapsed:?}"))?;
    Ok(format!("1 step, m = {m}, final <e1, {second}e2>, {elapsed:.2?}"))
}

fn criterion_1() -> Outcome {
    worked_instance(INSTANCE_A, 1, 2)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let problem = ProblemFile::from_json(INSTANCE_B).unwrap().parse().unwrap();
    let field = PrimeField::new(2);
    let red = residue_filtration(&problem.dvr, &problem.lattice, &problem.fil).unwrap();
    let d = max_destabilizer(&field, &red, CAP).unwrap();
    let seq = ReductionSequence::new(&problem.dvr, &problem.lattice, &problem.fil, d.subspace).unwrap();
    let (order, _) = max_lift_order(&seq, 64, CAP).unwrap();
    ensure(order == LiftOrder::Finite(2), || format!("max_lift_order returned {order:?}"))?;
    ensure(is_liftable(&seq, 2, CAP).unwrap().is_some(), || "brute force finds no lift at 2".into())?;
    ensure(is_liftable(&seq, 3, CAP).unwrap().is_none(), || "brute force finds a lift at 3".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < FAST, || format!("took {elapsed:?}"))?;
    worked_instance(INSTANCE_B, 2, 4).map(|s| format!("{s}; lifts at 2, not at 3"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let params = InstanceParams::default();
    let report = cmd_fuzz(2024, 200, &params).map_err(|e| e.to_string())?;
    ensure(report.failures.is_empty(), || report.to_string())?;
    ensure(report.instances >= 200, || format!("only {} instances", report.instances))?;
    Ok(format!("{report} in {:.1?}", start.elapsed()))
}

fn full_space(n: usize) -> KSubspace {
    Subspace::full(&Rationals::new(), n)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let caps = Caps::default();
    let q = Rationals::new();
    let mut semistable = 0;
    while semistable < 100 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(0..=3);
        let fil = MultiFiltration::from_steps(&q, n, vec![vec![full_space(n); k]]).unwrap();
        ensure(check_generic_fiber(&fil, p, 2, 50, CAP).unwrap().is_semistable(), || "generic fiber".into())?;
        let dvr = Dvr::new(p).unwrap();
        let start = random_lattice(&mut rng, n, p, 4);
        let red = residue_filtration(&dvr, &start, &fil).unwrap();
        ensure(is_semistable(&PrimeField::new(p), &red, CAP).unwrap().semistable, || "unstable reduction".into())?;
        let (_, trace) = langton_run(&dvr, &fil, Some(&start), &caps).unwrap();
        ensure(trace.steps.is_empty(), || "semistable reduction was modified".into())?;
        semistable += 1;
    }
    let mut unbounded = 0;
    while unbounded < 100 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(2..=4);
        let fil = random_filtration(&mut rng, n, 1, 3, 4);
        let dvr = Dvr::new(p).unwrap();
        let field = PrimeField::new(p);
        let start = random_lattice(&mut rng, n, p, 4);
        let red = residue_filtration(&dvr, &start, &fil).unwrap();
        let d = max_destabilizer(&field, &red, CAP).unwrap();
        if d.dim == n {
            continue;
        }
        let seq = ReductionSequence::new(&dvr, &start, &fil, d.subspace).unwrap();
        let (order, w) = max_lift_order(&seq, caps.lift_cap, CAP).unwrap();
        ensure(order == LiftOrder::Unbounded, || format!("single chain stopped at {order:?}"))?;
        ensure(check_lift(&seq, &w.b_tilde, w.level).is_ok(), || "invalid witness".into())?;
        unbounded += 1;
    }
    Ok(format!("{semistable} semistable reductions left unchanged, {unbounded} unstable reductions lift to level 64"))
}

/// Every graph `X ≡ X̄ (mod p)` over `Z/p^m`, checked directly.
fn exhaustive_liftable(seq: &ReductionSequence, m: u32) -> bool {
    let ring = ChainRing::new(seq.prime(), m);
    let (b, g) = (seq.b(), seq.g());
    let xbar = seq.residue_graph();
    let p = BigInt::from(seq.prime());
    let corrections = ring.modulus() / &p;
    let k = b * g;
    let mut digits = vec![BigInt::from(0); k];
    loop {
        let x: ChainMat = Mat::from_fn(b, g, |a, c| ring.reduce(&(BigInt::from(xbar[(a, c)]) + &p * &digits[a * g + c])));
        if check_lift(seq, &seq.graph(&ring, &x), m).is_ok() {
            return true;
        }
        let mut t = 0;
        loop {
            if t == k {
                return false;
            }
            digits[t] += 1;
            if digits[t] < corrections {
                break;
            }
            digits[t] = BigInt::from(0);
            t += 1;
        }
    }
}

fn criterion_5() -> Outcome {
    const TOP: u32 = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dvr = Dvr::new(2).unwrap();
    let field = PrimeField::new(2);
    let (mut corpus, mut above_one) = (0, 0);
    while corpus < 80 {
        let n = rng.gen_range(2..=3);
        let s = rng.gen_range(1..=3);
        let fil = random_filtration(&mut rng, n, s, 2, 4);
        let lattice = random_lattice(&mut rng, n, 2, 3);
        let red = residue_filtration(&dvr, &lattice, &fil).unwrap();
        let d = max_destabilizer(&field, &red, CAP).unwrap();
        if d.dim == n {
            continue;
        }
        let seq = ReductionSequence::new(&dvr, &lattice, &fil, d.subspace).unwrap();
        let brute = (1..=TOP).take_while(|&m| exhaustive_liftable(&seq, m)).last().unwrap_or(0);
        let (order, _) = max_lift_order(&seq, TOP, CAP).unwrap();
        let solved = match order {
            LiftOrder::Finite(m) => m,
            LiftOrder::Unbounded => TOP,
        };
        ensure(solved == brute, || format!("instance {corpus}: solver {solved}, brute force {brute}"))?;
        corpus += 1;
        above_one += usize::from(brute > 1);
    }
    Ok(format!("{corpus} instances agree up to level {TOP} ({above_one} with m > 1)"))
}

fn random_fp_matrix(rng: &mut ChaCha8Rng, p: u64, rows: usize, cols: usize) -> FpMat {
    Mat::from_fn(rows, cols, |_, _| rng.gen_range(0..p))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..500 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let f = PrimeField::new(p);
        let n = rng.gen_range(2..=4);
        let s = rng.gen_range(1..=3);
        let fil = random_filtration(&mut rng, n, s, 3, 4);
        let x = residue_filtration(&Dvr::new(p).unwrap(), &Lattice::standard(n), &fil).unwrap();
        let d = rng.gen_range(0..=n);
        let w: SubspaceF = Subspace::span(&f, &random_fp_matrix(&mut rng, p, d, n));
        let g = loop {
            let g = random_fp_matrix(&mut rng, p, n, n);
            if !f.is_zero(&determinant(&f, &g)) {
                break g;
            }
        };
        let sub = x.induced_sub(&f, &w).unwrap();
        let quot = x.induced_quotient(&f, &w).unwrap();
        ensure(x.weight() == sub.weight() + quot.weight(), || format!("triple {t}: weight not additive"))?;
        let y = x.transform(&f, &g);
        let (dx, dy) = (max_destabilizer(&f, &x, CAP).unwrap(), max_destabilizer(&f, &y, CAP).unwrap());
        ensure((dx.slope, dx.dim) == (dy.slope, dy.dim), || format!("triple {t}: destabilizer changed"))?;
        let (sx, sy) = (is_semistable(&f, &x, CAP).unwrap(), is_semistable(&f, &y, CAP).unwrap());
        ensure(sx.semistable == sy.semistable, || format!("triple {t}: verdict changed"))?;
        let (ws, wy) = (x.weight_of(&f, &w), y.weight_of(&f, &w.map(&f, &g)));
        ensure(ws == wy, || format!("triple {t}: subspace weight changed"))?;
    }
    Ok("500 triples".into())
}

fn random_chain_matrix(rng: &mut ChaCha8Rng, ring: &ChainRing, rows: usize, cols: usize) -> ChainMat {
    let bound = ring.modulus().clone();
    Mat::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(0..u64::try_from(&bound).unwrap())))
}

/// `H₁ ∩ pH` from an independent description: `c H₁ ≡ 0 (mod p)` iff `c`
/// reduces into the left kernel of `H̄₁`, so lifts of an `F_p` kernel basis
/// together with `p H₁` generate it.
fn h1_in_ph(ring: &ChainRing, field: &PrimeField, h1: &ChainMat) -> ChainMat {
    let p = ring.prime();
    let bar: FpMat = h1.map(|v| u64::try_from(v % BigInt::from(p)).unwrap());
    let kernel: SubspaceF = Subspace::span(field, &left_kernel_fp(field, &bar));
    let mut out = Mat::zeros(ring, 0, h1.ncols());
    for c in kernel.basis().rows() {
        let c: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
        out.push_row(h1.vec_mul(ring, &c));
    }
    let pb = ring.prime_power(1);
    out.vstack(&h1.scale(ring, &pb))
}

/// Basis of `{c : c A = 0}` over `F_p` by brute force over all `c`.
fn left_kernel_fp(field: &PrimeField, a: &FpMat) -> FpMat {
    let p = field.prime();
    let rows = a.nrows();
    let mut out = Mat::from_rows(rows, Vec::new());
    let mut c = vec![0u64; rows];
    loop {
        let zero = (0..a.ncols()).all(|j| (0..rows).map(|i| c[i] * a[(i, j)]).sum::<u64>() % p == 0);
        if zero && c.iter().any(|&v| v != 0) {
            out.push_row(c.clone());
        }
        let mut t = 0;
        loop {
            if t == rows {
                return out;
            }
            c[t] += 1;
            if c[t] < p {
                break;
            }
            c[t] = 0;
            t += 1;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut shapes = std::collections::BTreeSet::new();
    for t in 0..150 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let m = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=4);
        let ring = ChainRing::new(p, m);
        let field = PrimeField::new(p);
        let rows = rng.gen_range(0..=k + 1);
        let h1 = random_chain_matrix(&mut rng, &ring, rows, k);
        let r = rng.gen_range(0..=k);
        let h2 = loop {
            let u = random_chain_matrix(&mut rng, &ring, k, k);
            let bar: FpMat = u.map(|v| u64::try_from(v % BigInt::from(p)).unwrap());
            if !field.is_zero(&determinant(&field, &bar)) {
                break u.select_rows(&(0..r).collect::<Vec<_>>());
            }
        };
        let qd = quotient_decomposition(&ring, k, &h1, &h2).map_err(|e| format!("pair {t}: {e}"))?;
        let pb = ring.prime_power(1);
        let assembled = h2.scale(&ring, &pb).vstack(&h1_in_ph(&ring, &field, &h1));
        let mut oracle: Vec<u32> = smith_chain(&ring, &assembled).iter().map(|v: &Valuation| v.capped(m)).collect();
        oracle.resize(k, m);
        oracle.sort_unstable();
        ensure(qd.sorted_exponents() == oracle, || format!("pair {t}: {:?} vs {oracle:?}", qd.sorted_exponents()))?;
        ensure(qd.exponents.iter().all(|&a| (1..=m).contains(&a)), || format!("pair {t}: exponent out of range"))?;
        shapes.insert(qd.sorted_exponents());
    }
    Ok(format!("150 pairs, {} distinct exponent multisets", shapes.len()))
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    for (q, expected) in [(2u64, 6u128), (3, 12), (5, 30)] {
        let start = Instant::now();
        let c = count_semistable(&PrimeField::new(q), &TypeDatum::full_flags(2, 2), CAP).unwrap();
        let elapsed = start.elapsed();
        ensure(c.semistable == expected, || format!("q = {q}: {} semistable, expected {expected}", c.semistable))?;
        ensure(c.total == (q as u128 + 1).pow(2), || format!("q = {q}: {} points", c.total))?;
        ensure(elapsed < FAST, || format!("q = {q} took {elapsed:?}"))?;
        let single = count_semistable(&PrimeField::new(q), &TypeDatum::full_flags(1, 2), CAP).unwrap();
        ensure(single.total == q as u128 + 1 && single.semistable == 0, || format!("q = {q}: single flag {single:?}"))?;
        lines.push(format!("q={q}: {expected} in {elapsed:.2?}"));
    }
    Ok(format!("{}; single full flag 0 of q+1", lines.join(", ")))
}

fn rejected(file: &ProblemFile, trace: &TraceFile) -> Option<VerifyReason> {
    match cmd_verify(file, trace) {
        Err(CliError::Verify(f)) => Some(f.reason),
        _ => None,
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut accepted = 0;
    for text in [INSTANCE_A, INSTANCE_B] {
        let file = ProblemFile::from_json(text).unwrap();
        cmd_verify(&file, &cmd_run(&file).unwrap()).map_err(|e| e.to_string())?;
        accepted += 1;
    }
    while accepted < 60 {
        let p = if rng.gen_bool(0.5) { 2 } else { 3 };
        let n = rng.gen_range(2..=4);
        let s = rng.gen_range(1..=3);
        let fil = random_filtration(&mut rng, n, s, 3, 4);
        if !matches!(check_generic_fiber(&fil, p, 4, 500, CAP).unwrap(), GenericVerdict::Semistable { .. }) {
            continue;
        }
        let lattice = random_lattice(&mut rng, n, p, 3);
        let file = ProblemFile::from_filtration(p, &fil, Some(&lattice));
        let trace = cmd_run(&file).map_err(|e| e.to_string())?;
        cmd_verify(&file, &trace).map_err(|e| format!("trace {accepted} rejected: {e}"))?;
        accepted += 1;
    }

    let file_b = ProblemFile::from_json(INSTANCE_B).unwrap();
    let trace_b = cmd_run(&file_b).unwrap();
    let mut wrong_m = trace_b.clone();
    wrong_m.steps[0].lift_order = 1;
    let reason = rejected(&file_b, &wrong_m);
    ensure(reason == Some(VerifyReason::LiftableAtNext), || format!("wrong m: {reason:?}"))?;

    let file_a = ProblemFile::from_json(INSTANCE_A).unwrap();
    let trace_a = cmd_run(&file_a).unwrap();
    let mut wrong_d = trace_a.clone();
    wrong_d.steps[0].destabilizer = vec![vec![0, 1]];
    let reason = rejected(&file_a, &wrong_d);
    ensure(reason == Some(VerifyReason::DestabilizerNotOptimal), || format!("wrong destabilizer: {reason:?}"))?;

    let mut wrong_final = trace_a;
    wrong_final.final_lattice = vec![vec!["1".into(), "0".into()], vec!["0".into(), "4".into()]];
    let reason = rejected(&file_a, &wrong_final);
    ensure(reason == Some(VerifyReason::FinalLatticeMismatch), || format!("wrong final basis: {reason:?}"))?;
    Ok(format!("{accepted} traces accepted; tampered m, destabilizer and final basis rejected"))
}

/// Written to the stderr handle directly so the report shows without
/// `--nocapture`.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("worked instance A", criterion_1),
        ("worked instance B", criterion_2),
        ("semistable reduction fuzz", criterion_3),
        ("single filtration", criterion_4),
        ("lift order against brute force", criterion_5),
        ("weight additivity and basis invariance", criterion_6),
        ("quotient decomposition", criterion_7),
        ("flag counts", criterion_8),
        ("certificate soundness", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => report(&format!("PASS {} {name}: {detail}", k + 1)),
            Err(why) => {
                report(&format!("FAIL {} {name}: {why}", k + 1));
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
