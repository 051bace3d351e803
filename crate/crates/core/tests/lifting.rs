use langton_core::arith::{ChainRing, Dvr, Mat, PrimeField};
use langton_core::filtration::max_destabilizer;
use langton_core::gen::{random_filtration, random_lattice};
use langton_core::langton::{check_lift, is_liftable, lift_at, max_lift_order, LiftOrder, ReductionSequence};
use langton_core::lattice::{residue_filtration, Lattice};
use langton_core::ChainMat;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every graph `X ≡ X̄ (mod p)` over `Z/p^m`, checked one by one.
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

fn unstable_sequences(seed: u64, count: usize, p: u64, max_n: usize) -> Vec<ReductionSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dvr = Dvr::new(p).unwrap();
    let field = PrimeField::new(p);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(2..=max_n);
        let s = rng.gen_range(2..=3);
        let fil = random_filtration(&mut rng, n, s, 2, 4);
        let lattice = if rng.gen_bool(0.5) { Lattice::standard(n) } else { random_lattice(&mut rng, n, p, 3) };
        let red = residue_filtration(&dvr, &lattice, &fil).unwrap();
        let d = max_destabilizer(&field, &red, 1_000_000).unwrap();
        if d.dim == n {
            continue;
        }
        out.push(ReductionSequence::new(&dvr, &lattice, &fil, d.subspace).unwrap());
    }
    out
}

#[test]
fn decision_matches_exhaustive_search() {
    for seq in unstable_sequences(11, 120, 2, 3) {
        for m in 1..=4 {
            let brute = exhaustive_liftable(&seq, m);
            let decided = lift_at(&seq, m, 1_000_000).unwrap().is_some();
            assert_eq!(brute, decided, "level {m}");
            let pruned = is_liftable(&seq, m, 1_000_000).unwrap().is_some();
            assert_eq!(brute, pruned, "level {m}");
        }
    }
}

#[test]
fn max_lift_order_is_consistent() {
    for seq in unstable_sequences(5, 60, 3, 3) {
        let (order, w) = max_lift_order(&seq, 16, 1_000_000).unwrap();
        assert_eq!(check_lift(&seq, &w.b_tilde, w.level), Ok(()));
        if let LiftOrder::Finite(m) = order {
            assert_eq!(w.level, m);
            assert!(lift_at(&seq, m + 1, 1_000_000).unwrap().is_none());
            assert!(is_liftable(&seq, m + 1, 10_000_000).unwrap().is_none());
        }
    }
}

