//! Random problem instances for property tests and fuzzing.

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::{rank, Mat, Rationals, Ring, Subspace};
use crate::filtration::MultiFiltration;
use crate::lattice::Lattice;
use crate::{KSubspace, QMat};

/// Shape limits for random instances.
#[derive(Clone, Debug)]
pub struct InstanceParams {
    pub primes: Vec<u64>,
    pub min_n: usize,
    pub max_n: usize,
    pub min_chains: usize,
    pub max_chains: usize,
    /// Nonzero proper steps per chain.
    pub max_len: usize,
    /// Entries are drawn from `[-entry_bound, entry_bound]`.
    pub entry_bound: i64,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams { primes: vec![2, 3], min_n: 2, max_n: 4, min_chains: 1, max_chains: 3, max_len: 3, entry_bound: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub p: u64,
    pub fil: MultiFiltration<BigRational>,
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> QMat {
    let q = Rationals::new();
    Mat::from_fn(rows, cols, |_, _| q.from_int(rng.gen_range(-bound..=bound)))
}

/// A chain `V ⊋ Fil^1 ⊋ ... ⊋ Fil^l ⊋ 0` spanned by prefixes of the rows of a
/// random integer matrix; `None` if the rows came out dependent.
pub fn random_chain<R: Rng>(rng: &mut R, n: usize, max_len: usize, bound: i64) -> Option<Vec<KSubspace>> {
    let q = Rationals::new();
    let len = rng.gen_range(1..=max_len.min(n - 1).max(1));
    let mut dims: Vec<usize> = (1..n).collect();
    dims.shuffle(rng);
    let mut dims: Vec<usize> = dims.into_iter().take(len).collect();
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let rows = random_int_matrix(rng, dims[0], n, bound);
    if rank(&q, &rows) < dims[0] {
        return None;
    }
    let steps = dims
        .iter()
        .map(|&d| Subspace::span(&q, &rows.select_rows(&(0..d).collect::<Vec<_>>())))
        .collect();
    Some(steps)
}

pub fn random_filtration<R: Rng>(rng: &mut R, n: usize, s: usize, max_len: usize, bound: i64) -> MultiFiltration<BigRational> {
    let q = Rationals::new();
    let mut chains = Vec::with_capacity(s);
    while chains.len() < s {
        if let Some(c) = random_chain(rng, n, max_len, bound) {
            chains.push(c);
        }
    }
    MultiFiltration::from_steps(&q, n, chains).expect("random chains are valid")
}

pub fn random_instance<R: Rng>(rng: &mut R, params: &InstanceParams) -> Instance {
    let p = *params.primes.choose(rng).expect("at least one prime");
    let n = rng.gen_range(params.min_n..=params.max_n);
    let s = rng.gen_range(params.min_chains..=params.max_chains);
    Instance { p, fil: random_filtration(rng, n, s, params.max_len, params.entry_bound) }
}

/// A random lattice whose basis vectors have integer entries, some of them
/// divided by `p`.
pub fn random_lattice<R: Rng>(rng: &mut R, n: usize, p: u64, bound: i64) -> Lattice {
    let q = Rationals::new();
    loop {
        let mut basis = random_int_matrix(rng, n, n, bound);
        for c in 0..n {
            let e: i64 = rng.gen_range(-1..=1);
            let scale = BigRational::from_integer(p.into()).pow(e as i32);
            for r in 0..n {
                let v = q.mul(&basis[(r, c)], &scale);
                basis[(r, c)] = v;
            }
        }
        if let Ok(l) = Lattice::new(basis) {
            return l;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chains_are_strictly_decreasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, &InstanceParams::default());
            for chain in inst.fil.chains() {
                for w in chain.windows(2) {
                    assert!(w[1].dim() < w[0].dim());
                }
            }
        }
    }
}
