use crate::arith::{Mat, PrimeField, Subspace};
use crate::error::{Error, Result};

/// Gaussian binomial `[n choose d]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(q: u64, n: usize, d: usize) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let mut table = vec![vec![0u128; d + 1]; n + 1];
    for row in table.iter_mut() {
        row[0] = 1;
    }
    for m in 1..=n {
        for k in 1..=d.min(m) {
            // [m, k] = [m-1, k-1] + q^k [m-1, k]
            let qk = q.checked_pow(k as u32).unwrap_or(u128::MAX);
            table[m][k] = table[m - 1][k - 1].saturating_add(qk.saturating_mul(table[m - 1][k]));
        }
    }
    table[n][d]
}

/// Number of subspaces of `F_q^n` of dimension `d`, or of all dimensions.
pub fn subspace_count(q: u64, n: usize, d: Option<usize>) -> u128 {
    match d {
        Some(d) => gaussian_binomial(q, n, d),
        None => (0..=n).map(|d| gaussian_binomial(q, n, d)).fold(0u128, |a, b| a.saturating_add(b)),
    }
}

/// Every subspace of `F_p^n` (of one dimension, or all dimensions in
/// increasing order), each exactly once, as its echelon basis.
///
/// Within a dimension, pivot patterns come in lexicographic order and the
/// free entries count up in base `p`, so the order is deterministic.
pub fn enumerate_subspaces(field: &PrimeField, n: usize, dim: Option<usize>, cap: u128) -> Result<SubspaceIter> {
    let count = subspace_count(field.prime(), n, dim);
    if count > cap {
        return Err(Error::EnumerationTooLarge { what: "subspaces", count, cap });
    }
    let dims = match dim {
        Some(d) if d <= n => vec![d],
        Some(_) => vec![],
        None => (0..=n).collect(),
    };
    Ok(SubspaceIter { p: field.prime(), n, dims, dim_idx: 0, state: None })
}

struct PatternState {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<u64>,
}

pub struct SubspaceIter {
    p: u64,
    n: usize,
    dims: Vec<usize>,
    dim_idx: usize,
    state: Option<PatternState>,
}

impl SubspaceIter {
    fn pattern(&self, pivots: Vec<usize>) -> PatternState {
        let free = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = &pivots;
                (pc + 1..self.n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect::<Vec<_>>();
        let digits = vec![0; free.len()];
        PatternState { pivots, free, digits }
    }

    fn build(&self, st: &PatternState) -> Subspace<u64> {
        let d = st.pivots.len();
        let mut m = Mat::filled(d, self.n, 0u64);
        for (r, &pc) in st.pivots.iter().enumerate() {
            m[(r, pc)] = 1;
        }
        for (&(r, c), &v) in st.free.iter().zip(&st.digits) {
            m[(r, c)] = v;
        }
        Subspace::from_rref(m, st.pivots.clone())
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl SubspaceIter {
    /// Base-`p` counter over the free entries, then the next pivot pattern,
    /// then the next dimension.
    fn advance(&mut self, mut st: PatternState) -> Option<PatternState> {
        for digit in st.digits.iter_mut() {
            *digit += 1;
            if *digit < self.p {
                return Some(st);
            }
            *digit = 0;
        }
        if next_combination(&mut st.pivots, self.n) {
            return Some(self.pattern(st.pivots));
        }
        self.dim_idx += 1;
        None
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace<u64>;

    fn next(&mut self) -> Option<Subspace<u64>> {
        let st = match self.state.take() {
            Some(st) => st,
            None => {
                let &d = self.dims.get(self.dim_idx)?;
                self.pattern((0..d).collect())
            }
        };
        let out = self.build(&st);
        self.state = self.advance(st);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_gaussian_binomials() {
        let f2 = PrimeField::new(2);
        assert_eq!(enumerate_subspaces(&f2, 2, None, 1000).unwrap().count(), 5);
        assert_eq!(enumerate_subspaces(&f2, 4, Some(2), 1000).unwrap().count(), 35);
        assert_eq!(gaussian_binomial(2, 4, 2), 35);
        let f3 = PrimeField::new(3);
        assert_eq!(enumerate_subspaces(&f3, 1, None, 1000).unwrap().count(), 2);
        assert_eq!(enumerate_subspaces(&f3, 4, None, 1000).unwrap().count(), 212);
    }

    #[test]
    fn each_subspace_once() {
        let f = PrimeField::new(3);
        let all: Vec<_> = enumerate_subspaces(&f, 3, None, 1000).unwrap().collect();
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            assert_eq!(&Subspace::span(&f, s.basis()), s, "enumerated basis is canonical");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = PrimeField::new(2);
        assert!(matches!(
            enumerate_subspaces(&f, 4, None, 10),
            Err(Error::EnumerationTooLarge { count: 67, .. })
        ));
    }
}
