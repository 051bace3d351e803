//! Points of products of flag varieties over `F_q` and the semistable count.

use crate::arith::{PrimeField, Subspace};
use crate::error::{Error, Result};
use crate::filtration::{enumerate_subspaces, gaussian_binomial, is_semistable, MultiFiltration};
use crate::SubspaceF;

/// `(s, n; l_1, ..., l_s)`: each `l_i` is a non-decreasing step function
/// `N -> {0..n}` with `l_i(0) = 0` and eventual value `n`, stored as its jump
/// table `(j, l_i(j))` in increasing `j`. A point of this type has
/// `dim Fil_i^j = n - l_i(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDatum {
    pub s: usize,
    pub n: usize,
    pub jumps: Vec<Vec<(usize, usize)>>,
}

impl TypeDatum {
    pub fn new(s: usize, n: usize, jumps: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidType(msg));
        if jumps.len() != s {
            return bad(format!("expected {s} step tables, found {}", jumps.len()));
        }
        for (i, table) in jumps.iter().enumerate() {
            let mut prev_j = None;
            let mut prev_v = 0;
            for &(j, v) in table {
                if prev_j.is_some_and(|pj| j <= pj) {
                    return bad(format!("table {i}: positions must increase"));
                }
                if v < prev_v || v > n {
                    return bad(format!("table {i}: values must be non-decreasing and at most {n}"));
                }
                if j == 0 && v != 0 {
                    return bad(format!("table {i}: l(0) must be 0"));
                }
                prev_j = Some(j);
                prev_v = v;
            }
            if prev_v != n {
                return bad(format!("table {i}: eventual value must be {n}"));
            }
        }
        Ok(TypeDatum { s, n, jumps })
    }

    /// Every chain a full flag: `l_i(j) = min(j, n)`.
    pub fn full_flags(s: usize, n: usize) -> Self {
        TypeDatum { s, n, jumps: vec![(1..=n).map(|j| (j, j)).collect(); s] }
    }

    /// Every chain jumps from `0` to `n` at once.
    pub fn trivial(s: usize, n: usize) -> Self {
        TypeDatum { s, n, jumps: vec![vec![(1, n)]; s] }
    }

    /// `l_i(j)`.
    pub fn value(&self, i: usize, j: usize) -> usize {
        self.jumps[i].iter().take_while(|&&(pos, _)| pos <= j).last().map_or(0, |&(_, v)| v)
    }

    /// `dim Fil_i^j` for `j = 0 ..= last jump`.
    pub fn dims(&self, i: usize) -> Vec<usize> {
        let last = self.jumps[i].last().map_or(0, |&(j, _)| j);
        (0..=last).map(|j| self.n - self.value(i, j)).collect()
    }

    /// `|∏_i Fl(n; l_i)(F_q)|`, saturating.
    pub fn point_count(&self, q: u64) -> u128 {
        (0..self.s)
            .map(|i| {
                self.dims(i)
                    .windows(2)
                    .map(|w| gaussian_binomial(q, w[0], w[1]))
                    .fold(1u128, |a, b| a.saturating_mul(b))
            })
            .fold(1u128, |a, b| a.saturating_mul(b))
    }
}

/// One `F_q`-point: a chain of subspaces of the prescribed dimensions for
/// each `l_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagPoint {
    pub chains: Vec<Vec<SubspaceF>>,
}

impl FlagPoint {
    pub fn filtration(&self, field: &PrimeField, n: usize) -> MultiFiltration<u64> {
        MultiFiltration::new(field, n, self.chains.clone()).expect("flag points are valid filtrations")
    }
}

/// Every chain with the given dimension sequence (starting at `n`).
fn flags_with_dims(field: &PrimeField, n: usize, dims: &[usize]) -> Vec<Vec<SubspaceF>> {
    let mut partial: Vec<Vec<SubspaceF>> = vec![vec![Subspace::full(field, n)]];
    for &d in &dims[1..] {
        let mut next = Vec::new();
        for chain in partial {
            let w = chain.last().expect("chains start with V").clone();
            let inner = enumerate_subspaces(field, w.dim(), Some(d), u128::MAX).expect("uncapped");
            for sub in inner {
                let image = if sub.is_zero() {
                    Subspace::zero(field, n)
                } else {
                    Subspace::span(field, &sub.basis().mul(field, w.basis()))
                };
                let mut c = chain.clone();
                c.push(image);
                next.push(c);
            }
        }
        partial = next;
    }
    partial
}

/// All points of `∏_i Fl(n; l_i)(F_q)`, each once.
pub fn enumerate_flags(field: &PrimeField, t: &TypeDatum, cap: u128) -> Result<Vec<FlagPoint>> {
    let count = t.point_count(field.prime());
    if count > cap {
        return Err(Error::EnumerationTooLarge { what: "flag points", count, cap });
    }
    let per_chain: Vec<Vec<Vec<SubspaceF>>> = (0..t.s).map(|i| flags_with_dims(field, t.n, &t.dims(i))).collect();
    let mut points = vec![FlagPoint { chains: Vec::new() }];
    for options in &per_chain {
        points = points
            .into_iter()
            .flat_map(|pt| {
                options.iter().map(move |c| {
                    let mut chains = pt.chains.clone();
                    chains.push(c.clone());
                    FlagPoint { chains }
                })
            })
            .collect();
    }
    debug_assert_eq!(points.len() as u128, count);
    Ok(points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagCount {
    pub total: u128,
    pub semistable: u128,
}

pub fn count_semistable(field: &PrimeField, t: &TypeDatum, cap: u128) -> Result<FlagCount> {
    let points = enumerate_flags(field, t, cap)?;
    let mut semistable = 0u128;
    for pt in &points {
        if is_semistable(field, &pt.filtration(field, t.n), cap)?.semistable {
            semistable += 1;
        }
    }
    Ok(FlagCount { total: points.len() as u128, semistable })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u128 = 1_000_000;

    #[test]
    fn point_counts() {
        let f2 = PrimeField::new(2);
        assert_eq!(enumerate_flags(&f2, &TypeDatum::full_flags(1, 2), CAP).unwrap().len(), 3);
        assert_eq!(enumerate_flags(&f2, &TypeDatum::full_flags(2, 2), CAP).unwrap().len(), 9);
        assert_eq!(enumerate_flags(&f2, &TypeDatum::trivial(3, 3), CAP).unwrap().len(), 1);
        let f3 = PrimeField::new(3);
        // Full flags in F_3^3: (1 + 3 + 9)(1 + 3).
        assert_eq!(enumerate_flags(&f3, &TypeDatum::full_flags(1, 3), CAP).unwrap().len(), 52);
    }

    #[test]
    fn semistable_counts_for_two_full_flags_in_the_plane() {
        for (q, expect) in [(2, 6), (3, 12), (5, 30)] {
            let f = PrimeField::new(q);
            let c = count_semistable(&f, &TypeDatum::full_flags(2, 2), CAP).unwrap();
            assert_eq!(c, FlagCount { total: (q as u128 + 1).pow(2), semistable: expect });
        }
    }

    #[test]
    fn a_single_full_flag_is_never_semistable() {
        // The line Fil^1 has slope 1 > 1/2.
        for q in [2, 3, 5] {
            let c = count_semistable(&PrimeField::new(q), &TypeDatum::full_flags(1, 2), CAP).unwrap();
            assert_eq!(c.semistable, 0);
        }
    }

    #[test]
    fn type_validation() {
        assert!(TypeDatum::new(1, 2, vec![vec![(1, 1), (2, 2)]]).is_ok());
        assert!(TypeDatum::new(1, 2, vec![vec![(0, 1), (2, 2)]]).is_err());
        assert!(TypeDatum::new(1, 2, vec![vec![(1, 2), (2, 1)]]).is_err());
        assert!(TypeDatum::new(1, 2, vec![vec![(1, 1)]]).is_err());
        assert!(TypeDatum::new(2, 2, vec![vec![(1, 2)]]).is_err());
        let t = TypeDatum::new(1, 3, vec![vec![(2, 1), (4, 3)]]).unwrap();
        assert_eq!(t.dims(0), vec![3, 3, 2, 2, 0]);
    }
}
