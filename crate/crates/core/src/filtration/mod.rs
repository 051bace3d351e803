//! Multi-filtered vector spaces, weights and slopes, over any field backend.

mod enumerate;
mod stability;

pub use enumerate::{enumerate_subspaces, gaussian_binomial, subspace_count, SubspaceIter};
pub use stability::{is_semistable, max_destabilizer, Destabilizer, StabilityReport};

use num_rational::Ratio;

use crate::arith::{Field, Mat, Subspace};
use crate::error::{Error, Result};

/// Slopes are exact rationals `weight / dim`.
pub type Slope = Ratio<i64>;

/// A finite-dimensional space `F^n` with finitely many decreasing,
/// exhaustive, separated filtrations indexed by `0, 1, 2, ...`.
///
/// `chains[i][j]` is `Fil_i^j`; `chains[i][0]` is the whole space and the
/// last entry of every chain is zero. Repeated steps are allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiFiltration<E> {
    ambient_dim: usize,
    chains: Vec<Vec<Subspace<E>>>,
}

/// A multi-filtered space is its filtration together with its dimension.
pub type FilteredSpace<E> = MultiFiltration<E>;

impl<E> MultiFiltration<E>
where
    E: Clone + PartialEq + std::fmt::Debug,
{
    /// Validates full chains `Fil^0 ⊇ Fil^1 ⊇ ... ⊇ Fil^l = 0`.
    pub fn new<F: Field<Elem = E>>(field: &F, n: usize, chains: Vec<Vec<Subspace<E>>>) -> Result<Self> {
        for (i, chain) in chains.iter().enumerate() {
            let bad = |msg: &str| Error::InvalidFiltration(format!("chain {i}: {msg}"));
            let (Some(first), Some(last)) = (chain.first(), chain.last()) else {
                return Err(bad("empty chain"));
            };
            if chain.iter().any(|s| s.ambient_dim() != n) {
                return Err(bad("ambient dimension mismatch"));
            }
            if first.dim() != n {
                return Err(bad("not exhaustive (step 0 must be the whole space)"));
            }
            if !last.is_zero() {
                return Err(bad("not separated (last step must be zero)"));
            }
            for (j, w) in chain.windows(2).enumerate() {
                if !w[1].is_subspace_of(field, &w[0]) {
                    return Err(bad(&format!("not decreasing at step {}", j + 1)));
                }
            }
        }
        Ok(MultiFiltration { ambient_dim: n, chains })
    }

    /// Builds chains from the steps `Fil^1, Fil^2, ...`: the whole space is
    /// prepended and a zero step appended when missing.
    pub fn from_steps<F: Field<Elem = E>>(field: &F, n: usize, steps: Vec<Vec<Subspace<E>>>) -> Result<Self> {
        let chains = steps
            .into_iter()
            .map(|s| {
                let mut c = Vec::with_capacity(s.len() + 2);
                c.push(Subspace::full(field, n));
                let ends_zero = s.last().is_some_and(|x| x.is_zero());
                c.extend(s);
                if !ends_zero {
                    c.push(Subspace::zero(field, n));
                }
                c
            })
            .collect();
        Self::new(field, n, chains)
    }

    /// All chains trivial (`V ⊇ 0`).
    pub fn trivial<F: Field<Elem = E>>(field: &F, n: usize, s: usize) -> Self {
        let chain = vec![Subspace::full(field, n), Subspace::zero(field, n)];
        MultiFiltration { ambient_dim: n, chains: vec![chain; s] }
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn chains(&self) -> &[Vec<Subspace<E>>] {
        &self.chains
    }

    pub fn chain(&self, i: usize) -> &[Subspace<E>] {
        &self.chains[i]
    }

    /// The steps `Fil^j` with `j >= 1` paired with their index.
    pub fn positive_steps(&self) -> impl Iterator<Item = (usize, usize, &Subspace<E>)> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().enumerate().skip(1).map(move |(j, s)| (i, j, s)))
    }

    /// Dimension table `dims[i][j] = dim Fil_i^j`.
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.chains.iter().map(|c| c.iter().map(|s| s.dim()).collect()).collect()
    }

    /// `Σ_i Σ_j j · dim(Fil_i^j / Fil_i^{j+1})`, evaluated as
    /// `Σ_i Σ_{j >= 1} dim Fil_i^j`.
    pub fn weight(&self) -> usize {
        self.positive_steps().map(|(_, _, s)| s.dim()).sum()
    }

    /// The graded form of the weight, kept as an independent check.
    pub fn weight_graded(&self) -> usize {
        self.chains
            .iter()
            .map(|c| c.windows(2).enumerate().map(|(j, w)| j * (w[0].dim() - w[1].dim())).sum::<usize>())
            .sum()
    }

    pub fn slope(&self) -> Result<Slope> {
        if self.ambient_dim == 0 {
            return Err(Error::ZeroDimensional);
        }
        Ok(Slope::new(self.weight() as i64, self.ambient_dim as i64))
    }

    /// Weight of the induced filtration on `w`, without materializing it.
    pub fn weight_of<F: Field<Elem = E>>(&self, field: &F, w: &Subspace<E>) -> usize {
        self.positive_steps().map(|(_, _, s)| s.intersection_dim(field, w)).sum()
    }

    pub fn slope_of<F: Field<Elem = E>>(&self, field: &F, w: &Subspace<E>) -> Result<Slope> {
        if w.is_zero() {
            return Err(Error::ZeroDimensional);
        }
        Ok(Slope::new(self.weight_of(field, w) as i64, w.dim() as i64))
    }

    /// Induced filtration `Fil_i^j ∩ W`, written in the coordinates of the
    /// stored basis of `W`.
    pub fn induced_sub<F: Field<Elem = E>>(&self, field: &F, w: &Subspace<E>) -> Result<Self> {
        if w.ambient_dim() != self.ambient_dim {
            return Err(Error::NotContained);
        }
        let d = w.dim();
        let chains = self
            .chains
            .iter()
            .map(|c| {
                c.iter()
                    .map(|s| {
                        let inter = s.intersect(field, w);
                        let coords: Vec<Vec<E>> = inter
                            .basis()
                            .rows()
                            .map(|r| w.coordinates(field, r).expect("intersection lies in W"))
                            .collect();
                        Subspace::span(field, &Mat::from_rows(d, coords))
                    })
                    .collect()
            })
            .collect();
        Ok(MultiFiltration { ambient_dim: d, chains })
    }

    /// Induced filtration on `V / W`, identified with `F^{n - dim W}` through
    /// the non-pivot coordinates of `W`'s echelon basis.
    pub fn induced_quotient<F: Field<Elem = E>>(&self, field: &F, w: &Subspace<E>) -> Result<Self> {
        if w.ambient_dim() != self.ambient_dim {
            return Err(Error::NotContained);
        }
        let t = quotient_map(field, w);
        let chains = self
            .chains
            .iter()
            .map(|c| c.iter().map(|s| s.map(field, &t)).collect())
            .collect();
        Ok(MultiFiltration { ambient_dim: t.ncols(), chains })
    }

    /// Image of every step under the invertible change of coordinates
    /// `v -> v * g`.
    pub fn transform<F: Field<Elem = E>>(&self, field: &F, g: &Mat<E>) -> Self {
        let chains = self
            .chains
            .iter()
            .map(|c| c.iter().map(|s| s.map(field, g)).collect())
            .collect();
        MultiFiltration { ambient_dim: self.ambient_dim, chains }
    }

    /// Chain order permuted: `out.chain(k) = self.chain(perm[k])`.
    pub fn permute_chains(&self, perm: &[usize]) -> Self {
        MultiFiltration {
            ambient_dim: self.ambient_dim,
            chains: perm.iter().map(|&i| self.chains[i].clone()).collect(),
        }
    }

    /// `Σ_i l_i`, the largest possible slope.
    pub fn max_possible_slope(&self) -> usize {
        self.chains.iter().map(|c| c.len() - 1).sum()
    }
}

/// Matrix of the projection `F^n -> F^n / W ≅ F^{n-d}`, acting on row
/// vectors: `v -> v_Q - v_P * W_Q` for pivot columns `P` of `W`.
pub fn quotient_map<F: Field>(field: &F, w: &Subspace<F::Elem>) -> Mat<F::Elem> {
    let n = w.ambient_dim();
    let pivots = w.pivots();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Mat::from_fn(n, free.len(), |k, q| {
        if let Some(r) = pivots.iter().position(|&c| c == k) {
            field.neg(&w.basis()[(r, free[q])])
        } else if free[q] == k {
            field.one()
        } else {
            field.zero()
        }
    })
}
