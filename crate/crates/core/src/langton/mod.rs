//! Lifting destabilizing sequences modulo `p^m` and the modification loop.
//!
//! Throughout, a residue sequence `0 -> B̄ -> M̄ -> Ḡ -> 0` is described by
//! the echelon basis of `B̄ ⊆ F_p^n` with pivot columns `P` and free columns
//! `Q`. Every free lift of `B̄` to `M~ = (Z/p^m)^n` is then the row span of
//! the graph matrix `[I | X]` (identity on `P`, `X` on `Q`) for a unique
//! `X ≡ X̄ (mod p)`, and the complement spanned by the `e_q`, `q ∈ Q`,
//! identifies `G~` with `(Z/p^m)^Q` through `v -> v_Q - v_P X`.

mod decomposition;
mod generic;
mod hom;
mod lift;
mod step;
mod verify;

pub use decomposition::{quotient_decomposition, QuotientDecomposition};
pub use generic::{check_generic_fiber, GenericVerdict};
pub use hom::{hom_filtered, hom_matrix, hom_vector, FilteredHomModule, HomCondition};
pub use lift::{check_lift, is_liftable, lift_at, max_lift_order};
pub use step::{
    langton_run, langton_step, verify_no_splitting, LangtonStep, LangtonTrace, ResidueExtension,
};
pub use verify::{verify_trace, VerifyFailure, VerifyReason};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{ChainRing, Dvr, Mat, PrimeField, Ring, Subspace};
use crate::error::{Error, Result};
use crate::filtration::MultiFiltration;
use crate::lattice::{induced_sublattices, Lattice, Sublattice};
use crate::{ChainMat, FpMat, SubspaceF};

/// Resource limits for the brute-force parts of the algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Subspaces enumerated per destabilizer or semistability search.
    pub enum_cap: u128,
    /// Largest lift level tried before declaring a sequence unbounded.
    pub lift_cap: u32,
    /// Modification steps before giving up.
    pub max_iter: usize,
    /// Candidate lifts or sections examined by the exhaustive searches.
    pub search_cap: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { enum_cap: 1_000_000, lift_cap: 64, max_iter: 10_000, search_cap: 1_000_000 }
    }
}

/// How far a residue sequence lifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LiftOrder {
    Finite(u32),
    /// Liftable at every level up to the cap.
    Unbounded,
}

/// The destabilizing residue sequence of a lattice `M`.
#[derive(Clone, Debug)]
pub struct ReductionSequence {
    dvr: Dvr,
    lattice: Lattice,
    sublattices: Vec<Vec<Sublattice>>,
    residue: MultiFiltration<u64>,
    destabilizer: SubspaceF,
    free: Vec<usize>,
    /// `B̄ ∩ F̄il_i^j`, in `M̄` coordinates.
    residue_steps: Vec<Vec<SubspaceF>>,
}

impl ReductionSequence {
    pub fn new(dvr: &Dvr, lattice: &Lattice, fil: &MultiFiltration<BigRational>, destabilizer: SubspaceF) -> Result<Self> {
        let n = lattice.dim();
        if destabilizer.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: destabilizer.ambient_dim() });
        }
        if destabilizer.is_zero() || destabilizer.dim() == n {
            return Err(Error::InvalidFiltration("destabilizer must be nonzero and proper".into()));
        }
        let field = PrimeField::new(dvr.prime());
        let sublattices = induced_sublattices(dvr, lattice, fil)?;
        let chains: Vec<Vec<SubspaceF>> = sublattices
            .iter()
            .map(|c| c.iter().map(|s| Subspace::span(&field, &residue_rows(dvr, s))).collect())
            .collect();
        let residue = MultiFiltration::new(&field, n, chains)?;
        let residue_steps = residue
            .chains()
            .iter()
            .map(|c| c.iter().map(|s| s.intersect(&field, &destabilizer)).collect())
            .collect();
        let free = (0..n).filter(|c| !destabilizer.pivots().contains(c)).collect();
        Ok(ReductionSequence {
            dvr: dvr.clone(),
            lattice: lattice.clone(),
            sublattices,
            residue,
            destabilizer,
            free,
            residue_steps,
        })
    }

    pub fn dvr(&self) -> &Dvr {
        &self.dvr
    }

    pub fn prime(&self) -> u64 {
        self.dvr.prime()
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.dvr.prime())
    }

    pub fn ring(&self, m: u32) -> ChainRing {
        ChainRing::new(self.dvr.prime(), m)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.lattice.dim()
    }

    /// `dim B̄`.
    pub fn b(&self) -> usize {
        self.destabilizer.dim()
    }

    /// `dim Ḡ`.
    pub fn g(&self) -> usize {
        self.n() - self.b()
    }

    pub fn num_chains(&self) -> usize {
        self.sublattices.len()
    }

    pub fn chain_len(&self, i: usize) -> usize {
        self.sublattices[i].len()
    }

    pub fn destabilizer(&self) -> &SubspaceF {
        &self.destabilizer
    }

    pub fn residue(&self) -> &MultiFiltration<u64> {
        &self.residue
    }

    pub fn pivots(&self) -> &[usize] {
        self.destabilizer.pivots()
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn residue_step(&self, i: usize, j: usize) -> &SubspaceF {
        &self.residue_steps[i][j]
    }

    /// Generators of the images of `Fil_i^j ∩ M` in `M / p^m M`.
    pub fn steps_at(&self, m: u32) -> Vec<Vec<ChainMat>> {
        self.sublattices
            .iter()
            .map(|c| c.iter().map(|s| s.reduce(&self.dvr, m)).collect())
            .collect()
    }

    /// `X̄`: the free-column block of `B̄`'s echelon basis.
    pub fn residue_graph(&self) -> FpMat {
        self.destabilizer.basis().select_cols(&self.free)
    }

    /// The graph matrix `[I | X]` of a lift, columns in original order.
    pub fn graph(&self, ring: &ChainRing, x: &ChainMat) -> ChainMat {
        let (n, b) = (self.n(), self.b());
        let mut out = Mat::zeros(ring, b, n);
        for (r, &pc) in self.pivots().iter().enumerate() {
            out[(r, pc)] = ring.one();
            for (q, &fc) in self.free.iter().enumerate() {
                out[(r, fc)] = x[(r, q)].clone();
            }
        }
        out
    }

    /// Rows `e_q` for the free columns: the complement `G~`.
    pub fn complement(&self, ring: &ChainRing) -> ChainMat {
        let n = self.n();
        Mat::from_fn(self.g(), n, |t, c| if c == self.free[t] { ring.one() } else { ring.zero() })
    }

    /// `D = F_Q - F_P X`: the image of the step generators `f` in
    /// `G~ = (Z/p^m)^Q` when `B~` is the graph of `x`.
    pub fn defect(&self, ring: &ChainRing, f: &ChainMat, x: &ChainMat) -> ChainMat {
        let fp = f.select_cols(self.pivots());
        let fq = f.select_cols(&self.free);
        fq.sub(ring, &fp.mul(ring, x))
    }
}

/// A lift of the destabilizing sequence modulo `p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftWitness {
    pub level: u32,
    /// `B~` is the graph of `x`.
    pub x: ChainMat,
    /// Basis rows of `B~` in `M`-coordinates.
    pub b_tilde: ChainMat,
    /// Basis rows of a complement `G~` with `M~ = B~ ⊕ G~`.
    pub g_tilde: ChainMat,
    /// `certificates[i][j]`: elements of `F~il_i^j ∩ B~` reducing to the
    /// echelon basis of `B̄ ∩ F̄il_i^j`.
    pub certificates: Vec<Vec<ChainMat>>,
}

fn residue_rows(dvr: &Dvr, s: &Sublattice) -> FpMat {
    s.reduce(dvr, 1).map(|x| u64::try_from(x).expect("residue fits in u64"))
}

pub(crate) fn to_residue(p: u64, a: &ChainMat) -> FpMat {
    let pb = BigInt::from(p);
    a.map(|x| {
        let r = num_integer::Integer::mod_floor(x, &pb);
        u64::try_from(r).expect("residue fits in u64")
    })
}

pub(crate) fn lift_residue(ring: &ChainRing, a: &FpMat) -> ChainMat {
    a.map(|&x| ring.reduce(&BigInt::from(x)))
}
