//! `O`-lattices in `K^n`, their induced filtrations and reductions, and the
//! elementary modification `M' = ker(M -> M/p^m M -> G~)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{
    determinant, echelon_dvr, inverse, ChainRing, Dvr, Mat, PrimeField, Rationals, Submodule, Subspace, Valuation,
};
use crate::error::{Error, Result};
use crate::filtration::MultiFiltration;
use crate::{ChainMat, KSubspace, QMat};

/// A full-rank lattice in `K^n`. Column `k` of `basis` is the `k`-th basis
/// vector in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: QMat,
}

impl Lattice {
    pub fn new(basis: QMat) -> Result<Self> {
        if basis.nrows() != basis.ncols() {
            return Err(Error::DimensionMismatch { expected: basis.nrows(), found: basis.ncols() });
        }
        if determinant(&Rationals::new(), &basis).is_zero() {
            return Err(Error::SingularBasis);
        }
        Ok(Lattice { basis })
    }

    /// `O^n`.
    pub fn standard(n: usize) -> Self {
        Lattice { basis: Mat::identity(&Rationals::new(), n) }
    }

    /// Lattice spanned by the given basis vectors.
    pub fn from_vectors(n: usize, vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        if vectors.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: vectors.len() });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        Self::new(Mat::from_rows(n, vectors).transpose())
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigRational>> {
        self.basis.transpose().to_rows()
    }

    /// Matrix taking ambient row vectors to lattice coordinates:
    /// `coords = v * P^{-T}`.
    pub fn coordinate_map(&self) -> QMat {
        inverse(&Rationals::new(), &self.basis).expect("basis is invertible").transpose()
    }

    /// The rows of `s`'s basis written in lattice coordinates.
    pub fn to_coordinates(&self, s: &KSubspace) -> QMat {
        s.basis().mul(&Rationals::new(), &self.coordinate_map())
    }

    /// `other ⊆ self`: every basis vector of `other` has integral coordinates.
    pub fn contains(&self, dvr: &Dvr, other: &Lattice) -> bool {
        let q = Rationals::new();
        let inv = inverse(&q, &self.basis).expect("basis is invertible");
        inv.mul(&q, &other.basis).iter().all(|x| dvr.in_ring(x))
    }

    /// Equality as `O`-modules, by mutual containment.
    pub fn same_as(&self, dvr: &Dvr, other: &Lattice) -> bool {
        self.dim() == other.dim() && self.contains(dvr, other) && other.contains(dvr, self)
    }

    /// `v_p(det)` of `other`'s basis in this lattice's coordinates, i.e. the
    /// length of `self / other` when `other ⊆ self`.
    pub fn index_valuation(&self, dvr: &Dvr, other: &Lattice) -> Valuation {
        let q = Rationals::new();
        let inv = inverse(&q, &self.basis).expect("basis is invertible");
        dvr.valuation(&determinant(&q, &inv.mul(&q, &other.basis)))
    }

    /// Lattice whose basis is `rows` (in this lattice's coordinates).
    pub fn sublattice_from_rows(&self, rows: &QMat) -> Result<Lattice> {
        Lattice::new(self.basis.mul(&Rationals::new(), &rows.transpose()))
    }
}

/// A submodule of a lattice, generators as rows in the parent's coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub generators: QMat,
    pub saturated: bool,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.generators.nrows()
    }

    /// The `K`-span, back in lattice coordinates.
    pub fn span(&self) -> KSubspace {
        Subspace::span(&Rationals::new(), &self.generators)
    }

    /// Image in `(Z/p^m)^n`.
    pub fn reduce(&self, dvr: &Dvr, m: u32) -> ChainMat {
        dvr.reduce_mat(&self.generators, m).expect("sublattice generators are integral")
    }
}

/// `S ∩ L`, returned as a saturated sublattice of `L`.
///
/// The basis of `S` is written in lattice coordinates; each row is scaled so
/// that its entry of least valuation becomes `1`, and that column is cleared
/// from all other rows. The result contains an identity minor, so it extends
/// to a basis of `L`, and it spans `S`.
pub fn intersect(dvr: &Dvr, l: &Lattice, s: &KSubspace) -> Result<Sublattice> {
    if s.ambient_dim() != l.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), found: s.ambient_dim() });
    }
    Ok(Sublattice { generators: saturate(dvr, &l.to_coordinates(s)), saturated: true })
}

/// Saturated `O`-basis of `span_K(rows) ∩ O^n`. Rows must be independent.
pub fn saturate(dvr: &Dvr, rows: &QMat) -> QMat {
    let q = Rationals::new();
    let mut m = rows.clone();
    for r in 0..m.nrows() {
        let (col, _) = (0..m.ncols())
            .map(|c| (c, dvr.valuation(&m[(r, c)])))
            .min_by_key(|&(c, v)| (v, c))
            .expect("nonempty row");
        let pivot = m[(r, col)].clone();
        assert!(!pivot.is_zero(), "rows must be independent");
        m.scale_row(&q, r, &pivot.recip());
        for i in 0..m.nrows() {
            if i != r && !m[(i, col)].is_zero() {
                let f = -m[(i, col)].clone();
                m.add_row_multiple(&q, i, r, &f);
            }
        }
    }
    m
}

/// `M~ = M / p^m M` with the images of `Fil_i^j ∩ M`, all in lattice
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainModuleSpace {
    pub prime: u64,
    pub level: u32,
    pub rank: usize,
    /// `chains[i][j]`: basis rows of the image of `Fil_i^j ∩ M`, a free
    /// direct summand of `(Z/p^m)^n`.
    pub chains: Vec<Vec<ChainMat>>,
}

impl ChainModuleSpace {
    pub fn submodule(&self, i: usize, j: usize) -> Submodule {
        Submodule::new(&self.ring(), &self.chains[i][j])
    }

    pub fn ring(&self) -> ChainRing {
        ChainRing::new(self.prime, self.level)
    }
}

/// Saturated generators of `Fil_i^j ∩ L` for every step, in `L`-coordinates.
pub fn induced_sublattices(dvr: &Dvr, l: &Lattice, fil: &MultiFiltration<BigRational>) -> Result<Vec<Vec<Sublattice>>> {
    fil.chains()
        .iter()
        .map(|c| c.iter().map(|s| intersect(dvr, l, s)).collect())
        .collect()
}

pub fn reduce_lattice(dvr: &Dvr, l: &Lattice, fil: &MultiFiltration<BigRational>, m: u32) -> Result<ChainModuleSpace> {
    let subs = induced_sublattices(dvr, l, fil)?;
    let chains = subs.iter().map(|c| c.iter().map(|s| s.reduce(dvr, m)).collect()).collect();
    Ok(ChainModuleSpace { level: m, rank: l.dim(), prime: dvr.prime(), chains })
}

/// The reduction `M̄ = M / p M` with its induced multi-filtration.
pub fn residue_filtration(dvr: &Dvr, l: &Lattice, fil: &MultiFiltration<BigRational>) -> Result<MultiFiltration<u64>> {
    let field = PrimeField::new(dvr.prime());
    let subs = induced_sublattices(dvr, l, fil)?;
    let chains = subs
        .iter()
        .map(|c| {
            c.iter()
                .map(|s| {
                    let rows = s.reduce(dvr, 1).map(|x| u64::try_from(x).expect("residue fits"));
                    Subspace::span(&field, &rows)
                })
                .collect()
        })
        .collect();
    MultiFiltration::new(&field, l.dim(), chains)
}

/// `M' = {v ∈ M : v mod p^m ∈ B~}` for `B~` given by generator rows over
/// `Z/p^m` in `M`-coordinates.
///
/// `B~` must be a free direct summand; its generators must be a basis.
pub fn elementary_modification(dvr: &Dvr, l: &Lattice, b_tilde: &ChainMat, m: u32) -> Result<Lattice> {
    let n = l.dim();
    if b_tilde.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b_tilde.ncols() });
    }
    let ring = ChainRing::new(dvr.prime(), m);
    let sub = Submodule::new(&ring, b_tilde);
    if !sub.is_saturated() || sub.num_generators() != b_tilde.nrows() {
        return Err(Error::RankDeficient { expected: b_tilde.nrows() });
    }
    let lifted: QMat = b_tilde.map(|x| BigRational::from_integer(x.clone()));
    let pm = dvr.prime_power(m);
    let q = Rationals::new();
    let scaled_identity = Mat::identity(&q, n).scale(&q, &pm);
    let ech = echelon_dvr(dvr, &lifted.vstack(&scaled_identity));
    debug_assert_eq!(ech.rank(), n);
    l.sublattice_from_rows(&ech.basis_rows())
}

/// Integer representative of a residue matrix, as rationals.
pub fn lift_residue(a: &Mat<u64>) -> QMat {
    a.map(|&x| BigRational::from_integer(BigInt::from(x)))
}

/// Integer representative of a chain-ring matrix, as rationals.
pub fn lift_chain(a: &ChainMat) -> QMat {
    a.map(|x| BigRational::from_integer(x.clone()))
}
