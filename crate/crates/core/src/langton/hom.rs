use num_bigint::BigInt;

use crate::arith::{left_kernel, smith, ChainRing, Mat, Ring, Submodule};
use crate::ChainMat;

use super::ReductionSequence;

/// One filtration condition on `φ: B~ -> G~`: `φ(source) ⊆ target`, both given
/// by generator rows (of `(Z/p^m)^b` and `(Z/p^m)^g`).
#[derive(Clone, Debug)]
pub struct HomCondition {
    pub source: ChainMat,
    pub target: ChainMat,
}

/// Maps `B~ -> G~` are `b × g` matrices acting on row vectors, flattened
/// row-major to vectors of length `b * g`.
pub fn hom_vector(y: &ChainMat) -> Vec<BigInt> {
    y.iter().cloned().collect()
}

pub fn hom_matrix(b: usize, g: usize, v: &[BigInt]) -> ChainMat {
    assert_eq!(v.len(), b * g);
    Mat::from_fn(b, g, |a, c| v[a * g + c].clone())
}

/// The submodule of `Hom(B~, G~) = (Z/p^m)^{b g}` of maps satisfying every
/// condition.
///
/// With `U T V = diag(p^e_t)` for the target generators `T`, a vector `w`
/// lies in the target iff `p^{m - e_t} (w V)_t = 0` for all `t` (reading
/// `e_t = m` past the rank). Applied to `w = u Y` for each source generator
/// `u`, these are linear equations in the entries of `Y`; the solutions are
/// a left kernel.
pub fn hom_filtered(ring: &ChainRing, b: usize, g: usize, conditions: &[HomCondition]) -> Submodule {
    let m = ring.level();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for cond in conditions {
        assert_eq!(cond.source.ncols(), b);
        assert_eq!(cond.target.ncols(), g);
        let sf = smith(ring, &cond.target);
        for u in cond.source.rows() {
            for t in 0..g {
                let e = sf.valuations.get(t).map_or(m, |v| v.capped(m));
                let scale = ring.prime_power(m - e);
                if ring.is_zero(&scale) {
                    continue;
                }
                let col: Vec<BigInt> = (0..b * g)
                    .map(|k| {
                        let (a, c) = (k / g, k % g);
                        ring.mul(&scale, &ring.mul(&u[a], &sf.v[(c, t)]))
                    })
                    .collect();
                if col.iter().any(|x| !ring.is_zero(x)) {
                    columns.push(col);
                }
            }
        }
    }
    if columns.is_empty() {
        return Submodule::full(ring, b * g);
    }
    let eqs = Mat::from_rows(b * g, columns).transpose();
    Submodule::new(ring, &left_kernel(ring, &eqs))
}

/// `H = Hom(B~, G~)` with `H₁` (maps preserving chains `0..s-1`) and `H₂`
/// (maps preserving the last chain), for the lift that is the graph of `x`.
#[derive(Clone, Debug)]
pub struct FilteredHomModule {
    pub level: u32,
    pub hom: Submodule,
    pub h1: Submodule,
    pub h2: Submodule,
}

impl FilteredHomModule {
    pub fn at(seq: &ReductionSequence, ring: &ChainRing, steps: &[Vec<ChainMat>], x: &ChainMat) -> Self {
        let s = steps.len();
        let split = s.saturating_sub(1);
        let (b, g) = (seq.b(), seq.g());
        FilteredHomModule {
            level: ring.level(),
            hom: Submodule::full(ring, b * g),
            h1: chain_hom(seq, ring, &steps[..split], x),
            h2: chain_hom(seq, ring, &steps[split..], x),
        }
    }
}

/// Maps `B~ -> G~` preserving every step of the given chains, where `B~` is
/// the graph of `x`.
pub(crate) fn chain_hom(seq: &ReductionSequence, ring: &ChainRing, chains: &[Vec<ChainMat>], x: &ChainMat) -> Submodule {
    let conditions: Vec<HomCondition> = chains
        .iter()
        .flat_map(|c| c.iter().skip(1))
        .filter(|f| f.nrows() > 0)
        .map(|f| {
            let d = seq.defect(ring, f, x);
            let k = left_kernel(ring, &d);
            HomCondition { source: k.mul(ring, &f.select_cols(seq.pivots())), target: d }
        })
        .collect();
    hom_filtered(ring, seq.b(), seq.g(), &conditions)
}
