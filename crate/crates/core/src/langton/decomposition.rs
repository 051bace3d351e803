use num_bigint::BigInt;

use crate::arith::{smith, ChainRing, Mat, Ring, Submodule, ValuationRing};
use crate::error::{Error, Result};
use crate::ChainMat;

/// `H / (H₁ ∩ pH + pH₂) ≅ ⊕_t Z/p^{a_t}` for `H = (Z/p^m)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDecomposition {
    pub level: u32,
    /// One exponent per coordinate of the adapted basis, each in `[1, m]`.
    pub exponents: Vec<u32>,
    /// Change of coordinates `x -> x T` to the adapted basis: the class of
    /// `x` vanishes iff `p^{a_t}` divides `(x T)_t` for all `t`.
    pub transform: ChainMat,
}

impl QuotientDecomposition {
    pub fn sorted_exponents(&self) -> Vec<u32> {
        let mut e = self.exponents.clone();
        e.sort_unstable();
        e
    }

    /// `log_p` of the quotient's size.
    pub fn log_size(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Least valuation of a coordinate of `a` that is nonzero in its summand,
    /// or `m` when the class of `a` is zero.
    pub fn residue_order(&self, ring: &ChainRing, a: &[BigInt]) -> u32 {
        let m = ring.level();
        let y = self.transform.vec_mul(ring, a);
        y.iter()
            .zip(&self.exponents)
            .map(|(yt, &at)| (ring.valuation(yt).capped(m), at))
            .filter(|&(v, at)| v < at)
            .map(|(v, _)| v)
            .min()
            .unwrap_or(m)
    }

    pub fn is_zero_class(&self, ring: &ChainRing, a: &[BigInt]) -> bool {
        let y = self.transform.vec_mul(ring, a);
        y.iter().zip(&self.exponents).all(|(yt, &at)| ring.valuation(yt).capped(ring.level()) >= at)
    }
}

/// Decomposes `H / (H₁ ∩ pH + pH₂)` for `H = (Z/p^m)^k`, with `H₁` and `H₂`
/// given by generator rows.
///
/// Coordinates are first changed so that the saturated `H₂` becomes the span
/// of the first `r` unit vectors; the stacked generators `p e_t` (`t < r`)
/// and `H₁ ∩ pH` are then brought to Smith form.
pub fn quotient_decomposition(ring: &ChainRing, k: usize, h1: &ChainMat, h2: &ChainMat) -> Result<QuotientDecomposition> {
    let m = ring.level();
    if h1.ncols() != k || h2.ncols() != k {
        return Err(Error::DimensionMismatch { expected: k, found: if h1.ncols() != k { h1.ncols() } else { h2.ncols() } });
    }
    let h2_mod = Submodule::new(ring, h2);
    if !h2_mod.is_saturated() {
        return Err(Error::NotSaturated);
    }
    let r = h2_mod.num_generators();
    let sf2 = smith(ring, h2_mod.generators());
    let v = sf2.v;

    let p = ring.prime_power(1);
    let p_h = Submodule::full(ring, k).scale(ring, &p);
    let h1_in_ph = Submodule::new(ring, h1).intersect(ring, &p_h);

    let mut stacked = Mat::zeros(ring, 0, k);
    for t in 0..r {
        stacked.push_row((0..k).map(|c| if c == t { p.clone() } else { ring.zero() }).collect());
    }
    let moved = h1_in_ph.generators().mul(ring, &v);
    let stacked = stacked.vstack(&moved);

    let sf = smith(ring, &stacked);
    let exponents = (0..k).map(|t| sf.valuations.get(t).map_or(m, |val| val.capped(m))).collect();
    Ok(QuotientDecomposition { level: m, exponents, transform: v.mul(ring, &sf.v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmat(ring: &ChainRing, k: usize, rows: Vec<Vec<i64>>) -> ChainMat {
        Mat::from_rows(k, rows.into_iter().map(|r| r.into_iter().map(|x| ring.from_int(x)).collect()).collect())
    }

    #[test]
    fn everything_gives_the_residue_space() {
        let r = ChainRing::new(3, 3);
        let id = Mat::identity(&r, 3);
        let qd = quotient_decomposition(&r, 3, &id, &id).unwrap();
        assert_eq!(qd.sorted_exponents(), vec![1, 1, 1]);
    }

    #[test]
    fn rank_one_over_z4() {
        let r = ChainRing::new(2, 2);
        let qd = quotient_decomposition(&r, 1, &Mat::zeros(&r, 0, 1), &Mat::identity(&r, 1)).unwrap();
        assert_eq!(qd.exponents, vec![1]);
    }

    #[test]
    fn mixed_exponents() {
        let r = ChainRing::new(2, 2);
        let h1 = zmat(&r, 2, vec![vec![2, 0]]);
        let h2 = zmat(&r, 2, vec![vec![1, 0]]);
        let qd = quotient_decomposition(&r, 2, &h1, &h2).unwrap();
        assert_eq!(qd.sorted_exponents(), vec![1, 2]);
        assert!(qd.is_zero_class(&r, &[r.from_int(2), r.zero()]));
        assert!(!qd.is_zero_class(&r, &[r.zero(), r.from_int(2)]));
        assert_eq!(qd.residue_order(&r, &[r.zero(), r.from_int(2)]), 1);
    }

    #[test]
    fn unsaturated_h2_is_rejected() {
        let r = ChainRing::new(2, 2);
        let h2 = zmat(&r, 1, vec![vec![2]]);
        assert_eq!(quotient_decomposition(&r, 1, &h2, &h2), Err(Error::NotSaturated));
    }
}
