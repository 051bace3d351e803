use crate::arith::{PrimeField, Subspace};
use crate::error::{Error, Result};

use super::{enumerate_subspaces, MultiFiltration, Slope};

/// The maximal destabilizing subspace: the nonzero subspace maximizing
/// `(slope, dim)` lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Destabilizer {
    pub subspace: Subspace<u64>,
    pub slope: Slope,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub semistable: bool,
    pub slope: Slope,
    pub weight: usize,
    /// Present iff unstable: the maximal destabilizer, whose slope exceeds
    /// the slope of the whole space.
    pub witness: Option<Destabilizer>,
}

/// Brute force over every nonzero subspace of `F_p^n`.
///
/// On semistable input the maximizer is the whole space. Fails with
/// [`Error::UniquenessViolation`] if two subspaces tie for the maximum,
/// which would contradict the existence of a unique maximal destabilizer.
pub fn max_destabilizer(field: &PrimeField, x: &MultiFiltration<u64>, cap: u128) -> Result<Destabilizer> {
    let n = x.dim();
    if n == 0 {
        return Err(Error::ZeroDimensional);
    }
    let mut best: Option<Destabilizer> = None;
    let mut ties = 0usize;
    for w in enumerate_subspaces(field, n, None, cap)? {
        if w.is_zero() {
            continue;
        }
        let slope = Slope::new(x.weight_of(field, &w) as i64, w.dim() as i64);
        let key = (slope, w.dim());
        match &best {
            Some(b) if key < (b.slope, b.dim) => {}
            Some(b) if key == (b.slope, b.dim) => ties += 1,
            _ => {
                ties = 1;
                best = Some(Destabilizer { dim: w.dim(), subspace: w, slope });
            }
        }
    }
    let best = best.expect("the whole space is a candidate");
    if ties > 1 {
        return Err(Error::UniquenessViolation { slope: best.slope.to_string(), dim: best.dim, count: ties });
    }
    Ok(best)
}

pub fn is_semistable(field: &PrimeField, x: &MultiFiltration<u64>, cap: u128) -> Result<StabilityReport> {
    let slope = x.slope()?;
    let d = max_destabilizer(field, x, cap)?;
    let semistable = d.dim == x.dim();
    debug_assert!(semistable == (d.slope <= slope));
    Ok(StabilityReport { semistable, slope, weight: x.weight(), witness: (!semistable).then_some(d) })
}
