use std::collections::HashSet;

use num_rational::BigRational;

use crate::arith::{is_prime, Dvr, Rationals};
use crate::error::Result;
use crate::filtration::{max_destabilizer, MultiFiltration, Slope};
use crate::lattice::{residue_filtration, Lattice};
use crate::KSubspace;

/// Best-effort semistability verdict for a filtered space over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenericVerdict {
    /// Some reduction is semistable, hence so is the space itself: a
    /// destabilizing subspace would reduce to one of at least the same slope.
    Semistable { prime: u64 },
    /// A subspace built from the filtration steps has too large a slope.
    Unstable { witness: KSubspace, slope: Slope },
    Undetermined,
}

impl GenericVerdict {
    pub fn is_semistable(&self) -> bool {
        matches!(self, GenericVerdict::Semistable { .. })
    }
}

/// Tries reductions of the standard lattice modulo `p` and up to `tries`
/// further primes, then searches the sums and intersections of filtration
/// steps for a destabilizing subspace.
pub fn check_generic_fiber(
    fil: &MultiFiltration<BigRational>,
    p: u64,
    tries: usize,
    closure_cap: usize,
    enum_cap: u128,
) -> Result<GenericVerdict> {
    let q = Rationals::new();
    let n = fil.dim();
    let mu = fil.slope()?;
    let lattice = Lattice::standard(n);
    let primes = std::iter::once(p).chain((2u64..).filter(|&l| is_prime(l) && l != p).take(tries));
    for l in primes {
        let dvr = Dvr::new(l)?;
        let field = crate::arith::PrimeField::new(l);
        let red = residue_filtration(&dvr, &lattice, fil)?;
        if max_destabilizer(&field, &red, enum_cap)?.dim == n {
            return Ok(GenericVerdict::Semistable { prime: l });
        }
    }
    if let Some(witness) = step_closure(fil, closure_cap, |w| fil.slope_of(&q, w).is_ok_and(|sl| sl > mu)) {
        let slope = fil.slope_of(&q, &witness)?;
        return Ok(GenericVerdict::Unstable { witness, slope });
    }
    Ok(GenericVerdict::Undetermined)
}

/// Grows the set of subspaces generated from the filtration steps by sums
/// and intersections until `found` accepts one or `cap` are known.
fn step_closure(fil: &MultiFiltration<BigRational>, cap: usize, found: impl Fn(&KSubspace) -> bool) -> Option<KSubspace> {
    let q = Rationals::new();
    let mut all: Vec<KSubspace> = Vec::new();
    let mut seen: HashSet<KSubspace> = HashSet::new();
    for (_, _, s) in fil.positive_steps() {
        if found(s) {
            return Some(s.clone());
        }
        if seen.insert(s.clone()) {
            all.push(s.clone());
        }
    }
    let mut frontier = 0;
    while frontier < all.len() && all.len() < cap {
        let end = all.len();
        for a in frontier..end {
            for b in 0..end {
                for c in [all[a].sum(&q, &all[b]), all[a].intersect(&q, &all[b])] {
                    if c.is_zero() || seen.contains(&c) {
                        continue;
                    }
                    if found(&c) {
                        return Some(c);
                    }
                    if all.len() < cap {
                        seen.insert(c.clone());
                        all.push(c);
                    }
                }
            }
        }
        frontier = end;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Mat, Ring, Subspace};

    fn line(v: &[i64]) -> KSubspace {
        let q = Rationals::new();
        Subspace::span(&q, &Mat::from_rows(v.len(), vec![v.iter().map(|&x| q.from_int(x)).collect()]))
    }

    #[test]
    fn coincident_lines_are_unstable() {
        let q = Rationals::new();
        let fil = MultiFiltration::from_steps(&q, 2, vec![vec![line(&[1, 0])], vec![line(&[1, 0])]]).unwrap();
        let v = check_generic_fiber(&fil, 2, 3, 100, 1000).unwrap();
        assert_eq!(v, GenericVerdict::Unstable { witness: line(&[1, 0]), slope: Slope::new(2, 1) });
    }

    #[test]
    fn distinct_lines_are_certified_by_another_prime() {
        let q = Rationals::new();
        let fil = MultiFiltration::from_steps(&q, 2, vec![vec![line(&[1, 0])], vec![line(&[1, 2])]]).unwrap();
        // Modulo 2 the lines collide; modulo 3 they do not.
        assert_eq!(check_generic_fiber(&fil, 2, 3, 100, 1000).unwrap(), GenericVerdict::Semistable { prime: 3 });
    }
}
