use std::fmt;

use num_rational::BigRational;

use crate::arith::{Dvr, PrimeField};
use crate::error::Error;
use crate::filtration::{max_destabilizer, MultiFiltration};
use crate::lattice::{elementary_modification, residue_filtration, Lattice};

use super::lift::{check_lift, is_liftable};
use super::{Caps, LangtonTrace, ReductionSequence};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyReason {
    /// A step does not start from the lattice the previous step produced.
    LatticeChain,
    ReductionMismatch,
    DestabilizerNotOptimal,
    WitnessInvalid(String),
    LiftableAtNext,
    ModificationMismatch,
    NoDescent,
    FinalLatticeMismatch,
    FinalNotSemistable,
    /// A primitive failed, e.g. an enumeration exceeded its cap.
    Computation(String),
}

impl fmt::Display for VerifyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyReason::LatticeChain => write!(f, "lattice does not follow from the previous step"),
            VerifyReason::ReductionMismatch => write!(f, "reduction dimensions mismatch"),
            VerifyReason::DestabilizerNotOptimal => write!(f, "destabilizer not optimal"),
            VerifyReason::WitnessInvalid(why) => write!(f, "invalid lift: {why}"),
            VerifyReason::LiftableAtNext => write!(f, "liftable at m+1"),
            VerifyReason::ModificationMismatch => write!(f, "modified lattice mismatch"),
            VerifyReason::NoDescent => write!(f, "slope and dimension do not descend"),
            VerifyReason::FinalLatticeMismatch => write!(f, "final lattice mismatch"),
            VerifyReason::FinalNotSemistable => write!(f, "final reduction not semistable"),
            VerifyReason::Computation(why) => write!(f, "verification could not complete: {why}"),
        }
    }
}

/// First failure found while checking a trace, with the step it occurred in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyFailure {
    pub step: Option<usize>,
    pub reason: VerifyReason,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(k) => write!(f, "step {k}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

impl std::error::Error for VerifyFailure {}

/// Re-checks a trace from scratch against the problem.
///
/// Each step's destabilizer is recomputed by enumeration, its lift is checked
/// directly against the lifting conditions, non-liftability one level higher
/// is confirmed by exhaustive search, and the modification is recomputed. The
/// lift-order solver is not used.
pub fn verify_trace(
    dvr: &Dvr,
    fil: &MultiFiltration<BigRational>,
    initial: &Lattice,
    trace: &LangtonTrace,
    caps: &Caps,
) -> Result<(), VerifyFailure> {
    let field = PrimeField::new(dvr.prime());
    let fail = |step: Option<usize>, reason: VerifyReason| Err(VerifyFailure { step, reason });
    let comp = |step: Option<usize>| move |e: Error| VerifyFailure { step, reason: VerifyReason::Computation(e.to_string()) };

    if !trace.initial.same_as(dvr, initial) {
        return fail(None, VerifyReason::LatticeChain);
    }
    let mut current = initial.clone();
    let mut previous: Option<(crate::filtration::Slope, usize)> = None;
    for (k, step) in trace.steps.iter().enumerate() {
        let at = Some(k);
        if !step.lattice.same_as(dvr, &current) {
            return fail(at, VerifyReason::LatticeChain);
        }
        let residue = residue_filtration(dvr, &current, fil).map_err(comp(at))?;
        if residue.dims() != step.reduction_dims {
            return fail(at, VerifyReason::ReductionMismatch);
        }
        let d = max_destabilizer(&field, &residue, caps.enum_cap).map_err(comp(at))?;
        if d.subspace != step.destabilizer || d.slope != step.slope || d.dim != step.dim || d.dim == current.dim() {
            return fail(at, VerifyReason::DestabilizerNotOptimal);
        }
        if let Some(prev) = previous {
            if (d.slope, d.dim) >= prev {
                return fail(at, VerifyReason::NoDescent);
            }
        }
        previous = Some((d.slope, d.dim));

        let m = step.lift_order;
        if m == 0 {
            return fail(at, VerifyReason::WitnessInvalid("lift order must be positive".into()));
        }
        let seq = ReductionSequence::new(dvr, &current, fil, d.subspace).map_err(comp(at))?;
        let ring = seq.ring(m);
        let gens = step.lift_generators.map(|x| ring.reduce(x));
        if let Err(why) = check_lift(&seq, &gens, m) {
            return fail(at, VerifyReason::WitnessInvalid(why));
        }
        match is_liftable(&seq, m + 1, caps.search_cap) {
            Ok(Some(_)) => return fail(at, VerifyReason::LiftableAtNext),
            Ok(None) => {}
            Err(e) => return Err(comp(at)(e)),
        }
        let expected = elementary_modification(dvr, &current, &gens, m).map_err(comp(at))?;
        if !expected.same_as(dvr, &step.modified) {
            return fail(at, VerifyReason::ModificationMismatch);
        }
        current = expected;
    }
    if !trace.final_lattice.same_as(dvr, &current) {
        return fail(None, VerifyReason::FinalLatticeMismatch);
    }
    let residue = residue_filtration(dvr, &current, fil).map_err(comp(None))?;
    if residue.dims() != trace.final_reduction_dims {
        return fail(None, VerifyReason::ReductionMismatch);
    }
    let d = max_destabilizer(&field, &residue, caps.enum_cap).map_err(comp(None))?;
    if d.dim != current.dim() {
        return fail(None, VerifyReason::FinalNotSemistable);
    }
    Ok(())
}
