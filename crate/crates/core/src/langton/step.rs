use num_rational::BigRational;

use crate::arith::{inverse, rank, solve_row, Dvr, Mat, PrimeField, Rationals};
use crate::error::{Error, Result};
use crate::filtration::{max_destabilizer, MultiFiltration, Slope};
use crate::lattice::{elementary_modification, residue_filtration, Lattice};
use crate::{ChainMat, FpMat, SubspaceF};

use super::lift::max_lift_order;
use super::{Caps, LiftOrder, LiftWitness, ReductionSequence};

/// One modification `M -> M'`.
#[derive(Clone, Debug)]
pub struct LangtonStep {
    pub lattice: Lattice,
    /// `dim F̄il_i^j` of the reduction of `lattice`.
    pub reduction_dims: Vec<Vec<usize>>,
    pub destabilizer: SubspaceF,
    pub slope: Slope,
    pub dim: usize,
    pub lift_order: u32,
    /// Basis rows of the lift `B~` over `Z/p^m`, in `lattice` coordinates.
    pub lift_generators: ChainMat,
    /// Full lift data; absent for steps read back from storage.
    pub witness: Option<LiftWitness>,
    pub modified: Lattice,
    /// Whether the residue sequence of `modified` has no filtered splitting;
    /// `None` when there were too many sections to enumerate.
    pub no_splitting: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct LangtonTrace {
    pub initial: Lattice,
    pub steps: Vec<LangtonStep>,
    pub final_lattice: Lattice,
    pub final_reduction_dims: Vec<Vec<usize>>,
}

/// The residue sequence `0 -> Ḡ -> M̄' -> B̄ -> 0` of a modification, each
/// term with its filtration.
#[derive(Clone, Debug)]
pub struct ResidueExtension {
    /// `Ḡ`, filtered as the quotient `M̄ / B̄`.
    pub sub: MultiFiltration<u64>,
    /// `M̄'`, with the reduction filtration of `M'`.
    pub middle: MultiFiltration<u64>,
    /// `B̄`, filtered as a subspace of `M̄`, in echelon coordinates.
    pub quotient: MultiFiltration<u64>,
    /// `Ḡ -> M̄'`, acting on row vectors.
    pub inclusion: FpMat,
    /// `M̄' -> B̄`, acting on row vectors.
    pub projection: FpMat,
}

impl ResidueExtension {
    /// The sequence for `M' = ker(M -> M / p^m M -> G~)`.
    ///
    /// `M̄' -> M̄` is reduction of `M'`'s basis written in `M`-coordinates;
    /// it lands in `B̄`. `Ḡ -> M̄'` sends the class of `e_q` to `p^m e_q`.
    pub fn after_modification(
        dvr: &Dvr,
        fil: &MultiFiltration<BigRational>,
        seq: &ReductionSequence,
        modified: &Lattice,
        m: u32,
    ) -> Result<Self> {
        let q = Rationals::new();
        let field = seq.field();
        let lattice = seq.lattice();
        let change = inverse(&q, lattice.basis()).expect("basis is invertible").mul(&q, modified.basis());
        let rows = change.transpose();
        let rows_bar = dvr.reduce_residue(&rows)?;
        if !rows_bar.rows().all(|r| seq.destabilizer().contains_vector(&field, r)) {
            return Err(Error::InvariantViolation("modified lattice does not reduce into the destabilizer".into()));
        }
        let projection = rows_bar.select_cols(seq.pivots());
        let rows_inv = inverse(&q, &rows).expect("modified basis is invertible");
        let pm = dvr.prime_power(m);
        let inclusion_q = Mat::from_fn(seq.g(), seq.n(), |t, c| &pm * &rows_inv[(seq.free()[t], c)]);
        let inclusion = dvr.reduce_residue(&inclusion_q)?;
        let ext = ResidueExtension {
            sub: seq.residue().induced_quotient(&field, seq.destabilizer())?,
            middle: residue_filtration(dvr, modified, fil)?,
            quotient: seq.residue().induced_sub(&field, seq.destabilizer())?,
            inclusion,
            projection,
        };
        ext.check(&field)?;
        Ok(ext)
    }

    /// Exactness, and compatibility of both maps with the filtrations; the
    /// projection must map each step of `M̄'` onto the step of `B̄`.
    pub fn check(&self, field: &PrimeField) -> Result<()> {
        let bad = |msg: String| Err(Error::InvariantViolation(msg));
        let (n, b, g) = (self.middle.dim(), self.quotient.dim(), self.sub.dim());
        if n != b + g || self.projection.nrows() != n || self.projection.ncols() != b || self.inclusion.nrows() != g {
            return bad("residue sequence has inconsistent dimensions".into());
        }
        if rank(field, &self.projection) != b || rank(field, &self.inclusion) != g {
            return bad("residue sequence maps have the wrong rank".into());
        }
        if !self.inclusion.mul(field, &self.projection).is_zero(field) {
            return bad("residue sequence is not exact".into());
        }
        let shape = |x: &MultiFiltration<u64>| x.chains().iter().map(Vec::len).collect::<Vec<_>>();
        if shape(&self.middle) != shape(&self.sub) || shape(&self.middle) != shape(&self.quotient) {
            return bad("residue sequence filtrations have different shapes".into());
        }
        for i in 0..self.middle.num_chains() {
            for (j, step) in self.middle.chain(i).iter().enumerate() {
                if step.map(field, &self.projection) != self.quotient.chain(i)[j] {
                    return bad(format!("chain {i} step {j}: M̄' does not surject onto the destabilizer step"));
                }
                if !self.sub.chain(i)[j].map(field, &self.inclusion).is_subspace_of(field, step) {
                    return bad(format!("chain {i} step {j}: Ḡ -> M̄' is not filtered"));
                }
            }
        }
        Ok(())
    }
}

/// True iff no linear section `B̄ -> M̄'` of the projection is compatible
/// with all filtrations. Sections are enumerated as a fixed section plus
/// every map `B̄ -> Ḡ`.
pub fn verify_no_splitting(ext: &ResidueExtension, field: &PrimeField, cap: u128) -> Result<bool> {
    let (b, g) = (ext.quotient.dim(), ext.sub.dim());
    if g == 0 {
        return Ok(false);
    }
    let p = field.prime();
    let count = (p as u128).checked_pow((b * g) as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(Error::EnumerationTooLarge { what: "sections", count, cap });
    }
    let n = ext.middle.dim();
    let base_rows: Vec<Vec<u64>> = (0..b)
        .map(|t| {
            let e: Vec<u64> = (0..b).map(|k| u64::from(k == t)).collect();
            solve_row(field, &ext.projection, &e).expect("projection is surjective")
        })
        .collect();
    let base = Mat::from_rows(n, base_rows);
    let mut h = vec![0u64; b * g];
    loop {
        let hm = Mat::from_fn(b, g, |a, c| h[a * g + c]);
        let section = base.add(field, &hm.mul(field, &ext.inclusion));
        let splits = (0..ext.middle.num_chains()).all(|i| {
            ext.quotient.chain(i).iter().zip(ext.middle.chain(i)).all(|(qs, ms)| qs.map(field, &section).is_subspace_of(field, ms))
        });
        if splits {
            return Ok(false);
        }
        if !next_digits(&mut h, p) {
            return Ok(true);
        }
    }
}

fn next_digits(d: &mut [u64], p: u64) -> bool {
    for x in d.iter_mut() {
        *x += 1;
        if *x < p {
            return true;
        }
        *x = 0;
    }
    false
}

/// One modification of `lattice`: destabilize, lift maximally, take the
/// kernel. Fails with [`Error::AlreadySemistable`] on semistable reduction.
pub fn langton_step(dvr: &Dvr, fil: &MultiFiltration<BigRational>, lattice: &Lattice, caps: &Caps) -> Result<LangtonStep> {
    let field = PrimeField::new(dvr.prime());
    let residue = residue_filtration(dvr, lattice, fil)?;
    let d = max_destabilizer(&field, &residue, caps.enum_cap)?;
    if d.dim == lattice.dim() {
        return Err(Error::AlreadySemistable);
    }
    let seq = ReductionSequence::new(dvr, lattice, fil, d.subspace.clone())?;
    let (order, witness) = max_lift_order(&seq, caps.lift_cap, caps.search_cap)?;
    let m = match order {
        LiftOrder::Finite(m) => m,
        LiftOrder::Unbounded => return Err(Error::GenericUnstable { cap: caps.lift_cap }),
    };
    let modified = elementary_modification(dvr, lattice, &witness.b_tilde, m)?;
    debug_assert_eq!(lattice.index_valuation(dvr, &modified).finite(), Some(i64::from(m) * seq.g() as i64));
    let ext = ResidueExtension::after_modification(dvr, fil, &seq, &modified, m)?;
    let no_splitting = match verify_no_splitting(&ext, &field, caps.search_cap) {
        Ok(v) => Some(v),
        Err(Error::EnumerationTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(LangtonStep {
        lattice: lattice.clone(),
        reduction_dims: residue.dims(),
        destabilizer: d.subspace,
        slope: d.slope,
        dim: d.dim,
        lift_order: m,
        lift_generators: witness.b_tilde.clone(),
        witness: Some(witness),
        modified,
        no_splitting,
    })
}

/// Modifies the lattice until its reduction is semistable.
///
/// Between consecutive steps `(slope, dim)` of the destabilizer must drop
/// strictly in lexicographic order; a violation is an error.
pub fn langton_run(
    dvr: &Dvr,
    fil: &MultiFiltration<BigRational>,
    initial: Option<&Lattice>,
    caps: &Caps,
) -> Result<(Lattice, LangtonTrace)> {
    let start = initial.cloned().unwrap_or_else(|| Lattice::standard(fil.dim()));
    if start.dim() != fil.dim() {
        return Err(Error::DimensionMismatch { expected: fil.dim(), found: start.dim() });
    }
    let mut current = start.clone();
    let mut steps: Vec<LangtonStep> = Vec::new();
    loop {
        if steps.len() >= caps.max_iter {
            return Err(Error::IterationCapExceeded(caps.max_iter));
        }
        let step = match langton_step(dvr, fil, &current, caps) {
            Ok(step) => step,
            Err(Error::AlreadySemistable) => break,
            Err(e) => return Err(e),
        };
        if let Some(prev) = steps.last() {
            if (step.slope, step.dim) >= (prev.slope, prev.dim) {
                return Err(Error::InvariantViolation(format!(
                    "no descent at step {}: ({}, {}) after ({}, {})",
                    steps.len(),
                    step.slope,
                    step.dim,
                    prev.slope,
                    prev.dim
                )));
            }
        }
        current = step.modified.clone();
        steps.push(step);
    }
    let final_reduction_dims = residue_filtration(dvr, &current, fil)?.dims();
    let trace = LangtonTrace { initial: start, steps, final_lattice: current.clone(), final_reduction_dims };
    Ok((current, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, Ring, Subspace};
    use crate::KSubspace;
    use num_bigint::BigInt;

    fn integer_matrix(rows: Vec<Vec<i64>>, n: usize) -> Mat<BigInt> {
        Mat::from_rows(n, rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect())
    }

    fn line(n: usize, v: &[i64]) -> KSubspace {
        let q = Rationals::new();
        Subspace::span(&q, &Mat::from_rows(n, vec![v.iter().map(|&x| q.from_int(x)).collect()]))
    }

    fn instance(second: i64) -> MultiFiltration<BigRational> {
        let q = Rationals::new();
        MultiFiltration::from_steps(&q, 2, vec![vec![line(2, &[1, 0])], vec![line(2, &[1, second])]]).unwrap()
    }

    fn lattice(rows: &[&[&str]]) -> Lattice {
        Lattice::from_vectors(rows.len(), rows.iter().map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect()).collect()).unwrap()
    }

    #[test]
    fn worked_instance_with_order_one() {
        let dvr = Dvr::new(2).unwrap();
        let fil = instance(2);
        let step = langton_step(&dvr, &fil, &Lattice::standard(2), &Caps::default()).unwrap();
        assert_eq!(step.lift_order, 1);
        assert_eq!(step.slope, Slope::new(2, 1));
        assert!(step.modified.same_as(&dvr, &lattice(&[&["1", "0"], &["0", "2"]])));
        assert_eq!(step.no_splitting, Some(true));
        let (fin, trace) = langton_run(&dvr, &fil, None, &Caps::default()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert!(fin.same_as(&dvr, &lattice(&[&["1", "0"], &["0", "2"]])));
        // The two chains now reduce to span(e1) and span(e1 + f2).
        assert_eq!(trace.final_reduction_dims, vec![vec![2, 1, 0], vec![2, 1, 0]]);
        let red = residue_filtration(&dvr, &fin, &fil).unwrap();
        assert_ne!(red.chain(0)[1], red.chain(1)[1]);
    }

    #[test]
    fn worked_instance_with_order_two() {
        let dvr = Dvr::new(2).unwrap();
        let fil = instance(4);
        let step = langton_step(&dvr, &fil, &Lattice::standard(2), &Caps::default()).unwrap();
        assert_eq!(step.lift_order, 2);
        assert_eq!(step.lift_generators, integer_matrix(vec![vec![1, 0]], 2));
        assert!(step.modified.same_as(&dvr, &lattice(&[&["1", "0"], &["0", "4"]])));
        let (_, trace) = langton_run(&dvr, &fil, None, &Caps::default()).unwrap();
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn semistable_reduction_is_rejected() {
        let dvr = Dvr::new(2).unwrap();
        let q = Rationals::new();
        let fil = MultiFiltration::from_steps(&q, 2, vec![vec![line(2, &[1, 0])], vec![line(2, &[0, 1])]]).unwrap();
        assert_eq!(langton_step(&dvr, &fil, &Lattice::standard(2), &Caps::default()).unwrap_err(), Error::AlreadySemistable);
        let (fin, trace) = langton_run(&dvr, &fil, None, &Caps::default()).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(fin, Lattice::standard(2));
    }

    #[test]
    fn unstable_generic_fiber_is_detected() {
        let dvr = Dvr::new(2).unwrap();
        let q = Rationals::new();
        let fil = MultiFiltration::from_steps(&q, 2, vec![vec![line(2, &[1, 0])], vec![line(2, &[1, 0])]]).unwrap();
        let caps = Caps { lift_cap: 8, ..Caps::default() };
        assert_eq!(langton_run(&dvr, &fil, None, &caps).unwrap_err(), Error::GenericUnstable { cap: 8 });
    }

    #[test]
    fn split_sequences_are_recognised() {
        // F_2^2 = span(e1) ⊕ span(e2) with one chain span(e1) ⊇ 0, which
        // the canonical section respects.
        let f = PrimeField::new(2);
        let e = |v: Vec<u64>| Subspace::span(&f, &Mat::from_rows(v.len(), vec![v]));
        let middle = MultiFiltration::from_steps(&f, 2, vec![vec![e(vec![1, 0])]]).unwrap();
        let quotient = MultiFiltration::from_steps(&f, 1, vec![vec![Subspace::full(&f, 1)]]).unwrap();
        let sub = MultiFiltration::new(&f, 1, vec![vec![Subspace::full(&f, 1), Subspace::zero(&f, 1), Subspace::zero(&f, 1)]]).unwrap();
        let ext = ResidueExtension {
            sub,
            middle,
            quotient,
            inclusion: Mat::from_rows(2, vec![vec![0, 1]]),
            projection: Mat::from_rows(1, vec![vec![1], vec![0]]),
        };
        ext.check(&f).unwrap();
        assert!(!verify_no_splitting(&ext, &f, 100).unwrap());
    }
}
