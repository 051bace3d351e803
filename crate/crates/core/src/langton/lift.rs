use num_bigint::BigInt;

use crate::arith::{left_kernel, solve_left, solve_row, ChainRing, Mat, Ring, Submodule, Subspace};
use crate::error::{Error, Result};
use crate::ChainMat;

use super::{lift_residue, to_residue, LiftOrder, LiftWitness, ReductionSequence};

/// Checks that `b_tilde` (basis rows over `Z/p^m`) lifts the destabilizing
/// sequence: it is a free direct summand of rank `dim B̄`, it reduces to
/// `B̄`, and every `F~il_i^j ∩ B~` surjects onto `B̄ ∩ F̄il_i^j`.
///
/// Intersections are taken directly as submodules, without using the graph
/// parametrization.
pub fn check_lift(seq: &ReductionSequence, b_tilde: &ChainMat, m: u32) -> std::result::Result<(), String> {
    if m == 0 {
        return Err("lift level must be positive".into());
    }
    let ring = seq.ring(m);
    let field = seq.field();
    let (n, b) = (seq.n(), seq.b());
    if b_tilde.nrows() != b || b_tilde.ncols() != n {
        return Err(format!("lift has shape {}x{}, expected {b}x{n}", b_tilde.nrows(), b_tilde.ncols()));
    }
    let b_tilde = b_tilde.map(|x| ring.reduce(x));
    let bt = Submodule::new(&ring, &b_tilde);
    if !bt.is_saturated() || bt.num_generators() != b {
        return Err("lift is not a free direct summand of the right rank".into());
    }
    let reduced = Subspace::span(&field, &to_residue(seq.prime(), &b_tilde));
    if &reduced != seq.destabilizer() {
        return Err("lift does not reduce to the destabilizer".into());
    }
    for (i, chain) in seq.steps_at(m).iter().enumerate() {
        for (j, f) in chain.iter().enumerate() {
            let inter = Submodule::new(&ring, f).intersect(&ring, &bt);
            let image = Subspace::span(&field, &to_residue(seq.prime(), inter.generators()));
            if &image != seq.residue_step(i, j) {
                return Err(format!("chain {i} step {j}: lifted step does not surject onto the residue step"));
            }
        }
    }
    Ok(())
}

/// Witness for a valid graph `x`, with explicit lifts of the residue bases.
fn build_witness(seq: &ReductionSequence, ring: &ChainRing, steps: &[Vec<ChainMat>], x: &ChainMat) -> Result<LiftWitness> {
    let field = seq.field();
    let p = seq.prime();
    let mut certificates = Vec::with_capacity(steps.len());
    for (i, chain) in steps.iter().enumerate() {
        let mut per_step = Vec::with_capacity(chain.len());
        for (j, f) in chain.iter().enumerate() {
            let target = seq.residue_step(i, j);
            let mut rows = Mat::zeros(ring, 0, seq.n());
            if !target.is_zero() {
                let d = seq.defect(ring, f, x);
                let k = left_kernel(ring, &d);
                let k_bar = to_residue(p, &k);
                let f_bar = to_residue(p, f);
                for beta in target.basis().rows() {
                    let bad = || Error::InvariantViolation(format!("chain {i} step {j}: residue vector has no lift"));
                    let c_bar = solve_row(&field, &f_bar, beta).ok_or_else(bad)?;
                    let lambda = solve_row(&field, &k_bar, &c_bar).ok_or_else(bad)?;
                    let lambda: Vec<BigInt> = lambda.into_iter().map(BigInt::from).collect();
                    let c = k.vec_mul(ring, &lambda);
                    rows.push_row(f.vec_mul(ring, &c));
                }
            }
            per_step.push(rows);
        }
        certificates.push(per_step);
    }
    Ok(LiftWitness {
        level: ring.level(),
        x: x.clone(),
        b_tilde: seq.graph(ring, x),
        g_tilde: seq.complement(ring),
        certificates,
    })
}

/// Steps whose residue condition is nontrivial, with `dim B̄ ∩ F̄`.
fn active_steps(seq: &ReductionSequence) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..seq.num_chains() {
        for j in 1..seq.chain_len(i) {
            let d = seq.residue_step(i, j).dim();
            if d > 0 {
                out.push((i, j, d));
            }
        }
    }
    out
}

/// The linear system governing one level of lifting.
///
/// For `x` valid at level `k ≥ 1`, a graph `x + p^k Δ` is valid at level
/// `k + 1` iff for every step there is `γ` with `R + γ D̄ - K̄ F̄_P Δ = 0`
/// over `F_p`. Here `D` is the defect of `x`, `K` lifts a basis of its left
/// kernel modulo `p^k` and `K D = p^k R`. Products of two multiples of `p^k`
/// vanish modulo `p^{k+1}`, so the condition is exactly affine in `(γ, Δ)`.
///
/// Returns the matrix `A` and right-hand side of `u A = rhs`, with
/// `u = (Δ, γ_1, γ_2, ...)` and `Δ` flattened row by row.
fn level_system(
    seq: &ReductionSequence,
    active: &[(usize, usize, usize)],
    steps: &[Vec<ChainMat>],
    x: &ChainMat,
    k: u32,
) -> Result<(ChainMat, Vec<BigInt>)> {
    let (b, g) = (seq.b(), seq.g());
    let p = seq.prime();
    let f1 = seq.ring(1);
    let (low, high) = (seq.ring(k), seq.ring(k + 1));
    let pk = high.prime_power(k);
    let unknowns = b * g + active.iter().map(|&(i, j, d)| d * steps[i][j].nrows()).sum::<usize>();
    let equations = active.iter().map(|&(_, _, d)| d * g).sum::<usize>();
    let mut a = Mat::zeros(&f1, unknowns, equations);
    let mut rhs = vec![f1.zero(); equations];
    let (mut row, mut col) = (b * g, 0);
    for &(i, j, d) in active {
        let f = &steps[i][j];
        let dm = seq.defect(&high, f, x);
        let kernel = left_kernel(&low, &dm.map(|v| low.reduce(v)));
        if kernel.nrows() != d {
            return Err(Error::InvariantViolation(format!("chain {i} step {j}: graph is not valid at level {k}")));
        }
        let kd = kernel.mul(&high, &dm);
        let kfp = to_residue(p, &kernel.mul(&high, &f.select_cols(seq.pivots())));
        let d_bar = to_residue(p, &dm);
        for s in 0..d {
            for c in 0..g {
                let eq = col + s * g + c;
                let (q, r) = num_integer::Integer::div_rem(&kd[(s, c)], &pk);
                if !num_traits::Zero::is_zero(&r) {
                    return Err(Error::InvariantViolation(format!("chain {i} step {j}: kernel lift is not a kernel")));
                }
                rhs[eq] = f1.neg(&f1.reduce(&q));
                for e in 0..b {
                    a[(e * g + c, eq)] = f1.neg(&BigInt::from(kfp[(s, e)]));
                }
                for t in 0..f.nrows() {
                    a[(row + s * f.nrows() + t, eq)] = BigInt::from(d_bar[(t, c)]);
                }
            }
        }
        row += d * f.nrows();
        col += d * g;
    }
    Ok((a, rhs))
}

/// Exact depth-first search over lifts, one level at a time.
struct LevelSearch<'a> {
    seq: &'a ReductionSequence,
    active: Vec<(usize, usize, usize)>,
    /// `steps[k]`: step generators modulo `p^k`.
    steps: Vec<Vec<Vec<ChainMat>>>,
    /// Basis of the `Δ` solving the homogeneous system; it depends only on
    /// residues.
    tangent: Vec<Vec<BigInt>>,
    target: u32,
    nodes: u128,
    cap: u128,
    best: (u32, ChainMat),
}

impl<'a> LevelSearch<'a> {
    fn new(seq: &'a ReductionSequence, target: u32, cap: u128) -> Result<Self> {
        let active = active_steps(seq);
        let top = seq.steps_at(target + 1);
        let steps = (0..=target + 1)
            .map(|k| {
                let ring = seq.ring(k.max(1));
                top.iter().map(|c| c.iter().map(|f| f.map(|v| ring.reduce(v))).collect()).collect()
            })
            .collect();
        let base = lift_residue(&seq.ring(1), &seq.residue_graph());
        let mut search = LevelSearch { seq, active, steps, tangent: Vec::new(), target, nodes: 0, cap, best: (1, base.clone()) };
        let (a, _) = level_system(seq, &search.active, &search.steps[2], &base, 1)?;
        let f1 = seq.ring(1);
        let bg = seq.b() * seq.g();
        let kernel = left_kernel(&f1, &a);
        let field = seq.field();
        let projected = to_residue(seq.prime(), &kernel).select_cols(&(0..bg).collect::<Vec<_>>());
        search.tangent = Subspace::span(&field, &projected)
            .basis()
            .rows()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Ok(search)
    }

    /// True once some lift reaches the target level.
    fn explore(&mut self, x: &ChainMat, k: u32) -> Result<bool> {
        if k > self.best.0 {
            self.best = (k, x.clone());
        }
        if k >= self.target {
            return Ok(true);
        }
        let seq = self.seq;
        let (a, rhs) = level_system(seq, &self.active, &self.steps[k as usize + 1], x, k)?;
        let f1 = seq.ring(1);
        let Some(u) = solve_left(&f1, &a, &rhs) else {
            return Ok(false);
        };
        let (b, g) = (seq.b(), seq.g());
        let ring = seq.ring(k + 1);
        let pk = ring.prime_power(k);
        let mut coeffs = vec![0u64; self.tangent.len()];
        loop {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::EnumerationTooLarge { what: "lift candidates", count: self.nodes, cap: self.cap });
            }
            let mut delta = u[..b * g].to_vec();
            for (t, &c) in self.tangent.iter().zip(&coeffs) {
                for (dv, tv) in delta.iter_mut().zip(t) {
                    *dv += tv * c;
                }
            }
            let next = Mat::from_fn(b, g, |r, c| ring.reduce(&(&x[(r, c)] + &pk * &delta[r * g + c])));
            if self.explore(&next, k + 1)? {
                return Ok(true);
            }
            if !increment(&mut coeffs, seq.prime()) {
                return Ok(false);
            }
        }
    }

    fn witness(&self) -> Result<LiftWitness> {
        let (m, x) = &self.best;
        let w = build_witness(self.seq, &self.seq.ring(*m), &self.steps[*m as usize], x)?;
        check_lift(self.seq, &w.b_tilde, *m).map_err(|e| Error::InvariantViolation(format!("lift at level {m}: {e}")))?;
        Ok(w)
    }
}

/// The largest `m ≤ cap` at which the sequence lifts, with a witness, or
/// `Unbounded` when it lifts at `cap`.
///
/// Lifts are built one level at a time. The valid extensions of a lift form
/// an affine space over `F_p` whose direction, the filtered Hom of the
/// residue sequence, is the same at every node; the search branches over it
/// and backtracks when a lift has no extension. More than `search_cap`
/// visited lifts is an error.
pub fn max_lift_order(seq: &ReductionSequence, cap: u32, search_cap: u128) -> Result<(LiftOrder, LiftWitness)> {
    let cap = cap.max(1);
    let mut search = LevelSearch::new(seq, cap, search_cap)?;
    let base = search.best.1.clone();
    let reached = search.explore(&base, 1)?;
    let w = search.witness()?;
    Ok((if reached { LiftOrder::Unbounded } else { LiftOrder::Finite(w.level) }, w))
}

/// A lift at level `m`, found by the same search as [`max_lift_order`].
pub fn lift_at(seq: &ReductionSequence, m: u32, search_cap: u128) -> Result<Option<LiftWitness>> {
    if m == 0 {
        return Err(Error::InvalidFiltration("lift level must be positive".into()));
    }
    let mut search = LevelSearch::new(seq, m, search_cap)?;
    let base = search.best.1.clone();
    if search.explore(&base, 1)? {
        search.witness().map(Some)
    } else {
        Ok(None)
    }
}

/// Exhaustive search for a lift at level `m`.
///
/// Lifts are graphs `X ≡ X̄ (mod p)`; a lift valid at level `k + 1` reduces
/// to one valid at level `k`, so candidates at level `k + 1` are the
/// `X + p^k Δ` over the valid `X` of level `k`. Each candidate is checked
/// with [`check_lift`]. More than `cap` candidates is an error.
pub fn is_liftable(seq: &ReductionSequence, m: u32, cap: u128) -> Result<Option<LiftWitness>> {
    if m == 0 {
        return Err(Error::InvalidFiltration("lift level must be positive".into()));
    }
    let (b, g) = (seq.b(), seq.g());
    let p = seq.prime();
    let digits = b * g;
    let per_parent = (p as u128).checked_pow(digits as u32).unwrap_or(u128::MAX);
    let base = lift_residue(&seq.ring(1), &seq.residue_graph());
    let mut frontier = vec![base];
    let mut examined: u128 = 0;
    for k in 1..m {
        let ring = seq.ring(k + 1);
        let pk = ring.prime_power(k);
        let mut next = Vec::new();
        for x in &frontier {
            examined = examined.saturating_add(per_parent);
            if examined > cap {
                return Err(Error::EnumerationTooLarge { what: "lift candidates", count: examined, cap });
            }
            let mut delta = vec![0u64; digits];
            loop {
                let cand = Mat::from_fn(b, g, |a, c| ring.reduce(&(&x[(a, c)] + &pk * BigInt::from(delta[a * g + c]))));
                if check_lift(seq, &seq.graph(&ring, &cand), k + 1).is_ok() {
                    next.push(cand);
                }
                if !increment(&mut delta, p) {
                    break;
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        frontier = next;
    }
    let ring = seq.ring(m);
    let steps = seq.steps_at(m);
    build_witness(seq, &ring, &steps, &frontier[0]).map(Some)
}

/// Base-`p` counter; false after wrapping around.
fn increment(digits: &mut [u64], p: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}
