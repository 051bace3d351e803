//! Elimination over valuation rings by minimal-valuation pivoting.
//!
//! Choosing the pivot of least valuation makes every elimination multiplier
//! integral, so all transformations stay invertible over `O` (or `Z/p^m`).

use num_bigint::BigInt;

use super::{ChainRing, Mat, Ring, Valuation, ValuationRing};

/// Result of [`echelon_dvr`]: `e = u * a` with `u` invertible over the ring.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub u: Mat<E>,
    pub e: Mat<E>,
    /// `(row, column)` of each pivot, rows `0..rank` in order.
    pub pivots: Vec<(usize, usize)>,
}

impl<E: Clone> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of the echelon form: a basis of the row module.
    pub fn basis_rows(&self) -> Mat<E> {
        let keep: Vec<usize> = (0..self.rank()).collect();
        self.e.select_rows(&keep)
    }
}

/// Row echelon form using only row operations over the valuation ring.
/// Columns are processed left to right; each pivot has minimal valuation in
/// its column below the current row.
pub fn echelon_dvr<R: ValuationRing>(ring: &R, a: &Mat<R::Elem>) -> Echelon<R::Elem> {
    let mut e = a.clone();
    let mut u = Mat::identity(ring, a.nrows());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..e.ncols() {
        if r == e.nrows() {
            break;
        }
        let (best, val) = (r..e.nrows())
            .map(|i| (i, ring.valuation(&e[(i, c)])))
            .min_by_key(|&(i, v)| (v, i))
            .expect("nonempty row range");
        if val.is_infinite() {
            continue;
        }
        e.swap_rows(r, best);
        u.swap_rows(r, best);
        for i in r + 1..e.nrows() {
            if ring.is_zero(&e[(i, c)]) {
                continue;
            }
            let f = ring.neg(&ring.quotient(&e[(i, c)], &e[(r, c)]));
            e.add_row_multiple(ring, i, r, &f);
            u.add_row_multiple(ring, i, r, &f);
        }
        pivots.push((r, c));
        r += 1;
    }
    Echelon { u, e, pivots }
}

/// Smith form `u * a * v = diag(...)` with diagonal valuations
/// non-decreasing.
#[derive(Clone, Debug)]
pub struct SmithForm<E> {
    pub u: Mat<E>,
    pub u_inv: Mat<E>,
    pub v: Mat<E>,
    pub v_inv: Mat<E>,
    /// The `min(rows, cols)` diagonal entries (zeros included).
    pub diagonal: Vec<E>,
    pub valuations: Vec<Valuation>,
}

impl<E> SmithForm<E> {
    pub fn rank(&self) -> usize {
        self.valuations.iter().filter(|v| !v.is_infinite()).count()
    }
}

pub fn smith<R: ValuationRing>(ring: &R, a: &Mat<R::Elem>) -> SmithForm<R::Elem> {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = Mat::identity(ring, rows);
    let mut u_inv = Mat::identity(ring, rows);
    let mut v = Mat::identity(ring, cols);
    let mut v_inv = Mat::identity(ring, cols);
    let k = rows.min(cols);
    for t in 0..k {
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let val = ring.valuation(&d[(i, j)]);
                if !val.is_infinite() && best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);
        let pivot = d[(t, t)].clone();
        for i in t + 1..rows {
            if ring.is_zero(&d[(i, t)]) {
                continue;
            }
            let f = ring.neg(&ring.quotient(&d[(i, t)], &pivot));
            d.add_row_multiple(ring, i, t, &f);
            u.add_row_multiple(ring, i, t, &f);
            u_inv.add_col_multiple(ring, t, i, &ring.neg(&f));
        }
        for j in t + 1..cols {
            if ring.is_zero(&d[(t, j)]) {
                continue;
            }
            let f = ring.neg(&ring.quotient(&d[(t, j)], &pivot));
            d.add_col_multiple(ring, j, t, &f);
            v.add_col_multiple(ring, j, t, &f);
            v_inv.add_row_multiple(ring, t, j, &ring.neg(&f));
        }
    }
    let diagonal: Vec<R::Elem> = (0..k).map(|t| d[(t, t)].clone()).collect();
    let valuations = diagonal.iter().map(|x| ring.valuation(x)).collect();
    SmithForm { u, u_inv, v, v_inv, diagonal, valuations }
}

/// Elementary divisor exponents of a matrix over `Z/p^m`, one per diagonal
/// slot; `Infinity` marks a zero diagonal entry.
pub fn smith_chain(ring: &ChainRing, a: &Mat<BigInt>) -> Vec<Valuation> {
    smith(ring, a).valuations
}

/// Generators (rows) of `{c : c * a = 0}` over `Z/p^m`.
pub fn left_kernel(ring: &ChainRing, a: &Mat<BigInt>) -> Mat<BigInt> {
    let m = ring.level();
    let sf = smith(ring, a);
    let mut out = Mat::zeros(ring, 0, a.nrows());
    for t in 0..a.nrows() {
        let e = sf.valuations.get(t).map_or(m, |v| v.capped(m));
        if e == 0 {
            continue;
        }
        let scale = ring.prime_power(m - e);
        out.push_row(sf.u.row(t).iter().map(|x| ring.mul(&scale, x)).collect());
    }
    out
}

/// Some `c` with `c * g = x` over `Z/p^m`, if one exists.
pub fn solve_left(ring: &ChainRing, g: &Mat<BigInt>, x: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(x.len(), g.ncols());
    let sf = smith(ring, g);
    let y = sf.v.vec_mul(ring, x);
    let mut z = vec![ring.zero(); g.nrows()];
    for (t, yt) in y.iter().enumerate() {
        match sf.diagonal.get(t) {
            Some(s) if !ring.is_zero(s) => {
                if ring.valuation(yt) < ring.valuation(s) {
                    return None;
                }
                z[t] = ring.quotient(yt, s);
            }
            _ => {
                if !ring.is_zero(yt) {
                    return None;
                }
            }
        }
    }
    Some(sf.u.vec_mul(ring, &z))
}

/// Inverse of a square matrix over `Z/p^m`, if its determinant is a unit.
pub fn chain_inverse(ring: &ChainRing, a: &Mat<BigInt>) -> Option<Mat<BigInt>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "inverse of a non-square matrix");
    let sf = smith(ring, a);
    let mut dinv = Mat::zeros(ring, n, n);
    for (t, d) in sf.diagonal.iter().enumerate() {
        dinv[(t, t)] = ring.unit_inverse(d)?;
    }
    Some(sf.v.mul(ring, &dinv).mul(ring, &sf.u))
}

/// A submodule of `(Z/p^m)^n`, stored by a minimal generating set of the form
/// `p^e_t * w_t` with `{w_t}` part of a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    ambient: usize,
    gens: Mat<BigInt>,
    exponents: Vec<u32>,
}

impl Submodule {
    /// Row module of `gens`.
    pub fn new(ring: &ChainRing, gens: &Mat<BigInt>) -> Self {
        let n = gens.ncols();
        let m = ring.level();
        let sf = smith(ring, gens);
        let mut out = Mat::zeros(ring, 0, n);
        let mut exponents = Vec::new();
        for (t, val) in sf.valuations.iter().enumerate() {
            let e = val.capped(m);
            if e < m {
                let s = ring.prime_power(e);
                out.push_row(sf.v_inv.row(t).iter().map(|x| ring.mul(&s, x)).collect());
                exponents.push(e);
            }
        }
        Submodule { ambient: n, gens: out, exponents }
    }

    pub fn zero(ring: &ChainRing, n: usize) -> Self {
        Submodule { ambient: n, gens: Mat::zeros(ring, 0, n), exponents: vec![] }
    }

    pub fn full(ring: &ChainRing, n: usize) -> Self {
        Submodule { ambient: n, gens: Mat::identity(ring, n), exponents: vec![0; n] }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &Mat<BigInt> {
        &self.gens
    }

    /// Elementary divisor exponents `e_t` of the generators, so that the
    /// module is `⊕ p^e_t Z/p^m`.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of generators in the minimal generating set.
    pub fn num_generators(&self) -> usize {
        self.gens.nrows()
    }

    /// `log_p` of the module's cardinality.
    pub fn log_size(&self, ring: &ChainRing) -> u32 {
        self.exponents.iter().map(|e| ring.level() - e).sum()
    }

    /// A direct summand (free with free quotient).
    pub fn is_saturated(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn contains(&self, ring: &ChainRing, x: &[BigInt]) -> bool {
        self.coefficients(ring, x).is_some()
    }

    /// Coefficients with respect to the minimal generators.
    pub fn coefficients(&self, ring: &ChainRing, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if x.iter().all(|v| ring.is_zero(v)) {
            return Some(vec![ring.zero(); self.gens.nrows()]);
        }
        if self.gens.nrows() == 0 {
            return None;
        }
        solve_left(ring, &self.gens, x)
    }

    pub fn is_submodule_of(&self, ring: &ChainRing, other: &Submodule) -> bool {
        self.gens.rows().all(|r| other.contains(ring, r))
    }

    pub fn same_as(&self, ring: &ChainRing, other: &Submodule) -> bool {
        self.is_submodule_of(ring, other) && other.is_submodule_of(ring, self)
    }

    pub fn sum(&self, ring: &ChainRing, other: &Submodule) -> Submodule {
        Submodule::new(ring, &self.gens.vstack(&other.gens))
    }

    pub fn scale(&self, ring: &ChainRing, c: &BigInt) -> Submodule {
        Submodule::new(ring, &self.gens.scale(ring, c))
    }

    pub fn intersect(&self, ring: &ChainRing, other: &Submodule) -> Submodule {
        let n = self.ambient;
        if self.gens.nrows() == 0 || other.gens.nrows() == 0 {
            return Submodule::zero(ring, n);
        }
        let neg = other.gens.map(|x| ring.neg(x));
        let kernel = left_kernel(ring, &self.gens.vstack(&neg));
        if kernel.nrows() == 0 {
            return Submodule::zero(ring, n);
        }
        let a_part: Vec<usize> = (0..self.gens.nrows()).collect();
        let coeffs = kernel.select_cols(&a_part);
        Submodule::new(ring, &coeffs.mul(ring, &self.gens))
    }

    /// Image under `Z/p^m -> Z/p^lower`, as a submodule at the lower level.
    pub fn truncate(&self, ring: &ChainRing, lower: u32) -> Submodule {
        let low = ChainRing::new(ring.prime(), lower);
        Submodule::new(&low, &self.gens.map(|x| ring.truncate(x, lower)))
    }
}
