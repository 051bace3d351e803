//! Linear algebra over a field: reduced row echelon forms and the canonical
//! subspace representative built on them.

use super::{Field, Mat};

/// Reduced row echelon form. Returns the nonzero rows only together with the
/// strictly increasing pivot columns.
pub fn rref<F: Field>(field: &F, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.ncols() {
        if r == m.nrows() {
            break;
        }
        let Some(pr) = (r..m.nrows()).find(|&i| !field.is_zero(&m[(i, c)])) else {
            continue;
        };
        m.swap_rows(r, pr);
        let inv = field.inv(&m[(r, c)]).expect("nonzero pivot");
        m.scale_row(field, r, &inv);
        for i in 0..m.nrows() {
            if i != r && !field.is_zero(&m[(i, c)]) {
                let f = field.neg(&m[(i, c)]);
                m.add_row_multiple(field, i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    (m.select_rows(&keep), pivots)
}

pub fn rank<F: Field>(field: &F, a: &Mat<F::Elem>) -> usize {
    rref(field, a).1.len()
}

pub fn determinant<F: Field>(field: &F, a: &Mat<F::Elem>) -> F::Elem {
    assert_eq!(a.nrows(), a.ncols(), "determinant of a non-square matrix");
    let mut m = a.clone();
    let n = m.nrows();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !field.is_zero(&m[(i, c)])) else {
            return field.zero();
        };
        if pr != c {
            m.swap_rows(pr, c);
            det = field.neg(&det);
        }
        let piv = m[(c, c)].clone();
        det = field.mul(&det, &piv);
        let inv = field.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            if !field.is_zero(&m[(i, c)]) {
                let f = field.neg(&field.mul(&m[(i, c)], &inv));
                m.add_row_multiple(field, i, c, &f);
            }
        }
    }
    det
}

pub fn inverse<F: Field>(field: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "inverse of a non-square matrix");
    let aug = a.hstack(&Mat::identity(field, n));
    let (r, pivots) = rref(field, &aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(r.select_cols(&cols))
}

/// Solves `x * A = b` for a row vector `x`, if solvable.
pub fn solve_row<F: Field>(field: &F, a: &Mat<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    assert_eq!(b.len(), a.ncols());
    // Transpose the problem: A^T x^T = b^T, augmented.
    let at = a.transpose();
    let bcol = Mat::from_fn(b.len(), 1, |i, _| b[i].clone());
    let (r, pivots) = rref(field, &at.hstack(&bcol));
    let k = a.nrows();
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![field.zero(); k];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r[(row, k)].clone();
    }
    Some(x)
}

/// A subspace of `F^n` stored as its reduced row echelon basis, which is the
/// canonical representative: two subspaces are equal iff their bases are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    basis: Mat<E>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subspace<E> {
    /// Span of the rows of `gens`.
    pub fn span<F: Field<Elem = E>>(field: &F, gens: &Mat<E>) -> Self {
        let (basis, pivots) = rref(field, gens);
        Subspace { basis, pivots }
    }

    pub fn zero<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Subspace { basis: Mat::zeros(field, 0, n), pivots: vec![] }
    }

    pub fn full<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Subspace { basis: Mat::identity(field, n), pivots: (0..n).collect() }
    }

    /// Wraps a matrix that is already in reduced row echelon form.
    pub(crate) fn from_rref(basis: Mat<E>, pivots: Vec<usize>) -> Self {
        Subspace { basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Mat<E> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> bool {
        solve_row(field, &self.basis, v).is_some()
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> bool {
        self.basis.rows().all(|r| other.contains_vector(field, r))
    }

    pub fn sum<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        Self::span(field, &self.basis.vstack(&other.basis))
    }

    /// Intersection through the kernel of `[A; -B]`.
    pub fn intersect<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.ambient_dim();
        if self.is_zero() || other.is_zero() {
            return Self::zero(field, n);
        }
        let neg_b = other.basis.map(|x| field.neg(x));
        let stacked = self.basis.vstack(&neg_b);
        let kernel = left_null_space(field, &stacked);
        let a_part: Vec<usize> = (0..self.dim()).collect();
        let coeffs = kernel.select_cols(&a_part);
        Self::span(field, &coeffs.mul(field, &self.basis))
    }

    /// Dimension of the intersection, via `dim A + dim B - dim(A + B)`.
    pub fn intersection_dim<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> usize {
        if self.is_zero() || other.is_zero() {
            return 0;
        }
        let s = rank(field, &self.basis.vstack(&other.basis));
        self.dim() + other.dim() - s
    }

    /// Image under the linear map `v -> v * T`.
    pub fn map<F: Field<Elem = E>>(&self, field: &F, t: &Mat<E>) -> Self {
        assert_eq!(t.nrows(), self.ambient_dim());
        if self.is_zero() {
            return Self::zero(field, t.ncols());
        }
        Self::span(field, &self.basis.mul(field, t))
    }

    /// Coordinates of `v` with respect to the stored basis.
    pub fn coordinates<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Option<Vec<E>> {
        solve_row(field, &self.basis, v)
    }
}

impl<E: std::fmt::Debug> std::fmt::Debug for Subspace<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "span{:?}", self.basis)
    }
}

/// Basis (rows) of `{x : x * A = 0}`.
pub(crate) fn left_null_space<F: Field>(field: &F, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    // x A = 0  <=>  A^T x^T = 0: right null space of A^T from its rref.
    let at = a.transpose();
    let k = at.ncols();
    let (r, pivots) = rref(field, &at);
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    let rows = free
        .iter()
        .map(|&fc| {
            let mut x = vec![field.zero(); k];
            x[fc] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = field.neg(&r[(row, fc)]);
            }
            x
        })
        .collect();
    Mat::from_rows(k, rows)
}
