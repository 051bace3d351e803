use std::fmt;
use std::ops::{Index, IndexMut};

use super::Ring;

/// Dense row-major matrix. Arithmetic goes through a [`Ring`] context, so the
/// same container serves `Q`, `F_p` and `Z/p^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Mat { rows, cols, data: vec![value; rows * cols] }
    }

    /// Builds a matrix from row vectors; `cols` is needed for the empty case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[E]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn push_row(&mut self, row: Vec<E>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> {
        self.data.iter()
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                acc = ring.mul_add(&acc, &self[(i, k)], &rhs[(k, j)]);
            }
            acc
        })
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| ring.add(&self[(i, j)], &rhs[(i, j)]))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| ring.sub(&self[(i, j)], &rhs[(i, j)]))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(c, x))
    }

    /// Row vector times matrix.
    pub fn vec_mul<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = ring.zero();
                for (k, vk) in v.iter().enumerate() {
                    acc = ring.mul_add(&acc, vk, &self[(k, j)]);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    /// `row[dst] += c * row[src]`
    pub(crate) fn add_row_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let v = ring.mul_add(&self[(dst, j)], c, &self[(src, j)]);
            self[(dst, j)] = v;
        }
    }

    /// `col[dst] += c * col[src]`
    pub(crate) fn add_col_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let v = ring.mul_add(&self[(i, dst)], c, &self[(i, src)]);
            self[(i, dst)] = v;
        }
    }

    pub(crate) fn scale_row<R: Ring<Elem = E>>(&mut self, ring: &R, i: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.mul(c, &self[(i, j)]);
            self[(i, j)] = v;
        }
    }
}

impl<E> Index<(usize, usize)> for Mat<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Mat<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<E: fmt::Debug> fmt::Debug for Mat<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}
