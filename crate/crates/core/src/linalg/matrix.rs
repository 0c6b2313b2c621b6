use std::fmt;
use std::ops::{Index, IndexMut};

use super::rational::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Mat { rows, cols, data }
    }

    /// Build from integer rows. All rows must have equal length.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().map(|&x| Rational::from_int(x)));
        }
        Mat { rows: r, cols: c, data }
    }

    /// Build from rows of rationals; `cols` is needed to describe matrices without rows.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Option<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return None;
            }
            data.extend(row);
        }
        Some(Mat { rows: r, cols, data })
    }

    /// Matrix whose columns are the given vectors, all of length `len`.
    pub fn from_columns(columns: &[Vec<Rational>], len: usize) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), len);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Rational) -> Mat {
        let data = self.data.iter().map(|a| a * s).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn add_scaled(&mut self, other: &Mat, s: &Rational) {
        assert_eq!(self.shape(), other.shape());
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += &(b * s);
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Mat {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        a.hstack(b).vstack(&c.hstack(d))
    }

    pub fn block_diag(a: &Mat, b: &Mat) -> Mat {
        Self::block2(a, &Self::zeros(a.rows, b.cols), &Self::zeros(b.rows, a.cols), b)
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (ii, i) in rows.clone().enumerate() {
            for (jj, j) in cols.clone().enumerate() {
                m[(ii, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend(self.row(i).iter().cloned());
        }
        Mat { rows: rows.len(), cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        let cols = m.cols;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            let mut support = Vec::new();
            for j in c..cols {
                let idx = r * cols + j;
                if !m.data[idx].is_zero() {
                    m.data[idx] = &m.data[idx] * &inv;
                    support.push(j);
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for &j in &support {
                    let delta = &factor * &m.data[r * cols + j];
                    m.data[i * cols + j] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{v : A v = 0}` as columns.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (k, &p) in pivots.iter().enumerate() {
                let x = &matrix[(k, free)];
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// `(rank, nullspace basis)`.
    pub fn rank_nullspace(&self) -> (usize, Vec<Vec<Rational>>) {
        let ns = self.nullspace();
        (self.cols - ns.len(), ns)
    }

    /// Kernel as a matrix whose columns form a basis.
    pub fn kernel(&self) -> Mat {
        Mat::from_columns(&self.nullspace(), self.cols)
    }

    /// Column space basis: the pivot columns of `self`.
    pub fn image(&self) -> Mat {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    /// Some `x` with `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let aug = self.hstack(&Mat::from_columns(&[b.to_vec()], self.rows));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(k, self.cols)].clone();
        }
        Some(x)
    }

    /// Solve `A X = B` column by column.
    pub fn solve_matrix(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(b.rows, self.rows);
        let aug = self.hstack(b);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (k, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = matrix[(k, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        // A X = I is consistent exactly when A is invertible
        self.solve_matrix(&Mat::identity(self.rows))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Row-space canonical form: the nonzero rows of the RREF.
    pub fn row_canonical(&self) -> Mat {
        let Rref { matrix, pivots } = self.rref();
        matrix.submatrix(0..pivots.len(), 0..self.cols)
    }

    /// Indices of unit vectors completing the column span of `self` to the
    /// whole space. `self` need not have independent columns.
    pub fn complement_indices(&self) -> Vec<usize> {
        let pivots = self.transpose().rref().pivots;
        let mut is_pivot = vec![false; self.rows];
        for p in pivots {
            is_pivot[p] = true;
        }
        (0..self.rows).filter(|&i| !is_pivot[i]).collect()
    }

    pub fn unit_columns(n: usize, idx: &[usize]) -> Mat {
        let mut m = Mat::zeros(n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m[(i, j)] = Rational::one();
        }
        m
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Column span basis of `a + b` (both given as column matrices with the same row count).
pub fn span_sum(a: &Mat, b: &Mat) -> Mat {
    a.hstack(b).image()
}

/// Basis of the intersection of two column spans.
pub fn span_intersection(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    if a.cols() == 0 || b.cols() == 0 {
        return Mat::zeros(n, 0);
    }
    let ns = a.hstack(&b.scale(&Rational::from_int(-1))).nullspace();
    let vecs: Vec<Vec<Rational>> = ns.iter().map(|v| a.mul_vec(&v[..a.cols()])).collect();
    Mat::from_columns(&vecs, n).image()
}

/// Basis of `{v : f v ∈ span(w)}`.
pub fn preimage(f: &Mat, w: &Mat) -> Mat {
    assert_eq!(f.rows(), w.rows());
    let n = f.cols();
    let ns = f.hstack(&w.scale(&Rational::from_int(-1))).nullspace();
    let vecs: Vec<Vec<Rational>> = ns.iter().map(|v| v[..n].to_vec()).collect();
    Mat::from_columns(&vecs, n).image()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn rank_nullspace_examples() {
        let (r, ns) = Mat::identity(2).rank_nullspace();
        assert_eq!((r, ns.len()), (2, 0));
        let (r, ns) = Mat::zeros(2, 2).rank_nullspace();
        assert_eq!((r, ns.len()), (0, 2));
        let (r, ns) = Mat::from_i64(&[&[1, 2], &[2, 4]]).rank_nullspace();
        assert_eq!(r, 1);
        assert_eq!(ns, vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![q(5), Rational::from_frac(-1, 3)];
        assert_eq!(Mat::identity(2).solve(&b), Some(b.clone()));
        assert_eq!(Mat::zeros(2, 2).solve(&[q(1), q(0)]), None);
        let a = Mat::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.solve(&[q(3), q(1)]), Some(vec![q(2), q(1)]));
    }

    #[test]
    fn inverse_and_products() {
        let a = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn subspace_operations() {
        let a = Mat::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Mat::from_i64(&[&[0, 1], &[1, 0], &[0, 1]]);
        assert_eq!(span_intersection(&a, &b).cols(), 1);
        assert_eq!(span_sum(&a, &b).cols(), 3);
        let f = Mat::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let w = Mat::from_i64(&[&[0], &[1], &[0]]);
        // preimage of the second axis under a projection killing it
        assert_eq!(preimage(&f, &w).cols(), 1);
        assert_eq!(Mat::from_i64(&[&[1], &[1], &[0]]).complement_indices(), vec![1, 2]);
    }

    #[test]
    fn empty_shapes_behave() {
        let e = Mat::zeros(0, 3);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.nullspace().len(), 3);
        let f = Mat::zeros(3, 0);
        assert_eq!(f.kernel().shape(), (0, 0));
        assert_eq!(Mat::zeros(2, 0).mul(&Mat::zeros(0, 4)), Mat::zeros(2, 4));
    }
}
