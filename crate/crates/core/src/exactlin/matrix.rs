use std::fmt;

use super::echelon::Echelon;
use super::field::Field;

/// A dense row-major matrix over `K`.
#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

/// Returned by [`Matrix::solve`] when `a x = b` is inconsistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("the linear system has no solution")]
pub struct NoSolution;

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<K: Field> {
    pub matrix: Matrix<K>,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.spec())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| self.field.render(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<K: Field> Matrix<K> {
    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_vec(field: &K, rows: usize, cols: usize, data: Vec<K::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &K, cols: usize, rows: Vec<Vec<K::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Self::from_vec(field, n, cols, data)
    }

    pub fn from_i64(field: &K, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_i64(v)).collect::<Vec<_>>()
            })
            .collect();
        Self::from_rows(field, cols, data)
    }

    pub fn from_fn(field: &K, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(field, rows, cols, data)
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[K::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [K::Elem] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn col(&self, j: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if !f.is_zero(a) {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Self::from_vec(&self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in difference");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Self::from_vec(&self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self::from_vec(&self.field, self.rows, self.cols, data)
    }

    /// Kronecker product: block `(i, j)` is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !f.is_zero(b) {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Self::from_vec(&self.field, self.rows, cols, data)
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::from_vec(&self.field, self.rows + other.rows, self.cols, data)
    }

    fn echelon(&self) -> Echelon<K> {
        let mut e = Echelon::new(self.field.clone(), self.cols);
        for i in 0..self.rows {
            if e.rank() == self.cols {
                break;
            }
            e.insert(self.row(i).to_vec());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn rref(&self) -> Rref<K> {
        let pivots = self.echelon().into_reduced();
        let rank = pivots.len();
        let pivot_cols = pivots.iter().map(|p| p.col).collect();
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for p in pivots {
            data.extend(p.row);
        }
        data.resize(self.rows * self.cols, self.field.zero());
        Rref {
            matrix: Self::from_vec(&self.field, self.rows, self.cols, data),
            rank,
            pivot_cols,
        }
    }

    /// Basis of the right null space, one vector per row.
    pub fn kernel_rows(&self) -> Vec<Vec<K::Elem>> {
        self.kernel_with_free_cols().0
    }

    /// Kernel basis rows plus the free columns: row `i` is one at
    /// `free[i]` and zero at every other free column.
    pub fn kernel_with_free_cols(&self) -> (Vec<Vec<K::Elem>>, Vec<usize>) {
        let f = &self.field;
        let pivots = self.echelon().into_reduced();
        let mut is_pivot = vec![false; self.cols];
        for p in &pivots {
            is_pivot[p.col] = true;
        }
        let free_cols: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Vec::with_capacity(free_cols.len());
        for &free in &free_cols {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for p in &pivots {
                if p.col < free && free < p.end {
                    v[p.col] = f.neg(&p.row[free]);
                }
            }
            out.push(v);
        }
        (out, free_cols)
    }

    /// Basis of the right null space as the columns of the result.
    pub fn kernel_basis(&self) -> Self {
        let rows = self.kernel_rows();
        Self::from_rows(&self.field, self.cols, rows).transpose_or_empty(self.cols)
    }

    fn transpose_or_empty(self, n: usize) -> Self {
        if self.rows == 0 {
            Self::zeros(&self.field, n, 0)
        } else {
            self.transpose()
        }
    }

    /// Some `x` with `self * x == b`, free variables set to zero.
    pub fn solve(&self, b: &Self) -> Result<Self, NoSolution> {
        assert_eq!(self.rows, b.rows, "dimension mismatch in solve");
        let f = &self.field;
        let aug = self.hstack(b);
        let pivots = aug.echelon().into_reduced();
        let mut x = Self::zeros(f, self.cols, b.cols);
        for p in &pivots {
            if p.col >= self.cols {
                return Err(NoSolution);
            }
            for k in 0..b.cols {
                x.set(p.col, k, p.row[self.cols + k].clone());
            }
        }
        Ok(x)
    }
}
