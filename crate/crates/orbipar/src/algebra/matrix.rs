//! Dense matrices over truncated power series and Laurent series.

use std::fmt;

use crate::algebra::field::Field;
use crate::algebra::laurent::Laurent;
use crate::algebra::linsolve::KMat;
use crate::algebra::series::Series;
use crate::error::{structural, OrbiparError, Result};

pub trait RingElem: Clone + fmt::Debug {
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
}

impl RingElem for Series {
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
}

impl RingElem for Laurent {
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type SMat = Matrix<Series>;
pub type LMat = Matrix<Laurent>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.data[i * self.cols + j]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Matrix<T> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Matrix<T>> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
            return Err(structural("matrix rows must be nonempty and rectangular"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn try_map<U: Clone>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        let data = self.data.iter().map(&mut f).collect::<Result<Vec<U>>>()?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn row_vec(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
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

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix<T>, zero: &T) -> Matrix<T> {
        Matrix::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                zero.clone()
            }
        })
    }
}

impl<T: RingElem> Matrix<T> {
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch in product");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.get(i, 0).r_mul(other.get(0, j));
            for k in 1..self.cols {
                acc = acc.r_add(&self.get(i, k).r_mul(other.get(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).r_add(other.get(i, j))
        })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).r_sub(other.get(i, j))
        })
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|x| x.r_neg())
    }

    /// Kronecker product; entry `(i1 r2 + i2, j1 c2 + j2)` is `a[i1][j1] b[i2][j2]`.
    pub fn kron(&self, other: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (i1, i2) = (i / other.rows, i % other.rows);
            let (j1, j2) = (j / other.cols, j % other.cols);
            self.get(i1, j1).r_mul(other.get(i2, j2))
        })
    }
}

/// Locator of the first disagreement between two matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryDiff {
    pub row: usize,
    pub col: usize,
    /// Coefficient index (series) or exponent (Laurent).
    pub index: i64,
}

impl fmt::Display for EntryDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entry ({}, {}) coefficient {}",
            self.row, self.col, self.index
        )
    }
}

pub fn smat_diff(a: &SMat, b: &SMat) -> Option<EntryDiff> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Some(EntryDiff {
            row: usize::MAX,
            col: usize::MAX,
            index: -1,
        });
    }
    for i in 0..a.rows {
        for j in 0..a.cols {
            let (x, y) = (a.get(i, j), b.get(i, j));
            let n = x.prec().min(y.prec());
            if let Some(k) = (0..n).find(|&k| x.coeff(k) != y.coeff(k)) {
                return Some(EntryDiff {
                    row: i,
                    col: j,
                    index: k as i64,
                });
            }
        }
    }
    None
}

pub fn lmat_diff(a: &LMat, b: &LMat) -> Option<EntryDiff> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Some(EntryDiff {
            row: usize::MAX,
            col: usize::MAX,
            index: i64::MIN,
        });
    }
    for i in 0..a.rows {
        for j in 0..a.cols {
            if let Some(k) = a.get(i, j).diff_index(b.get(i, j)) {
                return Some(EntryDiff {
                    row: i,
                    col: j,
                    index: k,
                });
            }
        }
    }
    None
}

/// Smallest common window `[floor, abs)` over all entries.
pub fn lmat_window(a: &LMat) -> (i64, i64) {
    let lo = a.entries().iter().map(|x| x.val_floor()).min().unwrap_or(0);
    let hi = a.entries().iter().map(|x| x.abs_prec()).min().unwrap_or(0);
    (lo, hi)
}

pub fn smat_identity(field: &Field, prec: usize, n: usize) -> SMat {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Series::one(field, prec)
        } else {
            Series::zero(field, prec)
        }
    })
}

pub fn smat_zero(field: &Field, prec: usize, rows: usize, cols: usize) -> SMat {
    Matrix::from_fn(rows, cols, |_, _| Series::zero(field, prec))
}

pub fn smat_constant(m: &KMat, prec: usize) -> SMat {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        Series::constant(m.field(), m.get(i, j), prec)
    })
}

pub fn lmat_identity(field: &Field, len: usize, n: usize) -> LMat {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Laurent::monomial(field, 1, 0, len)
        } else {
            Laurent::new(field, 0, vec![0; len])
        }
    })
}

pub fn smat_to_lmat(a: &SMat) -> LMat {
    a.map(Laurent::from_series)
}

pub fn smat_scale(a: &SMat, c: u32) -> SMat {
    a.map(|x| x.scale(c))
}

/// Constant terms.
pub fn smat_residue(a: &SMat) -> KMat {
    let field = a.get(0, 0).field().clone();
    KMat::from_fn(&field, a.rows, a.cols, |i, j| a.get(i, j).coeff(0))
}

pub fn smat_is_unimodular(a: &SMat) -> bool {
    a.is_square() && smat_residue(a).is_invertible()
}

/// Inverse over `k[[s]]`; requires an invertible residue matrix.
pub fn smat_inverse(a: &SMat) -> Result<SMat> {
    if !a.is_square() {
        return Err(structural("inverse of a non-square matrix"));
    }
    let n = a.rows;
    let field = a.get(0, 0).field().clone();
    let prec = a.get(0, 0).prec();
    let mut m = a.clone();
    let mut inv = smat_identity(&field, prec, n);
    for c in 0..n {
        let piv = (c..n).find(|&r| m.get(r, c).is_unit()).ok_or_else(|| {
            let v = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter_map(|(i, j)| a.get(i, j).valuation())
                .min()
                .unwrap_or(prec);
            OrbiparError::NotInvertible {
                valuation: v.max(1),
            }
        })?;
        m.swap_rows(piv, c);
        inv.swap_rows(piv, c);
        let pinv = m.get(c, c).inverse()?;
        for j in 0..n {
            let x = m.get(c, j).mul(&pinv);
            m.set(c, j, x);
            let y = inv.get(c, j).mul(&pinv);
            inv.set(c, j, y);
        }
        for r in 0..n {
            if r == c || m.get(r, c).is_zero() {
                continue;
            }
            let factor = m.get(r, c).clone();
            for j in 0..n {
                let x = m.get(r, j).sub(&factor.mul(m.get(c, j)));
                m.set(r, j, x);
                let y = inv.get(r, j).sub(&factor.mul(inv.get(c, j)));
                inv.set(r, j, y);
            }
        }
    }
    Ok(inv)
}

/// Gaussian elimination over the Laurent field with minimal-valuation pivots.
/// Returns the inverse and the determinant.
pub fn lmat_inverse_det(a: &LMat) -> Result<(LMat, Laurent)> {
    if !a.is_square() {
        return Err(structural("inverse of a non-square matrix"));
    }
    let n = a.rows;
    let field = a.get(0, 0).field().clone();
    let len = a.entries().iter().map(|x| x.prec()).max().unwrap_or(1);
    let mut m = a.clone();
    let mut inv = lmat_identity(&field, len, n);
    let mut det = Laurent::monomial(&field, 1, 0, len);
    for c in 0..n {
        let piv = (c..n)
            .filter_map(|r| m.get(r, c).valuation().map(|v| (v, r)))
            .min()
            .map(|(_, r)| r)
            .ok_or_else(|| OrbiparError::Domain("matrix is singular on its window".into()))?;
        if piv != c {
            m.swap_rows(piv, c);
            inv.swap_rows(piv, c);
            det = det.neg();
        }
        det = det.mul(m.get(c, c));
        let pinv = m.get(c, c).inverse()?;
        for j in 0..n {
            let x = m.get(c, j).mul(&pinv);
            m.set(c, j, x);
            let y = inv.get(c, j).mul(&pinv);
            inv.set(c, j, y);
        }
        for r in 0..n {
            // an entry that vanishes on its window still carries its
            // precision into the row operation
            if r == c {
                continue;
            }
            let factor = m.get(r, c).clone();
            for j in 0..n {
                let x = m.get(r, j).sub(&factor.mul(m.get(c, j)));
                m.set(r, j, x);
                let y = inv.get(r, j).sub(&factor.mul(inv.get(c, j)));
                inv.set(r, j, y);
            }
        }
    }
    Ok((inv, det))
}

pub fn lmat_inverse(a: &LMat) -> Result<LMat> {
    lmat_inverse_det(a).map(|(inv, _)| inv)
}

/// Integral entries as series of the given precision (unknown tail coefficients become zero).
pub fn lmat_to_smat(a: &LMat, prec: usize) -> Result<SMat> {
    a.try_map(|x| x.to_series_lossy(prec))
}

/// Minimum valuation over all entries (`None` if all vanish).
pub fn lmat_min_valuation(a: &LMat) -> Option<i64> {
    a.entries().iter().filter_map(|x| x.valuation()).min()
}
