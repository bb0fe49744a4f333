//! Dense matrices over the base field and linear solving.

use std::fmt;

use crate::algebra::field::Field;
use crate::error::{structural, OrbiparError, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct KMat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for KMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KMat{:?}", self.to_rows())
    }
}

/// Solution set of `M x = rhs`: a particular solution plus a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
    pub rank: usize,
}

impl KMat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> KMat {
        KMat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> KMat {
        KMat::from_fn(field, n, n, |i, j| u32::from(i == j))
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> KMat {
        let mut m = KMat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<KMat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(structural("matrix rows must be rectangular"));
        }
        if rows.iter().flatten().any(|&x| !field.is_element(x)) {
            return Err(structural(format!("entry outside {field}")));
        }
        Ok(KMat::from_fn(field, r, c, |i, j| rows[i][j]))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn mul(&self, other: &KMat) -> KMat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch in product");
        let f = &self.field;
        let mut out = KMat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn add(&self, other: &KMat) -> KMat {
        let f = &self.field;
        KMat::from_fn(f, self.rows, self.cols, |i, j| {
            f.add(self.get(i, j), other.get(i, j))
        })
    }

    pub fn sub(&self, other: &KMat) -> KMat {
        let f = &self.field;
        KMat::from_fn(f, self.rows, self.cols, |i, j| {
            f.sub(self.get(i, j), other.get(i, j))
        })
    }

    pub fn scale(&self, c: u32) -> KMat {
        let f = &self.field;
        KMat::from_fn(f, self.rows, self.cols, |i, j| f.mul(self.get(i, j), c))
    }

    pub fn transpose(&self) -> KMat {
        KMat::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn pow(&self, mut e: u64) -> KMat {
        let mut acc = KMat::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &KMat) -> KMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        KMat {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduced row echelon form in place; returns pivot columns. Pivots are
    /// chosen in the leftmost available column, at the lowest row index.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, row * self.cols + j);
                }
            }
            let inv = f.inv(self.get(row, col));
            for j in col..self.cols {
                let v = f.mul(self.get(row, j), inv);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(self.get(r, j), f.mul(factor, self.get(row, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<KMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = KMat::from_fn(&self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else {
                u32::from(j - n == i)
            }
        });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(KMat::from_fn(&self.field, n, n, |i, j| aug.get(i, n + j)))
    }

    pub fn det(&self) -> u32 {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let p = m.get(c, c);
            det = f.mul(det, p);
            let pinv = f.inv(p);
            for r in c + 1..n {
                let factor = f.mul(m.get(r, c), pinv);
                if factor != 0 {
                    for j in c..n {
                        let v = f.sub(m.get(r, j), f.mul(factor, m.get(c, j)));
                        m.set(r, j, v);
                    }
                }
            }
        }
        det
    }
}

/// Solves `M x = rhs` over the base field.
///
/// The particular solution sets every free variable to zero; the kernel basis
/// has one vector per free column, with that variable equal to one.
pub fn solve_linear(m: &KMat, rhs: &[u32]) -> Result<Solution> {
    if rhs.len() != m.rows {
        return Err(structural(format!(
            "right-hand side has length {} for a matrix with {} rows",
            rhs.len(),
            m.rows
        )));
    }
    let f = m.field.clone();
    let n = m.cols;
    let mut aug = KMat::from_fn(
        &f,
        m.rows,
        n + 1,
        |i, j| if j < n { m.get(i, j) } else { rhs[i] },
    );
    let pivots = aug.rref();
    let rank = pivots.iter().filter(|&&c| c < n).count();
    if pivots.contains(&n) {
        return Err(OrbiparError::NoSolution {
            rank,
            augmented_rank: rank + 1,
        });
    }
    let mut particular = vec![0u32; n];
    for (row, &c) in pivots.iter().enumerate() {
        particular[c] = aug.get(row, n);
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(aug.get(row, free));
        }
        kernel.push(v);
    }
    Ok(Solution {
        particular,
        kernel,
        rank,
    })
}

/// Basis of the kernel of `m`.
pub fn kernel(m: &KMat) -> Vec<Vec<u32>> {
    solve_linear(m, &vec![0; m.rows])
        .map(|s| s.kernel)
        .unwrap_or_default()
}

/// Matrix of a k-linear map `k^n -> k^m`, obtained by applying it to unit vectors.
pub fn linearize(field: &Field, n: usize, m: usize, mut f: impl FnMut(&[u32]) -> Vec<u32>) -> KMat {
    let mut out = KMat::zeros(field, m, n);
    let mut unit = vec![0u32; n];
    for j in 0..n {
        unit[j] = 1;
        let col = f(&unit);
        debug_assert_eq!(col.len(), m);
        for (i, &v) in col.iter().enumerate() {
            out.set(i, j, v);
        }
        unit[j] = 0;
    }
    out
}
