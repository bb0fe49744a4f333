//! Smith normal form over the truncated discrete valuation ring `k[[s]]/(s^N)`.

use crate::algebra::matrix::{smat_identity, smat_inverse, Matrix, SMat};
use crate::algebra::series::Series;
use crate::error::{structural, Result};

/// `N = U diag(s^d_i) W` with `U`, `W` unimodular and `d` non-decreasing.
/// Entries of `d` equal to the precision stand for zero divisors.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: SMat,
    pub d: Vec<usize>,
    pub w: SMat,
}

impl Smith {
    pub fn diag(&self) -> SMat {
        let f = self.u.get(0, 0).field().clone();
        let prec = self.u.get(0, 0).prec();
        let n = self.d.len();
        Matrix::from_fn(n, n, |i, j| {
            if i == j && self.d[i] < prec {
                Series::monomial(&f, 1, self.d[i], prec)
            } else {
                Series::zero(&f, prec)
            }
        })
    }

    pub fn is_unimodular(&self) -> bool {
        self.d.iter().all(|&v| v == 0)
    }
}

/// Pivots on an entry of least valuation (first in row-major order), clears
/// its row and column, and recurses on the lower-right block.
pub fn smith_form(a: &SMat) -> Result<Smith> {
    if !a.is_square() || a.rows() == 0 {
        return Err(structural("Smith form needs a non-empty square matrix"));
    }
    let n = a.rows();
    let field = a.get(0, 0).field().clone();
    let prec = a.get(0, 0).prec();
    let mut m = a.clone();
    let mut left = smat_identity(&field, prec, n);
    let mut right = smat_identity(&field, prec, n);
    let mut d = Vec::with_capacity(n);
    let mut units = Vec::with_capacity(n);
    for k in 0..n {
        let best = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| m.get(i, j).valuation().map(|v| (v, i, j)))
            .min();
        let Some((v, pi, pj)) = best else {
            for _ in k..n {
                d.push(prec);
                units.push(Series::one(&field, prec));
            }
            break;
        };
        m.swap_rows(k, pi);
        left.swap_rows(k, pi);
        m.swap_cols(k, pj);
        right.swap_cols(k, pj);
        let unit = m.get(k, k).shift_down(v);
        let uinv = unit.inverse()?;
        for i in k + 1..n {
            if m.get(i, k).is_zero() {
                continue;
            }
            let factor = m.get(i, k).shift_down(v).mul(&uinv);
            for j in 0..n {
                let x = m.get(i, j).sub(&factor.mul(m.get(k, j)));
                m.set(i, j, x);
                let y = left.get(i, j).sub(&factor.mul(left.get(k, j)));
                left.set(i, j, y);
            }
            m.set(i, k, Series::zero(&field, prec));
        }
        for j in k + 1..n {
            if m.get(k, j).is_zero() {
                continue;
            }
            let factor = m.get(k, j).shift_down(v).mul(&uinv);
            for i in 0..n {
                let x = m.get(i, j).sub(&factor.mul(m.get(i, k)));
                m.set(i, j, x);
                let y = right.get(i, j).sub(&factor.mul(right.get(i, k)));
                right.set(i, j, y);
            }
            m.set(k, j, Series::zero(&field, prec));
        }
        d.push(v);
        units.push(unit);
    }
    // m = L a R = diag(s^d u)  =>  a = L^-1 diag(s^d) (diag(u) R^-1)
    let u = smat_inverse(&left)?;
    let rinv = smat_inverse(&right)?;
    let w = Matrix::from_fn(n, n, |i, j| units[i].mul(rinv.get(i, j)));
    Ok(Smith { u, d, w })
}
