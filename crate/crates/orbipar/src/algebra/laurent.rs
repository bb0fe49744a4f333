//! Truncated Laurent series with an explicit validity window.
//!
//! A value stores the coefficients of `s^v, ..., s^(v+L-1)` where `v` is the
//! window floor and `L` the window length. Everything from `s^(v+L)` on is
//! unknown, so `v + L` is the absolute precision. Below the floor the value is
//! exactly zero.

use std::fmt;

use crate::algebra::field::Field;
use crate::algebra::series::Series;
use crate::error::{OrbiparError, Result};

#[derive(Clone)]
pub struct Laurent {
    field: Field,
    val_floor: i64,
    coeffs: Vec<u32>,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = self.val_floor + i as i64;
            match d {
                0 => write!(f, "{c}")?,
                _ if c == 1 => write!(f, "s^{d}")?,
                _ => write!(f, "{c}s^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(s^{})", self.abs_prec())
    }
}

/// Equality on the common window: coefficients agree wherever both values are
/// known. This is the comparison used by every "to precision" check.
impl PartialEq for Laurent {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.diff_index(other).is_none()
    }
}

impl Laurent {
    pub fn new(field: &Field, val_floor: i64, coeffs: Vec<u32>) -> Laurent {
        Laurent {
            field: field.clone(),
            val_floor,
            coeffs,
        }
    }

    /// `c s^d` known to absolute precision `d + len`.
    pub fn monomial(field: &Field, c: u32, d: i64, len: usize) -> Laurent {
        let mut coeffs = vec![0; len];
        if len > 0 {
            coeffs[0] = c;
        }
        Laurent::new(field, d, coeffs)
    }

    pub fn from_series(s: &Series) -> Laurent {
        Laurent::new(s.field(), 0, s.coeffs().to_vec())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn val_floor(&self) -> i64 {
        self.val_floor
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Window length.
    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn abs_prec(&self) -> i64 {
        self.val_floor + self.coeffs.len() as i64
    }

    /// Coefficient of `s^d`; `None` when `d` is at or beyond the absolute precision.
    pub fn coeff(&self, d: i64) -> Option<u32> {
        if d >= self.abs_prec() {
            None
        } else if d < self.val_floor {
            Some(0)
        } else {
            Some(self.coeffs[(d - self.val_floor) as usize])
        }
    }

    /// First nonzero exponent inside the window.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .map(|i| self.val_floor + i as i64)
    }

    /// Valuation, or the absolute precision for a value that vanishes on its window.
    fn effective_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.abs_prec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// First exponent where the two values disagree on their common window.
    pub fn diff_index(&self, other: &Laurent) -> Option<i64> {
        let lo = self.val_floor.min(other.val_floor);
        let hi = self.abs_prec().min(other.abs_prec());
        (lo..hi).find(|&d| self.coeff(d) != other.coeff(d))
    }

    /// Drops leading zeros so that the floor is the valuation.
    pub fn normalized(&self) -> Laurent {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(i) => Laurent::new(
                &self.field,
                self.val_floor + i as i64,
                self.coeffs[i..].to_vec(),
            ),
            None => Laurent::new(&self.field, self.abs_prec(), vec![]),
        }
    }

    /// Restricts the window to at most `len` coefficients.
    pub fn truncated(&self, len: usize) -> Laurent {
        let mut c = self.coeffs.clone();
        c.truncate(len);
        Laurent::new(&self.field, self.val_floor, c)
    }

    fn combine(&self, other: &Laurent, op: impl Fn(u32, u32) -> u32) -> Laurent {
        let lo = self.val_floor.min(other.val_floor);
        let hi = self.abs_prec().min(other.abs_prec());
        if hi <= lo {
            return Laurent::new(&self.field, hi, vec![]);
        }
        let coeffs = (lo..hi)
            .map(|d| op(self.coeff(d).unwrap(), other.coeff(d).unwrap()))
            .collect();
        Laurent::new(&self.field, lo, coeffs)
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let f = self.field.clone();
        self.combine(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        let f = self.field.clone();
        self.combine(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> Laurent {
        let f = &self.field;
        Laurent::new(
            f,
            self.val_floor,
            self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        )
    }

    pub fn scale(&self, c: u32) -> Laurent {
        let f = &self.field;
        Laurent::new(
            f,
            self.val_floor,
            self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    /// Product; the result is known up to `min(v1 + P2, v2 + P1)` where `v`
    /// are valuations and `P` absolute precisions.
    pub fn mul(&self, other: &Laurent) -> Laurent {
        let f = &self.field;
        let (w1, w2) = (self.effective_valuation(), other.effective_valuation());
        let abs = (w1 + other.abs_prec()).min(w2 + self.abs_prec());
        let start = w1 + w2;
        let len = (abs - start).max(0) as usize;
        let mut out = vec![0u32; len];
        for i in 0..len {
            let ci = match self.coeff(w1 + i as i64) {
                Some(c) if c != 0 => c,
                _ => continue,
            };
            for j in 0..len - i {
                if let Some(cj) = other.coeff(w2 + j as i64) {
                    if cj != 0 {
                        out[i + j] = f.add(out[i + j], f.mul(ci, cj));
                    }
                }
            }
        }
        Laurent::new(f, start, out)
    }

    /// Inverse of a value that is nonzero on its window. The relative
    /// precision (window length from the valuation on) is preserved.
    pub fn inverse(&self) -> Result<Laurent> {
        let n = self.normalized();
        if n.coeffs.is_empty() {
            return Err(OrbiparError::Domain(
                "Laurent value vanishes on its whole window".into(),
            ));
        }
        let unit = Series::from_coeffs(&self.field, &n.coeffs, n.coeffs.len());
        let inv = unit.inverse()?;
        Ok(Laurent::new(
            &self.field,
            -n.val_floor,
            inv.coeffs().to_vec(),
        ))
    }

    /// Multiplication by `s^d`.
    pub fn shift(&self, d: i64) -> Laurent {
        Laurent::new(&self.field, self.val_floor + d, self.coeffs.clone())
    }

    /// Power series with `prec` coefficients, if the value is integral and
    /// known that far.
    pub fn to_series(&self, prec: usize) -> Result<Series> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(OrbiparError::Domain(format!(
                    "Laurent value has negative valuation {v}"
                )));
            }
        }
        if self.abs_prec() < prec as i64 {
            return Err(OrbiparError::Precision {
                achievable: self.abs_prec().max(0) as usize,
            });
        }
        let c: Vec<u32> = (0..prec as i64).map(|d| self.coeff(d).unwrap()).collect();
        Ok(Series::from_coeffs(&self.field, &c, prec))
    }

    /// Like [`Laurent::to_series`], but unknown top coefficients become zero.
    pub fn to_series_lossy(&self, prec: usize) -> Result<Series> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(OrbiparError::Domain(format!(
                    "Laurent value has negative valuation {v}"
                )));
            }
        }
        let c: Vec<u32> = (0..prec as i64)
            .map(|d| self.coeff(d).unwrap_or(0))
            .collect();
        Ok(Series::from_coeffs(&self.field, &c, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_arithmetic() {
        let f = Field::prime(5).unwrap();
        let s = Laurent::monomial(&f, 1, 1, 8);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.val_floor(), -1);
        assert_eq!(inv.abs_prec(), 7);
        let one = s.mul(&inv);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one, Laurent::monomial(&f, 1, 0, 8));
    }

    #[test]
    fn multiplication_precision() {
        let f = Field::prime(5).unwrap();
        // (s^2 + O(s^10)) * (1 + s + O(s^8)) is known to O(s^10)
        let a = Laurent::monomial(&f, 1, 2, 8);
        let b = Laurent::new(&f, 0, vec![1, 1, 0, 0, 0, 0, 0, 0]);
        let c = a.mul(&b);
        assert_eq!(c.abs_prec(), 10);
        assert_eq!(c.coeff(3), Some(1));
    }

    #[test]
    fn window_equality_ignores_unknown_tail() {
        let f = Field::prime(5).unwrap();
        let a = Laurent::new(&f, 0, vec![1, 2, 3]);
        let b = Laurent::new(&f, 0, vec![1, 2]);
        assert_eq!(a, b);
        let c = Laurent::new(&f, -1, vec![0, 1, 3]);
        assert_ne!(a, c);
    }

    #[test]
    fn series_roundtrip() {
        let f = Field::prime(7).unwrap();
        let s = Series::from_coeffs(&f, &[0, 3, 1], 6);
        let l = Laurent::from_series(&s);
        assert_eq!(l.to_series(6).unwrap(), s);
        assert!(Laurent::monomial(&f, 1, -1, 6).to_series(4).is_err());
    }
}
