//! Truncated power series `k[[s]]/(s^N)`.

use std::fmt;

use crate::algebra::field::Field;
use crate::error::{structural, OrbiparError, Result};

/// A power series known modulo `s^N`, where `N = coeffs.len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Series {
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
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "s")?,
                (1, _) => write!(f, "{c}s")?,
                (_, 1) => write!(f, "s^{i}")?,
                _ => write!(f, "{c}s^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(s^{})", self.coeffs.len())
    }
}

impl Series {
    pub fn zero(field: &Field, prec: usize) -> Series {
        Series {
            field: field.clone(),
            coeffs: vec![0; prec],
        }
    }

    pub fn one(field: &Field, prec: usize) -> Series {
        Series::constant(field, 1, prec)
    }

    pub fn constant(field: &Field, c: u32, prec: usize) -> Series {
        Series::monomial(field, c, 0, prec)
    }

    /// `c s^d`, which is zero when `d >= prec`.
    pub fn monomial(field: &Field, c: u32, d: usize, prec: usize) -> Series {
        let mut s = Series::zero(field, prec);
        if d < prec {
            s.coeffs[d] = c;
        }
        s
    }

    /// The uniformizer `s`.
    pub fn var(field: &Field, prec: usize) -> Series {
        Series::monomial(field, 1, 1, prec)
    }

    /// Builds a series from little-endian coefficients, padding with zeros or
    /// truncating to `prec`.
    pub fn from_coeffs(field: &Field, coeffs: &[u32], prec: usize) -> Series {
        let mut c: Vec<u32> = coeffs.iter().take(prec).copied().collect();
        c.resize(prec, 0);
        Series {
            field: field.clone(),
            coeffs: c,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn set_coeff(&mut self, i: usize, c: u32) {
        if i < self.coeffs.len() {
            self.coeffs[i] = c;
        }
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeff(0) != 0
    }

    /// Same series at another precision (zero padded when growing).
    pub fn with_prec(&self, prec: usize) -> Series {
        Series::from_coeffs(&self.field, &self.coeffs, prec)
    }

    fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.field != other.field {
            return Err(structural(format!(
                "field mismatch: {} vs {}",
                self.field, other.field
            )));
        }
        if self.prec() != other.prec() {
            return Err(structural(format!(
                "precision mismatch: {} vs {}",
                self.prec(),
                other.prec()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Series {
        self.check_compatible(other).expect("series add");
        let f = &self.field;
        Series {
            field: f.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.check_compatible(other).expect("series sub");
        let f = &self.field;
        Series {
            field: f.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Series {
        let f = &self.field;
        Series {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Product truncated to the common precision; no precision is lost.
    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        let f = &self.field;
        let n = self.prec();
        let mut out = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..n - i].iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Ok(Series {
            field: f.clone(),
            coeffs: out,
        })
    }

    pub fn mul(&self, other: &Series) -> Series {
        self.try_mul(other).expect("series mul")
    }

    pub fn pow(&self, mut e: usize) -> Series {
        let mut acc = Series::one(&self.field, self.prec());
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

    /// Multiplication by `s^d`.
    pub fn shift_up(&self, d: usize) -> Series {
        let n = self.prec();
        let mut out = vec![0u32; n];
        if d < n {
            out[d..].copy_from_slice(&self.coeffs[..n - d]);
        }
        Series {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// Division by `s^d`; the top `d` coefficients of the result are unknown
    /// and filled with zeros.
    pub fn shift_down(&self, d: usize) -> Series {
        let n = self.prec();
        let mut out = vec![0u32; n];
        if d < n {
            out[..n - d].copy_from_slice(&self.coeffs[d..]);
        }
        Series {
            field: self.field.clone(),
            coeffs: out,
        }
    }

    /// Inverse of a unit by successive approximation, one coefficient at a time.
    pub fn inverse(&self) -> Result<Series> {
        let f = &self.field;
        let n = self.prec();
        if !self.is_unit() {
            return Err(OrbiparError::NotInvertible {
                valuation: self.valuation().unwrap_or(n),
            });
        }
        let a0inv = f.inv(self.coeffs[0]);
        let mut b = vec![0u32; n];
        b[0] = a0inv;
        for m in 1..n {
            let mut acc = 0;
            for i in 1..=m {
                acc = f.add(acc, f.mul(self.coeffs[i], b[m - i]));
            }
            b[m] = f.neg(f.mul(acc, a0inv));
        }
        Ok(Series {
            field: f.clone(),
            coeffs: b,
        })
    }

    /// `self(g(s))` by Horner's rule. `g` must have zero constant term.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        self.check_compatible(g)?;
        if g.coeff(0) != 0 {
            return Err(OrbiparError::Domain(
                "composition needs an inner series with zero constant term".into(),
            ));
        }
        let n = self.prec();
        let mut acc = Series::zero(&self.field, n);
        for i in (0..n).rev() {
            acc = acc.mul(g);
            acc.coeffs[0] = self.field.add(acc.coeffs[0], self.coeffs[i]);
        }
        Ok(acc)
    }

    /// Compositional inverse: `h` with `g(h(s)) = h(g(s)) = s`.
    pub fn reversion(&self) -> Result<Series> {
        let f = &self.field;
        let n = self.prec();
        if self.coeff(0) != 0 || n < 2 || self.coeff(1) == 0 {
            return Err(OrbiparError::Domain(
                "reversion needs zero constant term and a unit linear coefficient".into(),
            ));
        }
        let g1inv = f.inv(self.coeffs[1]);
        let mut h = Series::monomial(f, g1inv, 1, n);
        for m in 2..n {
            let err = self.compose(&h)?.coeff(m);
            if err != 0 {
                h.coeffs[m] = f.sub(h.coeffs[m], f.mul(err, g1inv));
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn ser(f: &Field, c: &[u32], n: usize) -> Series {
        Series::from_coeffs(f, c, n)
    }

    #[test]
    fn mul_identity_and_truncation() {
        let f = gf(5);
        let a = ser(&f, &[1, 2, 3, 4], 4);
        assert_eq!(Series::one(&f, 4).mul(&a), a);
        let s2 = Series::monomial(&f, 1, 2, 4);
        let s3 = Series::monomial(&f, 1, 3, 4);
        assert!(s2.mul(&s3).is_zero());
    }

    #[test]
    fn geometric_inverse_multiplies_back() {
        let f = gf(5);
        let a = ser(&f, &[1, 1], 4);
        let b = ser(&f, &[1, 4, 1, 4], 4);
        assert_eq!(a.mul(&b), Series::one(&f, 4));
    }

    #[test]
    fn inverse_examples() {
        let f = gf(2);
        let a = ser(&f, &[1, 1], 5);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.coeffs(), &[1, 1, 1, 1, 1]);
        assert_eq!(a.mul(&inv), Series::one(&f, 5));
        assert_eq!(Series::one(&f, 5).inverse().unwrap(), Series::one(&f, 5));
        let err = Series::var(&f, 5).inverse().unwrap_err();
        assert_eq!(err, OrbiparError::NotInvertible { valuation: 1 });
    }

    #[test]
    fn compose_examples() {
        let f5 = gf(5);
        let s = Series::var(&f5, 4);
        let fs = ser(&f5, &[2, 3, 0, 1], 4);
        assert_eq!(fs.compose(&s).unwrap(), fs);
        let four_s = ser(&f5, &[0, 4], 4);
        assert_eq!(s.compose(&four_s).unwrap(), four_s);

        let f2 = gf(2);
        // s/(1+s) = s + s^2 + s^3 + s^4 in characteristic 2
        let g = ser(&f2, &[0, 1, 1, 1, 1], 5);
        assert_eq!(g.compose(&g).unwrap(), Series::var(&f2, 5));
        assert!(s.compose(&Series::one(&f5, 4)).is_err());
    }

    #[test]
    fn reversion_examples() {
        let f5 = gf(5);
        let s = Series::var(&f5, 6);
        assert_eq!(s.reversion().unwrap(), s);
        let zs = ser(&f5, &[0, 2], 6);
        assert_eq!(zs.reversion().unwrap(), ser(&f5, &[0, 3], 6));

        // s/(1+s) reverses to s/(1-s) = s + s^2 + ...
        let g = ser(&f5, &[0, 1, 4, 1, 4, 1], 6);
        let h = g.reversion().unwrap();
        assert_eq!(h, ser(&f5, &[0, 1, 1, 1, 1, 1], 6));
        assert_eq!(g.compose(&h).unwrap(), s);
        assert_eq!(h.compose(&g).unwrap(), s);
        assert!(ser(&f5, &[0, 0, 1], 6).reversion().is_err());
    }

    #[test]
    fn mismatch_is_structural() {
        let a = Series::one(&gf(5), 4);
        let b = Series::one(&gf(5), 5);
        assert!(matches!(a.try_mul(&b), Err(OrbiparError::Structural(_))));
        let c = Series::one(&gf(7), 4);
        assert!(matches!(a.try_mul(&c), Err(OrbiparError::Structural(_))));
    }
}
