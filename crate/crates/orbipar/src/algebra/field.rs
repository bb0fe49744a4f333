//! Finite fields `GF(p^k)` for `k <= 4`.
//!
//! An element is stored as the integer `sum c_i p^i`, where `c_0 + c_1 x + ...`
//! is its residue modulo the stored monic modulus. Multiplication goes through
//! discrete log tables built from the canonical primitive element, which is the
//! smallest integer encoding whose multiplicative order is `q - 1`.

use std::fmt;
use std::sync::Arc;

use crate::error::{OrbiparError, Result};

/// Largest field order accepted; keeps the log tables small.
pub const MAX_ORDER: u32 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    pub p: u32,
    pub k_deg: u32,
    /// Coefficients of the monic modulus, lowest degree first, length `k_deg + 1`.
    pub modulus: Vec<u32>,
}

struct Tables {
    spec: FieldSpec,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u32,
}

/// Shared handle to a finite field with precomputed tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.spec.k_deg == 1 {
            write!(f, "GF({})", self.0.spec.p)
        } else {
            write!(f, "GF({}^{})", self.0.spec.p, self.0.spec.k_deg)
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut a: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = vec![0; k];
    for c in out.iter_mut() {
        *c = a % p;
        a /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `num` modulo a polynomial `den` over `F_p` (both low-first).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = pow_mod(den[dd], p - 2, p);
    while r.len() > dd {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % p;
            let shift = r.len() - 1 - dd;
            for (i, &b) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - c * b % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = (b % p) as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Exhaustive irreducibility test for monic polynomials of degree at most 4:
/// no roots, and for degree 4 no monic quadratic factor.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    if k == 1 {
        return true;
    }
    for x in 0..p {
        let v = modulus
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64);
        if v == 0 {
            return false;
        }
    }
    if k >= 4 {
        for a in 0..p {
            for b in 0..p {
                let quad = [b, a, 1];
                if poly_rem(modulus, &quad, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `k` over `F_p`, ordered by the integer
/// encoding of its lower coefficients.
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let count = p.pow(k);
    for m in 0..count {
        let mut poly = digits(m, p, k as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// `GF(p^k)` with the default modulus.
    pub fn new(p: u32, k_deg: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(OrbiparError::Config(format!("{p} is not prime")));
        }
        if !(1..=4).contains(&k_deg) {
            return Err(OrbiparError::Config(format!(
                "field degree {k_deg} outside the supported range 1..=4"
            )));
        }
        Field::with_modulus(p, k_deg, default_modulus(p, k_deg))
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn with_modulus(p: u32, k_deg: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(OrbiparError::Config(format!("{p} is not prime")));
        }
        if !(1..=4).contains(&k_deg) {
            return Err(OrbiparError::Config(format!(
                "field degree {k_deg} outside the supported range 1..=4"
            )));
        }
        let q64 = (p as u64).pow(k_deg);
        if q64 > MAX_ORDER as u64 {
            return Err(OrbiparError::Config(format!(
                "field order {q64} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        if modulus.len() != k_deg as usize + 1
            || modulus[k_deg as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(OrbiparError::Config(
                "modulus must be monic of the field degree with reduced coefficients".into(),
            ));
        }
        if !is_irreducible(&modulus, p) {
            return Err(OrbiparError::Config(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let q = q64 as u32;
        let spec = FieldSpec { p, k_deg, modulus };
        let slow = |a: u32, b: u32| slow_mul(&spec, a, b);
        let mut generator = 0;
        for g in 1..q {
            let mut x = g;
            let mut order = 1u32;
            while x != 1 {
                x = slow(x, g);
                order += 1;
            }
            if order == q - 1 {
                generator = g;
                break;
            }
        }
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = slow(x, generator);
        }
        Ok(Field(Arc::new(Tables {
            spec,
            q,
            exp,
            log,
            generator,
        })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn k_deg(&self) -> u32 {
        self.0.spec.k_deg
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// The canonical primitive element.
    pub fn generator(&self) -> u32 {
        self.0.generator
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.k_deg == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.k_deg == 1 {
            return (p - a) % p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        let n = t.q - 1;
        t.exp[((t.log[a as usize] + t.log[b as usize]) % n) as usize]
    }

    /// Multiplicative inverse. Panics on zero; callers check units first.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in {self}");
        let t = &self.0;
        let n = t.q - 1;
        t.exp[((n - t.log[a as usize]) % n) as usize]
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let t = &self.0;
        let n = (t.q - 1) as i64;
        let l = (t.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        t.exp[l as usize]
    }

    /// Image of an integer under `Z -> F_p -> k`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.spec.p as i64) as u32
    }

    /// Discrete logarithm to the canonical primitive element.
    pub fn dlog(&self, a: u32) -> Option<u32> {
        if a == 0 || a >= self.0.q {
            None
        } else {
            Some(self.0.log[a as usize])
        }
    }

    pub fn is_element(&self, a: u32) -> bool {
        a < self.0.q
    }

    /// Canonical primitive `n`-th root of unity `g^((q-1)/n)`, if `n | q - 1`.
    pub fn root_of_unity(&self, n: u32) -> Option<u32> {
        let m = self.0.q - 1;
        if n == 0 || !m.is_multiple_of(n) {
            return None;
        }
        Some(self.pow(self.0.generator, (m / n) as i64))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u32 {
        let m = self.0.q - 1;
        let l = self.0.log[a as usize];
        m / gcd(m, l)
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.0.q
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn slow_mul(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    let p = spec.p;
    let k = spec.k_deg as usize;
    let da = digits(a, p, k);
    let db = digits(b, p, k);
    let mut prod = vec![0u32; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let r = poly_rem(&prod, &spec.modulus, p);
    let mut r = r;
    r.resize(k, 0);
    undigits(&r, p)
}

/// Smallest field degree `k` with `n | p^k - 1`, if any below `limit`.
pub fn degree_for_roots(p: u32, n: u32, limit: u32) -> Option<u32> {
    if n == 0 || gcd(n, p) != 1 {
        return None;
    }
    let mut pk = 1u64;
    for k in 1..=limit {
        pk *= p as u64;
        if (pk - 1).is_multiple_of(n as u64) {
            return Some(k);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), 3);
        assert_eq!(f.neg(1), 4);
        assert_eq!(f.generator(), 2);
    }

    #[test]
    fn canonical_roots() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.root_of_unity(4), Some(2));
        assert_eq!(f5.root_of_unity(2), Some(4));
        assert_eq!(f5.root_of_unity(3), None);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.generator(), 3);
        assert_eq!(f7.root_of_unity(3), Some(2));
    }

    #[test]
    fn extension_field_is_a_field() {
        for (p, k) in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 4)] {
            let f = Field::new(p, k).unwrap();
            assert_eq!(f.q(), p.pow(k));
            for a in 1..f.q() {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
            for a in 0..f.q() {
                for b in 0..f.q().min(30) {
                    assert_eq!(f.mul(a, b), slow_mul(f.spec(), a, b));
                }
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 - 1 = (x - 1)(x + 1) over F_5
        assert!(Field::with_modulus(5, 2, vec![4, 0, 1]).is_err());
        // (x^2 + 1)^2 over F_3 has no roots but is reducible
        assert!(Field::with_modulus(3, 4, vec![1, 0, 2, 0, 1]).is_err());
        assert!(Field::new(6, 1).is_err());
    }

    #[test]
    fn root_degree() {
        assert_eq!(degree_for_roots(5, 3, 4), Some(2));
        assert_eq!(degree_for_roots(7, 4, 4), Some(2));
        assert_eq!(degree_for_roots(13, 4, 4), Some(1));
        assert_eq!(degree_for_roots(5, 5, 4), None);
    }
}
