//! Totally ramified Galois extensions of `k((t))`, modelled by a finite group
//! acting on `k[[s]]/(s^N)` through substitutions `s -> sigma_g(s)`.
//!
//! Convention: the ring automorphism attached to `g` is
//! `psi(g)(f)(s) = f(sigma_g(s))`. For `psi` to be a homomorphism the
//! substitution series must satisfy `sigma_{hg} = sigma_g o sigma_h`, which is
//! the same as `psi(h)(sigma_g) = sigma_{hg}`. The built-in extensions are
//! abelian, so the order only matters for explicit tables.

use std::fmt;

use crate::algebra::field::{degree_for_roots, Field};
use crate::algebra::laurent::Laurent;
use crate::algebra::linsolve::KMat;
use crate::algebra::matrix::{LMat, SMat};
use crate::algebra::series::Series;
use crate::error::{OrbiparError, Result};
use crate::local_galois::group::FiniteGroup;

/// A substitution `s -> image(s)` with zero constant term and unit linear term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstAut(Series);

impl SubstAut {
    pub fn new(image: Series) -> Result<SubstAut> {
        if image.prec() < 2 || image.coeff(0) != 0 || image.coeff(1) == 0 {
            return Err(OrbiparError::Domain(format!(
                "substitution image {image} must have zero constant and unit linear coefficient"
            )));
        }
        Ok(SubstAut(image))
    }

    pub fn image(&self) -> &Series {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    /// `sigma^a(s) = zeta^a s`.
    Kummer {
        n: usize,
        zeta: u32,
    },
    /// `sigma^c(s) = s / (1 + c s)`.
    ArtinSchreier,
    /// Group acting trivially on the ring.
    Inert,
    Explicit,
}

#[derive(Clone)]
pub struct LocalExtension {
    field: Field,
    prec: usize,
    group: FiniteGroup,
    action: Vec<SubstAut>,
    base_uniformizer: Series,
    ram_index: usize,
    kind: ExtensionKind,
    /// Per element, the `N x N` matrix whose column `j` is `sigma_g(s)^j`.
    subst: Vec<KMat>,
    /// Per element, `sigma_g(s) / s` and its inverse.
    units: Vec<(Series, Series)>,
    /// False when `sigma_g(s)/s` is only known to `N - 1` coefficients.
    units_exact: bool,
}

impl fmt::Debug for LocalExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalExtension({:?}, {}, N={}, e={})",
            self.kind, self.field, self.prec, self.ram_index
        )
    }
}

impl PartialEq for LocalExtension {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.prec == other.prec
            && self.group == other.group
            && self.action == other.action
            && self.base_uniformizer == other.base_uniformizer
            && self.ram_index == other.ram_index
    }
}

/// First failure found by [`LocalExtension::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionFailure {
    /// `psi(h)(sigma_g) != sigma_{hg}` at the given coefficient.
    Homomorphism {
        h: usize,
        g: usize,
        index: usize,
    },
    /// `psi(g)(t) != t` at the given coefficient.
    NotInvariant {
        g: usize,
        index: usize,
    },
    Valuation {
        expected: usize,
        found: Option<usize>,
    },
    Identity {
        index: usize,
    },
}

impl fmt::Display for ExtensionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionFailure::Homomorphism { h, g, index } => {
                write!(
                    f,
                    "homomorphism law fails for pair ({h}, {g}) at coefficient {index}"
                )
            }
            ExtensionFailure::NotInvariant { g, index } => {
                write!(
                    f,
                    "base uniformizer not fixed by element {g} at coefficient {index}"
                )
            }
            ExtensionFailure::Valuation { expected, found } => {
                write!(
                    f,
                    "base uniformizer has valuation {found:?}, expected {expected}"
                )
            }
            ExtensionFailure::Identity { index } => {
                write!(
                    f,
                    "identity element does not act trivially (coefficient {index})"
                )
            }
        }
    }
}

impl LocalExtension {
    /// Assembles an extension from explicit data. Only the substitution
    /// invariants are checked here; [`LocalExtension::verify`] checks the rest.
    pub fn new(
        field: &Field,
        prec: usize,
        group: FiniteGroup,
        action: Vec<Series>,
        base_uniformizer: Series,
        ram_index: usize,
        kind: ExtensionKind,
    ) -> Result<LocalExtension> {
        if prec < 2 {
            return Err(OrbiparError::Config("precision must be at least 2".into()));
        }
        if action.len() != group.order() {
            return Err(OrbiparError::Config(format!(
                "action table has {} entries for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        if action
            .iter()
            .any(|a| a.prec() != prec || a.field() != field)
            || base_uniformizer.prec() != prec
            || base_uniformizer.field() != field
        {
            return Err(OrbiparError::Structural(
                "extension data must share the field and precision".into(),
            ));
        }
        let action = action
            .into_iter()
            .map(SubstAut::new)
            .collect::<Result<Vec<_>>>()?;
        let subst = action
            .iter()
            .map(|a| {
                let mut m = KMat::zeros(field, prec, prec);
                let mut power = Series::one(field, prec);
                for j in 0..prec {
                    for i in 0..prec {
                        m.set(i, j, power.coeff(i));
                    }
                    power = power.mul(a.image());
                }
                m
            })
            .collect();
        let units_exact = !matches!(kind, ExtensionKind::Explicit);
        let units = action
            .iter()
            .enumerate()
            .map(|(g, a)| {
                let u = match &kind {
                    ExtensionKind::Kummer { .. } => {
                        Series::constant(field, a.image().coeff(1), prec)
                    }
                    ExtensionKind::ArtinSchreier => {
                        Series::from_coeffs(field, &[1, field.from_int(g as i64)], prec)
                            .inverse()
                            .expect("unit")
                    }
                    ExtensionKind::Inert => Series::one(field, prec),
                    ExtensionKind::Explicit => {
                        Series::from_coeffs(field, &a.image().coeffs()[1..], prec)
                    }
                };
                let inv = u.inverse().expect("unit linear coefficient");
                (u, inv)
            })
            .collect();
        Ok(LocalExtension {
            field: field.clone(),
            prec,
            group,
            action,
            base_uniformizer,
            ram_index,
            kind,
            subst,
            units,
            units_exact,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn kind(&self) -> &ExtensionKind {
        &self.kind
    }

    pub fn ram_index(&self) -> usize {
        self.ram_index
    }

    pub fn base_uniformizer(&self) -> &Series {
        &self.base_uniformizer
    }

    pub fn action(&self, g: usize) -> &Series {
        self.action[g].image()
    }

    /// Whether the inertia is tame cyclic (Kummer type).
    pub fn is_tame(&self) -> bool {
        !self.group.order().is_multiple_of(self.field.p() as usize)
    }

    /// Number of base-ring coefficients that a rewrite can trust.
    pub fn base_prec(&self) -> usize {
        self.prec / self.ram_index.max(1)
    }

    /// `psi(g)(f) = f(sigma_g(s))`, at the precision of `f` (at most `N`).
    pub fn psi(&self, g: usize, f: &Series) -> Series {
        let n = f.prec().min(self.prec);
        let m = &self.subst[g];
        let fld = &self.field;
        let mut out = vec![0u32; n];
        for j in 0..n {
            let c = f.coeff(j);
            if c == 0 {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate().skip(j) {
                let x = m.get(i, j);
                if x != 0 {
                    *slot = fld.add(*slot, fld.mul(c, x));
                }
            }
        }
        Series::from_coeffs(fld, &out, f.prec())
    }

    /// Substitution on a Laurent value: `s^v f -> s^v u^v f(sigma)`, with
    /// `u = sigma(s)/s`. The absolute precision is preserved (windows longer
    /// than `N` are first cut to `N`).
    pub fn psi_laurent(&self, g: usize, x: &Laurent) -> Laurent {
        let x = x.truncated(self.prec);
        let len = x.prec();
        if len == 0 {
            return x;
        }
        let body = Series::from_coeffs(&self.field, x.coeffs(), len);
        let moved = self.psi(g, &body);
        let v = x.val_floor();
        let (u, uinv) = &self.units[g];
        let factor = if v >= 0 {
            u.with_prec(len).pow(v as usize)
        } else {
            uinv.with_prec(len).pow(v.unsigned_abs() as usize)
        };
        let c = moved.mul(&factor);
        let out = Laurent::new(&self.field, v, c.coeffs().to_vec());
        if self.units_exact || v == 0 {
            out
        } else {
            out.truncated(len.min(self.prec - 1))
        }
    }

    /// `sigma_g(s) / s`.
    pub fn unit(&self, g: usize) -> &Series {
        &self.units[g].0
    }

    /// `s / sigma_g(s)`.
    pub fn unit_inv(&self, g: usize) -> &Series {
        &self.units[g].1
    }

    pub fn psi_smat(&self, g: usize, a: &SMat) -> SMat {
        a.map(|x| self.psi(g, x))
    }

    pub fn psi_lmat(&self, g: usize, a: &LMat) -> LMat {
        a.map(|x| self.psi_laurent(g, x))
    }

    /// Product of all conjugates of `s`.
    pub fn norm_of_uniformizer(&self) -> Series {
        self.action
            .iter()
            .fold(Series::one(&self.field, self.prec), |acc, a| {
                acc.mul(a.image())
            })
    }

    /// Checks the identity, the homomorphism law on all pairs, invariance of
    /// `t` and its valuation. Returns the first failure.
    pub fn verify(&self) -> Option<ExtensionFailure> {
        let s = Series::var(&self.field, self.prec);
        if let Some(index) = (0..self.prec).find(|&i| self.action(0).coeff(i) != s.coeff(i)) {
            return Some(ExtensionFailure::Identity { index });
        }
        for h in self.group.elements() {
            for g in self.group.elements() {
                let lhs = self.psi(h, self.action(g));
                let rhs = self.action(self.group.mul(h, g));
                if let Some(index) = (0..self.prec).find(|&i| lhs.coeff(i) != rhs.coeff(i)) {
                    return Some(ExtensionFailure::Homomorphism { h, g, index });
                }
            }
        }
        let t = &self.base_uniformizer;
        for g in self.group.elements() {
            let moved = self.psi(g, t);
            if let Some(index) = (0..self.prec).find(|&i| moved.coeff(i) != t.coeff(i)) {
                return Some(ExtensionFailure::NotInvariant { g, index });
            }
        }
        if t.valuation() != Some(self.ram_index) {
            return Some(ExtensionFailure::Valuation {
                expected: self.ram_index,
                found: t.valuation(),
            });
        }
        None
    }

    /// Same extension with a different base uniformizer (used to build
    /// deliberately broken data).
    pub fn with_base_uniformizer(&self, t: Series) -> LocalExtension {
        let mut out = self.clone();
        out.base_uniformizer = t;
        out
    }

    /// Same extension with one substitution replaced.
    pub fn with_action(&self, g: usize, image: Series) -> Result<LocalExtension> {
        let mut action: Vec<Series> = self.action.iter().map(|a| a.image().clone()).collect();
        action[g] = image;
        LocalExtension::new(
            &self.field,
            self.prec,
            self.group.clone(),
            action,
            self.base_uniformizer.clone(),
            self.ram_index,
            ExtensionKind::Explicit,
        )
    }

    fn t_powers(&self) -> Vec<Series> {
        let e = self.ram_index.max(1);
        let count = self.prec.div_ceil(e) + 1;
        let mut out = Vec::with_capacity(count);
        let mut acc = Series::one(&self.field, self.prec);
        for _ in 0..count {
            out.push(acc.clone());
            acc = acc.mul(&self.base_uniformizer);
        }
        out
    }

    /// Writes an invariant series as `h(t(s))`. Greedy on the lowest remaining
    /// valuation, which must be divisible by `e`. The result carries
    /// `floor(N / e)` coefficients.
    pub fn rewrite_in_base(&self, f: &Series) -> Result<Series> {
        let e = self.ram_index.max(1);
        let out_prec = self.base_prec().max(1);
        let tp = self.t_powers();
        let lead = self.base_uniformizer.coeff(e);
        let mut rem = f.with_prec(self.prec);
        let mut h = vec![0u32; out_prec];
        while let Some(v) = rem.valuation() {
            if v % e != 0 {
                return Err(OrbiparError::NotInvariant { valuation: v });
            }
            let q = v / e;
            let c = self.field.div(rem.coeff(v), self.field.pow(lead, q as i64));
            if q < out_prec {
                h[q] = c;
            }
            rem = rem.sub(&tp[q].scale(c));
        }
        Ok(Series::from_coeffs(&self.field, &h, out_prec))
    }

    /// Restriction of scalars: `f = sum_{j<e} h_j(t) s^j`, each `h_j` with
    /// `floor(N / e)` coefficients.
    pub fn decompose(&self, f: &Series) -> Vec<Series> {
        let e = self.ram_index.max(1);
        let out_prec = self.base_prec().max(1);
        let tp = self.t_powers();
        let lead = self.base_uniformizer.coeff(e);
        let mut rem = f.with_prec(self.prec);
        let mut h = vec![vec![0u32; out_prec]; e];
        while let Some(v) = rem.valuation() {
            let (q, j) = (v / e, v % e);
            let c = self.field.div(rem.coeff(v), self.field.pow(lead, q as i64));
            if q < out_prec {
                h[j][q] = self.field.add(h[j][q], c);
            }
            rem = rem.sub(&tp[q].shift_up(j).scale(c));
        }
        h.into_iter()
            .map(|c| Series::from_coeffs(&self.field, &c, out_prec))
            .collect()
    }

    /// Evaluates a series in `t` at `t = t(s)`.
    pub fn eval_base(&self, h: &Series) -> Series {
        let tp = self.t_powers();
        let mut acc = Series::zero(&self.field, self.prec);
        for (q, &c) in h.coeffs().iter().enumerate() {
            if c != 0 && q < tp.len() {
                acc = acc.add(&tp[q].scale(c));
            }
        }
        acc
    }
}

/// Kummer extension `s^n = unit * t`: cyclic of order `n`, generator `s -> zeta s`.
pub fn make_kummer(field: &Field, n: usize, prec: usize) -> Result<LocalExtension> {
    let p = field.p() as usize;
    if n == 0 || n.is_multiple_of(p) {
        return Err(OrbiparError::Config(format!(
            "Kummer degree {n} must be prime to the characteristic {p}"
        )));
    }
    let zeta = field.root_of_unity(n as u32).ok_or_else(|| {
        let need = match degree_for_roots(field.p(), n as u32, 64) {
            Some(k) => format!("field degree k = {k} (n must divide p^k - 1)"),
            None => "a field containing the n-th roots of unity".to_string(),
        };
        OrbiparError::Config(format!(
            "no primitive {n}-th root of unity in {field}; Kummer degree {n} requires {need}"
        ))
    })?;
    let group = FiniteGroup::cyclic(n);
    let action = (0..n)
        .map(|a| Series::monomial(field, field.pow(zeta, a as i64), 1, prec))
        .collect();
    let t = Series::monomial(field, field.pow(zeta, (n * (n - 1) / 2) as i64), n, prec);
    LocalExtension::new(
        field,
        prec,
        group,
        action,
        t,
        n,
        ExtensionKind::Kummer { n, zeta },
    )
}

/// Artin-Schreier extension of degree `p`: `sigma^c(s) = s / (1 + c s)` and
/// `t = s^p / (1 - s^(p-1))`, the norm of `s`.
pub fn make_artin_schreier(field: &Field, prec: usize) -> Result<LocalExtension> {
    let p = field.p() as usize;
    let group = FiniteGroup::cyclic(p);
    let s = Series::var(field, prec);
    let action: Vec<Series> = (0..p)
        .map(|c| {
            let denom = Series::from_coeffs(field, &[1, field.from_int(c as i64)], prec);
            s.mul(&denom.inverse().expect("unit"))
        })
        .collect();
    let t = action
        .iter()
        .fold(Series::one(field, prec), |acc, a| acc.mul(a));
    LocalExtension::new(
        field,
        prec,
        group,
        action,
        t,
        p,
        ExtensionKind::ArtinSchreier,
    )
}

/// The trivial extension with a group acting trivially on the ring.
pub fn make_inert(field: &Field, prec: usize, group: FiniteGroup) -> Result<LocalExtension> {
    let s = Series::var(field, prec);
    let action = vec![s.clone(); group.order()];
    LocalExtension::new(field, prec, group, action, s, 1, ExtensionKind::Inert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn kummer_trivial() {
        let f = gf(5);
        let e = make_kummer(&f, 1, 8).unwrap();
        assert_eq!(e.group().order(), 1);
        assert_eq!(e.base_uniformizer(), &Series::var(&f, 8));
        assert_eq!(e.ram_index(), 1);
        assert!(e.verify().is_none());
    }

    #[test]
    fn kummer_2_over_f5() {
        let f = gf(5);
        let e = make_kummer(&f, 2, 8).unwrap();
        assert_eq!(e.action(1), &Series::monomial(&f, 4, 1, 8));
        assert_eq!(e.base_uniformizer(), &Series::monomial(&f, 4, 2, 8));
        assert_eq!(e.psi(1, e.base_uniformizer()), *e.base_uniformizer());
        assert!(e.verify().is_none());
    }

    #[test]
    fn kummer_4_over_f5() {
        let f = gf(5);
        let e = make_kummer(&f, 4, 12).unwrap();
        assert_eq!(e.action(1).coeff(1), 2);
        assert_eq!(e.base_uniformizer().valuation(), Some(4));
        assert_eq!(e.norm_of_uniformizer(), *e.base_uniformizer());
        assert!(e.verify().is_none());
    }

    #[test]
    fn kummer_needs_roots() {
        let err = make_kummer(&gf(5), 3, 8).unwrap_err();
        assert!(err.to_string().contains("k = 2"), "{err}");
        assert!(make_kummer(&gf(5), 5, 8).is_err());
        assert!(make_kummer(&Field::new(5, 2).unwrap(), 3, 8).is_ok());
    }

    #[test]
    fn artin_schreier_f2() {
        let f = gf(2);
        let e = make_artin_schreier(&f, 8).unwrap();
        assert_eq!(e.action(1).coeffs(), &[0, 1, 1, 1, 1, 1, 1, 1]);
        // s^2/(1+s) = s^2 + s^3 + ...
        assert_eq!(e.base_uniformizer().coeffs(), &[0, 0, 1, 1, 1, 1, 1, 1]);
        assert!(e.verify().is_none());
    }

    #[test]
    fn artin_schreier_f3_closed_form() {
        let f = gf(3);
        let n = 10;
        let e = make_artin_schreier(&f, n).unwrap();
        let closed = Series::monomial(&f, 1, 3, n)
            .mul(&Series::from_coeffs(&f, &[1, 0, 2], n).inverse().unwrap());
        assert_eq!(e.base_uniformizer(), &closed);
        // sigma applied p times is the identity
        let mut x = Series::var(&f, n);
        for _ in 0..3 {
            x = e.psi(1, &x);
        }
        assert_eq!(x, Series::var(&f, n));
    }

    #[test]
    fn verify_detects_broken_data() {
        let f = gf(5);
        let e = make_kummer(&f, 2, 8).unwrap();
        let bad = e.with_base_uniformizer(Series::var(&f, 8));
        assert!(matches!(
            bad.verify(),
            Some(ExtensionFailure::NotInvariant { g: 1, .. })
        ));
        let e4 = make_kummer(&f, 4, 8).unwrap();
        let broken = e4.with_action(2, Series::monomial(&f, 2, 1, 8)).unwrap();
        assert!(matches!(
            broken.verify(),
            Some(ExtensionFailure::Homomorphism { h: 1, g: 1, .. })
        ));
    }

    #[test]
    fn rewrite_examples() {
        let f = gf(5);
        let e = make_kummer(&f, 2, 8).unwrap();
        let t = e.base_uniformizer().clone();
        assert_eq!(
            e.rewrite_in_base(&t).unwrap(),
            Series::monomial(&f, 1, 1, 4)
        );
        let s2 = Series::monomial(&f, 1, 2, 8);
        assert_eq!(
            e.rewrite_in_base(&s2).unwrap(),
            Series::monomial(&f, 4, 1, 4)
        );
        assert_eq!(
            e.rewrite_in_base(&Series::var(&f, 8)).unwrap_err(),
            OrbiparError::NotInvariant { valuation: 1 }
        );
    }

    #[test]
    fn wild_rewrite_detects_non_invariance() {
        let f = gf(2);
        let e = make_artin_schreier(&f, 10).unwrap();
        let s2 = Series::monomial(&f, 1, 2, 10);
        assert_eq!(
            e.rewrite_in_base(&s2).unwrap_err(),
            OrbiparError::NotInvariant { valuation: 3 }
        );
        let h = Series::from_coeffs(&f, &[1, 1, 0, 1], 5);
        let back = e.rewrite_in_base(&e.eval_base(&h)).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn decompose_reassembles() {
        let f = gf(3);
        let e = make_artin_schreier(&f, 12).unwrap();
        let x = Series::from_coeffs(&f, &[2, 1, 0, 1, 2, 2, 1, 0, 1, 1, 2, 1], 12);
        let parts = e.decompose(&x);
        let mut acc = Series::zero(&f, 12);
        for (j, h) in parts.iter().enumerate() {
            acc = acc.add(&e.eval_base(h).shift_up(j));
        }
        assert_eq!(acc, x);
    }

    #[test]
    fn laurent_substitution() {
        let f = gf(3);
        let e = make_artin_schreier(&f, 8).unwrap();
        let x = Laurent::monomial(&f, 1, -1, 8);
        // sigma(s)^-1 = (1 + s)/s = s^-1 + 1
        let y = e.psi_laurent(1, &x);
        assert_eq!(y, Laurent::new(&f, -1, vec![1, 1, 0, 0, 0, 0, 0, 0]));
    }
}
