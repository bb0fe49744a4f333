//! Embeddings of a small extension into a bigger one.

use std::sync::Arc;

use crate::algebra::laurent::Laurent;
use crate::algebra::series::Series;
use crate::error::{OrbiparError, Result};
use crate::local_galois::extension::{ExtensionKind, LocalExtension};

/// `small` sits inside `big` via `s_small = s_image(s_big)`; the group of
/// `big` maps onto the group of `small` through `quotient`.
#[derive(Clone, Debug)]
pub struct ExtensionEmbedding {
    pub small: Arc<LocalExtension>,
    pub big: Arc<LocalExtension>,
    pub s_image: Series,
    pub quotient: Vec<usize>,
}

impl ExtensionEmbedding {
    /// Validates valuation, surjectivity, intertwining and compatibility of
    /// the base uniformizers.
    pub fn new(
        small: Arc<LocalExtension>,
        big: Arc<LocalExtension>,
        s_image: Series,
        quotient: Vec<usize>,
    ) -> Result<ExtensionEmbedding> {
        let (es, eb) = (small.ram_index(), big.ram_index());
        if small.field() != big.field() || small.prec() != big.prec() {
            return Err(OrbiparError::Validation(
                "embedded extensions must share field and precision".into(),
            ));
        }
        if eb % es != 0 || s_image.valuation() != Some(eb / es) {
            return Err(OrbiparError::Validation(format!(
                "s_image has valuation {:?}, expected {}",
                s_image.valuation(),
                if eb % es == 0 {
                    (eb / es).to_string()
                } else {
                    "a divisor ratio".into()
                }
            )));
        }
        let (gs, gb) = (small.group(), big.group());
        if !gb.is_homomorphism(gs, &quotient) {
            return Err(OrbiparError::Validation(
                "group quotient is not a homomorphism".into(),
            ));
        }
        let mut hit = vec![false; gs.order()];
        for &x in &quotient {
            hit[x] = true;
        }
        if hit.iter().any(|&h| !h) {
            return Err(OrbiparError::Validation(
                "group quotient is not surjective".into(),
            ));
        }
        for g in gb.elements() {
            let lhs = small.action(quotient[g]).compose(&s_image)?;
            let rhs = big.psi(g, &s_image);
            if lhs != rhs {
                return Err(OrbiparError::Validation(format!(
                    "embedding does not intertwine the actions at element {g}"
                )));
            }
        }
        let t_pushed = small.base_uniformizer().compose(&s_image)?;
        if &t_pushed != big.base_uniformizer() {
            return Err(OrbiparError::Validation(
                "base uniformizers are not compatible".into(),
            ));
        }
        Ok(ExtensionEmbedding {
            small,
            big,
            s_image,
            quotient,
        })
    }

    /// The identity embedding of an extension into itself.
    pub fn identity(ext: Arc<LocalExtension>) -> ExtensionEmbedding {
        let s = Series::var(ext.field(), ext.prec());
        let quotient = ext.group().elements().collect();
        ExtensionEmbedding::new(ext.clone(), ext, s, quotient).expect("identity embedding")
    }

    /// Kummer `n` inside Kummer `m` for `n | m`: `s = c s'^(m/n)` with the
    /// scalar `c` fixed by matching the base uniformizers.
    pub fn kummer_tower(
        small: Arc<LocalExtension>,
        big: Arc<LocalExtension>,
    ) -> Result<ExtensionEmbedding> {
        let (n, m) = match (small.kind(), big.kind()) {
            (ExtensionKind::Kummer { n, .. }, ExtensionKind::Kummer { n: m, .. }) => (*n, *m),
            _ => {
                return Err(OrbiparError::Config(
                    "kummer_tower needs two Kummer extensions".into(),
                ))
            }
        };
        if m % n != 0 {
            return Err(OrbiparError::Config(format!("{n} does not divide {m}")));
        }
        let f = small.field().clone();
        let d = m / n;
        let target = big.base_uniformizer().coeff(m);
        let lead = small.base_uniformizer().coeff(n);
        let c = f
            .elements()
            .skip(1)
            .find(|&c| f.mul(lead, f.pow(c, n as i64)) == target)
            .ok_or_else(|| {
                OrbiparError::Config("no scalar matches the base uniformizers".into())
            })?;
        let s_image = Series::monomial(&f, c, d, big.prec());
        let quotient = (0..m).map(|a| a % n).collect();
        ExtensionEmbedding::new(small, big, s_image, quotient)
    }

    /// Pushes a series of the small ring into the big ring.
    pub fn push_series(&self, x: &Series) -> Series {
        x.compose(&self.s_image).expect("validated embedding")
    }

    /// Pushes a Laurent value: `s^v f -> s_image^v f(s_image)`. The absolute
    /// precision scales by the valuation of `s_image` and is capped at `N`
    /// coefficients.
    pub fn push_laurent(&self, x: &Laurent) -> Laurent {
        let field = self.big.field();
        let n = self.big.prec();
        let d = self.s_image.valuation().unwrap_or(1) as i64;
        let x = x.truncated(n);
        let len = x.prec();
        if len == 0 {
            return Laurent::new(field, x.val_floor() * d, vec![]);
        }
        let unit = Series::from_coeffs(field, &self.s_image.coeffs()[d as usize..], n);
        let body = Series::from_coeffs(field, x.coeffs(), n);
        let moved = body.compose(&self.s_image).expect("validated embedding");
        let v = x.val_floor();
        let factor = if v >= 0 {
            unit.pow(v as usize)
        } else {
            unit.inverse().expect("unit").pow(v.unsigned_abs() as usize)
        };
        let monomial = self.s_image.coeffs().iter().filter(|&&c| c != 0).count() == 1;
        let cap = if monomial || v == 0 {
            n
        } else {
            n - d as usize
        };
        let out_len = (len * d as usize).min(cap);
        let c = moved.mul(&factor);
        Laurent::new(field, v * d, c.coeffs()[..out_len].to_vec())
    }

    /// Inverse of [`ExtensionEmbedding::push_series`] on its image: recovers
    /// `x` from `x(s_image)` greedily, with `floor(N / d)` coefficients.
    pub fn restrict_series(&self, y: &Series) -> Result<Series> {
        let f = self.big.field();
        let n = self.big.prec();
        let d = self.s_image.valuation().unwrap_or(1);
        let out_prec = n / d;
        let lead = self.s_image.coeff(d);
        let mut powers = Vec::with_capacity(out_prec + 1);
        let mut acc = Series::one(f, n);
        for _ in 0..=n.div_ceil(d) {
            powers.push(acc.clone());
            acc = acc.mul(&self.s_image);
        }
        let mut rem = y.with_prec(n);
        let mut out = vec![0u32; out_prec];
        while let Some(v) = rem.valuation() {
            if v % d != 0 {
                return Err(OrbiparError::NotInvariant { valuation: v });
            }
            let q = v / d;
            let c = f.div(rem.coeff(v), f.pow(lead, q as i64));
            if q < out_prec {
                out[q] = c;
            }
            rem = rem.sub(&powers[q].scale(c));
        }
        Ok(Series::from_coeffs(f, &out, out_prec))
    }
}
