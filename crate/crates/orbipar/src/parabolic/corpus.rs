//! Standard and seeded random parabolic data.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::laurent::Laurent;
use crate::algebra::matrix::{smat_to_lmat, LMat, Matrix};
use crate::algebra::series::Series;
use crate::equivariant::cocycle::Cocycle;
use crate::equivariant::random::{random_base_unimodular, random_weighted};
use crate::error::{OrbiparError, Result};
use crate::local_galois::LocalExtension;
use crate::parabolic::datum::{
    laurent_scalar, validate_point, window_exhausted, ParabolicIssue, PointDatum,
};

/// `t^k` as a Laurent series in `s`.
pub fn t_power(ext: &LocalExtension, k: i64) -> Result<Laurent> {
    let t = Laurent::from_series(ext.base_uniformizer());
    let base = if k < 0 { t.inverse()? } else { t };
    let mut out = Laurent::monomial(ext.field(), 1, 0, ext.prec());
    for _ in 0..k.unsigned_abs() {
        out = out.mul(&base);
    }
    Ok(out)
}

pub fn lmat_scale_by(a: &LMat, x: &Laurent) -> LMat {
    a.map(|e| e.mul(x))
}

/// Kummer character of order 2 (`A_gen = -1`) with `mu = s`.
pub fn sign_twist(label: &str, ext: Arc<LocalExtension>) -> Result<PointDatum> {
    let f = ext.field().clone();
    let minus_one = f.neg(1);
    let psi = Cocycle::from_generator(
        ext.clone(),
        Matrix::from_fn(1, 1, |_, _| Series::constant(&f, minus_one, ext.prec())),
    )?;
    Ok(PointDatum {
        label: label.to_string(),
        mu: laurent_scalar(&ext, 1, 1),
        psi,
    })
}

/// `A_g = B D_g psi(g)(B)^-1` with weights `m_i` and
/// `mu = B diag(s^m_i) C t^k` for a random base-unimodular `C`.
pub fn random_datum<R: Rng>(
    label: &str,
    ext: Arc<LocalExtension>,
    weights: &[usize],
    base_power: i64,
    rng: &mut R,
) -> Result<PointDatum> {
    let (psi, b) = random_weighted(ext.clone(), weights, rng)?;
    let c = random_base_unimodular(&ext, weights.len(), rng);
    let f = ext.field();
    let n = ext.prec();
    let diag = Matrix::from_fn(weights.len(), weights.len(), |i, j| {
        if i == j {
            Laurent::monomial(f, 1, weights[i] as i64, n)
        } else {
            Laurent::monomial(f, 0, 0, n)
        }
    });
    let mu = smat_to_lmat(&b).mul(&diag).mul(&smat_to_lmat(&c));
    let mu = lmat_scale_by(&mu, &t_power(&ext, base_power)?);
    let d = PointDatum {
        label: label.to_string(),
        psi,
        mu,
    };
    match validate_point(&d).issue {
        None => Ok(d),
        Some(ParabolicIssue::MuSingular) => Err(window_exhausted(&d.mu)),
        Some(issue) => Err(OrbiparError::Validation(format!(
            "random datum at {label}: {issue}"
        ))),
    }
}
