//! Seeded random data: unimodular matrices and cocycles with prescribed
//! weights.

use rand::Rng;

use crate::algebra::field::Field;
use crate::algebra::matrix::{Matrix, SMat};
use crate::algebra::series::Series;
use crate::equivariant::cocycle::Cocycle;
use crate::error::Result;
use crate::local_galois::LocalExtension;
use std::sync::Arc;

pub fn random_series<R: Rng>(field: &Field, prec: usize, rng: &mut R) -> Series {
    let c: Vec<u32> = (0..prec).map(|_| rng.random_range(0..field.q())).collect();
    Series::from_coeffs(field, &c, prec)
}

/// Random matrix over `k[[s]]` whose residue is invertible.
pub fn random_unimodular<R: Rng>(field: &Field, prec: usize, r: usize, rng: &mut R) -> SMat {
    loop {
        let m = Matrix::from_fn(r, r, |_, _| random_series(field, prec, rng));
        if crate::algebra::matrix::smat_is_unimodular(&m) {
            return m;
        }
    }
}

/// Random unimodular matrix over `k[[t]]` (with `floor(N/e)` coefficients),
/// evaluated at `t = t(s)`.
pub fn random_base_unimodular<R: Rng>(ext: &LocalExtension, r: usize, rng: &mut R) -> SMat {
    let m = random_unimodular(ext.field(), ext.base_prec().max(1), r, rng);
    m.map(|x| ext.eval_base(x))
}

/// `D_g = diag((s / sigma_g(s))^m_i)`; its invariants are spanned by
/// `s^m_i e_i`.
pub fn weight_cocycle(ext: Arc<LocalExtension>, weights: &[usize]) -> Result<Cocycle> {
    let f = ext.field().clone();
    let n = ext.prec();
    let r = weights.len();
    let mats = ext
        .group()
        .elements()
        .map(|g| {
            Matrix::from_fn(r, r, |i, j| {
                if i == j {
                    ext.unit_inv(g).pow(weights[i])
                } else {
                    Series::zero(&f, n)
                }
            })
        })
        .collect();
    Cocycle::new(ext, mats)
}

/// `A_g = B D_g psi(g)(B)^-1` for a random unimodular `B`; returns the
/// cocycle and `B`.
pub fn random_weighted<R: Rng>(
    ext: Arc<LocalExtension>,
    weights: &[usize],
    rng: &mut R,
) -> Result<(Cocycle, SMat)> {
    let b = random_unimodular(ext.field(), ext.prec(), weights.len(), rng);
    let d = weight_cocycle(ext, weights)?;
    let binv = crate::algebra::matrix::smat_inverse(&b)?;
    Ok((d.gauge(&binv)?, b))
}
