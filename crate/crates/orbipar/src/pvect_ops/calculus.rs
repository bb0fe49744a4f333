//! Tensor products and duals of parabolic data.

use crate::algebra::matrix::lmat_inverse;
use crate::equivariant::search::{trivialize, Budget, Trivialization};
use crate::error::{OrbiparError, Result};
use crate::parabolic::datum::{
    validate_point, window_exhausted, ParabolicDatum, ParabolicIssue, PointDatum,
};
use crate::parabolic::functors::{s_point, t_point};
use crate::parabolic::morphism::{find_point_isomorphism, PointIso};
use crate::parabolic::scene::CoverScene;

fn checked(p: PointDatum, what: &str) -> Result<PointDatum> {
    match validate_point(&p).issue {
        None => Ok(p),
        Some(ParabolicIssue::MuSingular) => Err(window_exhausted(&p.mu)),
        Some(i) => Err(OrbiparError::Validation(format!(
            "{what} at {}: {i}",
            p.label
        ))),
    }
}

/// Kronecker products of actions and of `mu`; index `(i1, i2) -> i1 r2 + i2`.
pub fn tensor(d1: &ParabolicDatum, d2: &ParabolicDatum) -> Result<ParabolicDatum> {
    if d1.points.len() != d2.points.len() {
        return Err(OrbiparError::Config(
            "tensor factors have different supports".into(),
        ));
    }
    let points = d1
        .points
        .iter()
        .map(|p| {
            let q = d2.point(&p.label).ok_or_else(|| {
                OrbiparError::Config(format!("point {} missing from second factor", p.label))
            })?;
            let out = PointDatum {
                label: p.label.clone(),
                psi: p.psi.kron(&q.psi)?,
                mu: p.mu.kron(&q.mu),
            };
            checked(out, "tensor")
        })
        .collect::<Result<Vec<_>>>()?;
    ParabolicDatum::new(d1.rank * d2.rank, points)
}

/// The contragredient `((A_g)^-1)^T`, `(mu^-1)^T` at one point.
pub fn contragredient_point(p: &PointDatum) -> Result<PointDatum> {
    let out = PointDatum {
        label: p.label.clone(),
        psi: p.psi.contragredient()?,
        mu: lmat_inverse(&p.mu)?.transpose(),
    };
    checked(out, "dual")
}

/// Dual datum: the contragredient, brought back to normal form by passing
/// it through `T` and `S` on the totally ramified scene. The result has an
/// integral `mu`.
pub fn dual(d: &ParabolicDatum) -> Result<ParabolicDatum> {
    let points = d
        .points
        .iter()
        .map(|p| {
            let c = contragredient_point(p)?;
            let scene = CoverScene::totally_ramified(&p.label, c.ext());
            let b = t_point(&c, &scene.points[0])?;
            Ok(s_point(&b)?.0)
        })
        .collect::<Result<Vec<_>>>()?;
    ParabolicDatum::new(d.rank, points)
}

#[derive(Clone, Debug)]
pub struct PairingPoint {
    pub label: String,
    pub trivialization: Trivialization,
    pub iso: PointIso,
}

#[derive(Clone, Debug)]
pub struct PairingReport {
    pub rank: usize,
    pub points: Vec<PairingPoint>,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| {
            matches!(p.trivialization, Trivialization::Found { .. })
                && matches!(p.iso, PointIso::Found { .. })
        })
    }
}

/// `V (x) V*` against the trivial datum of rank `n^2`: trivializes the action
/// and searches an explicit isomorphism at every point.
pub fn dual_pairing_check(d: &ParabolicDatum, budget: &Budget, seed: u64) -> Result<PairingReport> {
    let w = tensor(d, &dual(d)?)?;
    let points = w
        .points
        .iter()
        .map(|p| {
            let one = PointDatum::trivial(&p.label, p.ext().clone(), w.rank);
            Ok(PairingPoint {
                label: p.label.clone(),
                trivialization: trivialize(&p.psi, budget, seed)?,
                iso: find_point_isomorphism(p, &one, budget, seed)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PairingReport {
        rank: w.rank,
        points,
    })
}
