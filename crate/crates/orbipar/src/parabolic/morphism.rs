//! Morphisms of parabolic data and the isomorphism search.
//!
//! A morphism `(V, Psi, mu) -> (V', Psi', mu')` is a base map `g` together
//! with an equivariant `sigma` on `V (x) R` such that `mu' g = sigma mu`.

use crate::algebra::matrix::{lmat_inverse, smat_is_unimodular, smat_to_lmat, LMat, SMat};
use crate::equivariant::search::{find_intertwiner, Budget, Intertwiner};
use crate::error::{OrbiparError, Result};
use crate::parabolic::datum::{ParabolicDatum, PointDatum};
use crate::parabolic::functors::{check_point_morphism, is_base_unimodular};

#[derive(Clone, Debug)]
pub struct PointMorphism {
    pub label: String,
    pub g: LMat,
    pub sigma: SMat,
}

#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub points: Vec<(String, Option<String>)>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|(_, f)| f.is_none())
    }
}

fn paired<'a>(
    src: &'a ParabolicDatum,
    dst: &'a ParabolicDatum,
) -> Result<Vec<(&'a PointDatum, &'a PointDatum)>> {
    if src.points.len() != dst.points.len() {
        return Err(OrbiparError::Config("data have different supports".into()));
    }
    src.points
        .iter()
        .map(|p| {
            let q = dst.point(&p.label).ok_or_else(|| {
                OrbiparError::Config(format!("point {} missing from target", p.label))
            })?;
            if **p.ext() != **q.ext() {
                return Err(OrbiparError::Config(format!(
                    "extensions differ at {}",
                    p.label
                )));
            }
            Ok((p, q))
        })
        .collect()
}

pub fn validate_parabolic_morphism(
    src: &ParabolicDatum,
    dst: &ParabolicDatum,
    m: &[PointMorphism],
) -> Result<MorphismReport> {
    let pairs = paired(src, dst)?;
    let points = pairs
        .iter()
        .map(|(p, q)| {
            let f = match m.iter().find(|x| x.label == p.label) {
                None => Some("no morphism given".to_string()),
                Some(x) if x.sigma.rows() != q.psi.rank() || x.sigma.cols() != p.psi.rank() => {
                    Some("sigma has the wrong shape".into())
                }
                Some(x) => check_point_morphism(p, q, &x.g, &x.sigma),
            };
            (p.label.clone(), f)
        })
        .collect();
    Ok(MorphismReport { points })
}

#[derive(Clone, Debug)]
pub enum PointIso {
    Found {
        morphism: PointMorphism,
        base_integral: bool,
    },
    /// Certified: no invertible equivariant map exists modulo `s^level`.
    Absent {
        level: usize,
        dim: usize,
    },
    Inconclusive {
        level: usize,
        dim: usize,
    },
}

#[derive(Clone, Debug)]
pub struct IsoSearch {
    pub points: Vec<(String, PointIso)>,
}

impl IsoSearch {
    pub fn found(&self) -> bool {
        self.points
            .iter()
            .all(|(_, p)| matches!(p, PointIso::Found { .. }))
    }

    pub fn certified_absent(&self) -> bool {
        self.points
            .iter()
            .any(|(_, p)| matches!(p, PointIso::Absent { .. }))
    }

    pub fn morphisms(&self) -> Vec<PointMorphism> {
        self.points
            .iter()
            .filter_map(|(_, p)| match p {
                PointIso::Found { morphism, .. } => Some(morphism.clone()),
                _ => None,
            })
            .collect()
    }
}

/// At each point: an invertible `sigma` intertwining the actions (residue
/// level first, then full precision), then `g = mu_dst^-1 sigma mu_src`.
pub fn find_point_isomorphism(
    src: &PointDatum,
    dst: &PointDatum,
    budget: &Budget,
    seed: u64,
) -> Result<PointIso> {
    if src.psi.rank() != dst.psi.rank() {
        return Ok(PointIso::Absent { level: 0, dim: 0 });
    }
    let n = src.ext().prec();
    match find_intertwiner(&src.psi, &dst.psi, 1, budget, seed)? {
        Intertwiner::Absent { level, dim } => return Ok(PointIso::Absent { level, dim }),
        Intertwiner::Inconclusive { level, dim } => {
            return Ok(PointIso::Inconclusive { level, dim })
        }
        Intertwiner::Found(_) => {}
    }
    let sigma = match find_intertwiner(&src.psi, &dst.psi, n, budget, seed)? {
        Intertwiner::Found(s) => s,
        Intertwiner::Absent { level, dim } => return Ok(PointIso::Absent { level, dim }),
        Intertwiner::Inconclusive { level, dim } => {
            return Ok(PointIso::Inconclusive { level, dim })
        }
    };
    let g = lmat_inverse(&dst.mu)?
        .mul(&smat_to_lmat(&sigma))
        .mul(&src.mu);
    if !smat_is_unimodular(&sigma) {
        return Ok(PointIso::Inconclusive { level: n, dim: 0 });
    }
    if let Some(f) = check_point_morphism(src, dst, &g, &sigma) {
        return Err(OrbiparError::Validation(format!(
            "isomorphism candidate failed: {f}"
        )));
    }
    Ok(PointIso::Found {
        base_integral: is_base_unimodular(&g),
        morphism: PointMorphism {
            label: src.label.clone(),
            g,
            sigma,
        },
    })
}

pub fn find_parabolic_isomorphism(
    src: &ParabolicDatum,
    dst: &ParabolicDatum,
    budget: &Budget,
    seed: u64,
) -> Result<IsoSearch> {
    let pairs = paired(src, dst)?;
    let points = pairs
        .iter()
        .map(|(p, q)| Ok((p.label.clone(), find_point_isomorphism(p, q, budget, seed)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IsoSearch { points })
}
