//! Refinement pullback `i*` along bigger extensions at the same points, the
//! equivalence relation it induces, and the matching pullback of glued
//! bundles along a map of scenes.

use std::sync::Arc;

use crate::algebra::matrix::{lmat_diff, smat_to_lmat, LMat};
use crate::equivariant::product::{
    from_blocks, independence_intertwiner, make_connectors, verify_morphism, Block, ProductSpec,
};
use crate::equivariant::search::Budget;
use crate::error::{OrbiparError, Result};
use crate::local_galois::{ExtensionEmbedding, LocalExtension};
use crate::parabolic::datum::{validate_point, ParabolicDatum, PointDatum};
use crate::parabolic::functors::functor_t;
use crate::parabolic::glued::{verify_gluing, GluedBundle, GluedPoint};
use crate::parabolic::morphism::{
    find_parabolic_isomorphism, validate_parabolic_morphism, IsoSearch, PointIso, PointMorphism,
};
use crate::parabolic::scene::{CoverScene, ScenePoint};

#[derive(Clone, Debug)]
pub enum RefinementTarget {
    Embed(ExtensionEmbedding),
    /// A point outside the support of the source: the datum there is trivial.
    Extend(Arc<LocalExtension>),
}

#[derive(Clone, Debug, Default)]
pub struct RefinementMap {
    pub points: Vec<(String, RefinementTarget)>,
}

impl RefinementMap {
    pub fn identity(d: &ParabolicDatum) -> RefinementMap {
        RefinementMap {
            points: d
                .points
                .iter()
                .map(|p| {
                    (
                        p.label.clone(),
                        RefinementTarget::Embed(ExtensionEmbedding::identity(p.ext().clone())),
                    )
                })
                .collect(),
        }
    }

    pub fn get(&self, label: &str) -> Option<&RefinementTarget> {
        self.points.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }

    pub fn embed(mut self, label: &str, emb: ExtensionEmbedding) -> Self {
        self.points
            .push((label.to_string(), RefinementTarget::Embed(emb)));
        self
    }
}

pub fn push_lmat(emb: &ExtensionEmbedding, a: &LMat) -> LMat {
    a.map(|x| emb.push_laurent(x))
}

/// `A'_g = A_q(g)(s_image)` and `mu' = mu(s_image)`, then revalidated.
pub fn pullback_point(d: &PointDatum, emb: &ExtensionEmbedding) -> Result<PointDatum> {
    let psi = d.psi.pullback(emb)?;
    let mu = push_lmat(emb, &d.mu);
    let shortest = mu.entries().iter().map(|x| x.prec()).min().unwrap_or(0);
    if shortest == 0 {
        let achievable = d.mu.entries().iter().map(|x| x.prec()).min().unwrap_or(0);
        return Err(OrbiparError::Precision { achievable });
    }
    let out = PointDatum {
        label: d.label.clone(),
        psi,
        mu,
    };
    if let Some(issue) = validate_point(&out).issue {
        return Err(OrbiparError::Validation(format!(
            "pullback at {}: {issue}",
            d.label
        )));
    }
    Ok(out)
}

pub fn pullback_refine(d: &ParabolicDatum, r: &RefinementMap) -> Result<ParabolicDatum> {
    let mut points = Vec::with_capacity(r.points.len());
    for p in &d.points {
        match r.get(&p.label) {
            Some(RefinementTarget::Embed(emb)) => points.push(pullback_point(p, emb)?),
            Some(RefinementTarget::Extend(_)) => {
                return Err(OrbiparError::Config(format!(
                    "point {} is in the support; it needs an embedding",
                    p.label
                )))
            }
            None => {
                return Err(OrbiparError::Config(format!(
                    "no embedding given for point {}",
                    p.label
                )))
            }
        }
    }
    for (label, t) in &r.points {
        if let RefinementTarget::Extend(ext) = t {
            if d.point(label).is_some() {
                continue;
            }
            points.push(PointDatum::trivial(label, ext.clone(), d.rank));
        }
    }
    ParabolicDatum::new(d.rank, points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivStatus {
    Equivalent,
    NotEquivalent,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct EquivReport {
    pub status: EquivStatus,
    pub left: ParabolicDatum,
    pub right: ParabolicDatum,
    pub morphisms: Vec<PointMorphism>,
    /// Per point: what settled it.
    pub notes: Vec<(String, String)>,
}

/// Pulls both data back to the common refinement. A supplied identification
/// is checked first; otherwise (or if it fails) the isomorphism search
/// decides. `NotEquivalent` is only reported with a residue-level certificate.
pub fn equiv_check(
    d1: &ParabolicDatum,
    r1: &RefinementMap,
    d2: &ParabolicDatum,
    r2: &RefinementMap,
    identification: Option<&[PointMorphism]>,
    budget: &Budget,
    seed: u64,
) -> Result<EquivReport> {
    let left = pullback_refine(d1, r1)?;
    let right = pullback_refine(d2, r2)?;
    let mut notes = Vec::new();
    if let Some(m) = identification {
        let rep = validate_parabolic_morphism(&left, &right, m)?;
        if rep.passed() {
            return Ok(EquivReport {
                status: EquivStatus::Equivalent,
                left,
                right,
                morphisms: m.to_vec(),
                notes: vec![],
            });
        }
        for (label, f) in rep.points {
            if let Some(f) = f {
                notes.push((label, format!("supplied identification fails: {f}")));
            }
        }
    }
    let search: IsoSearch = find_parabolic_isomorphism(&left, &right, budget, seed)?;
    let status = if search.found() {
        EquivStatus::Equivalent
    } else if search.certified_absent() {
        EquivStatus::NotEquivalent
    } else {
        EquivStatus::Inconclusive
    };
    for (label, p) in &search.points {
        let note = match p {
            PointIso::Found { base_integral, .. } => {
                format!("isomorphism found (base part integral: {base_integral})")
            }
            PointIso::Absent { level, dim } => {
                format!("no invertible intertwiner mod s^{level} (hom dimension {dim})")
            }
            PointIso::Inconclusive { level, dim } => {
                format!("search undecided mod s^{level} (hom dimension {dim})")
            }
        };
        notes.push((label.clone(), note));
    }
    Ok(EquivReport {
        status,
        morphisms: search.morphisms(),
        left,
        right,
        notes,
    })
}

/// The map of scenes at one point: `quotient` sends the big group onto the
/// small one, compatibly with the extension embedding and the fiber.
fn check_scene_map(
    small: &GluedPoint,
    big: &ScenePoint,
    emb: &ExtensionEmbedding,
    quotient: &[usize],
) -> Result<()> {
    let so = small.module.orbit();
    let bo = &big.orbit;
    if !bo.group.is_homomorphism(&so.group, quotient) || so.count() != bo.count() {
        return Err(OrbiparError::Config(
            "group quotient does not map the scenes".into(),
        ));
    }
    if **small.module.ext() != *emb.small || big.inertia_group != *emb.big.group() {
        return Err(OrbiparError::Config(
            "embedding does not match the scenes".into(),
        ));
    }
    for g in bo.group.elements() {
        for i in 0..bo.count() {
            let q = quotient[g];
            if so.target(q, i) != bo.target(g, i)
                || emb.quotient[bo.ring_elem(g, i)] != so.ring_elem(q, i)
            {
                return Err(OrbiparError::Config(format!(
                    "quotient is not compatible with the fiber at element {g}, component {i}"
                )));
            }
        }
    }
    Ok(())
}

/// Pullback of a glued point along a map of scenes: every block is pushed
/// through the embedding, `tau` likewise. Connector seeds are lifted to the
/// smallest preimages that move the components correctly.
pub fn glued_pullback_point(
    p: &GluedPoint,
    big: &ScenePoint,
    emb: &ExtensionEmbedding,
    quotient: &[usize],
) -> Result<GluedPoint> {
    check_scene_map(p, big, emb, quotient)?;
    let bo = big.orbit.clone();
    let l = bo.count();
    let small_conn = &p.module.spec().connectors;
    let seeds = (1..l)
        .map(|i| {
            let want = small_conn[i - 1][i];
            bo.group
                .elements()
                .find(|&g| quotient[g] == want && bo.target(g, i - 1) == i)
                .ok_or_else(|| OrbiparError::Config(format!("seed {want} has no lift")))
        })
        .collect::<Result<Vec<_>>>()?;
    let connectors = make_connectors(&bo, &seeds)?;
    let blocks = bo
        .group
        .elements()
        .map(|g| {
            (0..l)
                .map(|i| {
                    let b = p.module.block(quotient[g], i);
                    Block {
                        target: b.target,
                        ring: bo.ring_elem(g, i),
                        mat: b.mat.map(|x| emb.push_series(x)),
                    }
                })
                .collect()
        })
        .collect();
    let spec = ProductSpec {
        orbit: bo,
        ext: emb.big.clone(),
        connectors,
        thetas: vec![],
        components: vec![],
    };
    let module = from_blocks(spec, blocks)?;
    let out = GluedPoint {
        label: p.label.clone(),
        module,
        tau: p.tau.iter().map(|t| push_lmat(emb, t)).collect(),
    };
    if let Some(issue) = verify_gluing(&out) {
        return Err(OrbiparError::Validation(format!(
            "pulled-back gluing at {}: {issue}",
            p.label
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TowerPoint {
    pub label: String,
    /// Per-component intertwiner from `T'(i* d)` to the pulled-back bundle.
    pub rho: Vec<crate::algebra::matrix::SMat>,
    pub failure: Option<String>,
}

/// `T'(i* d)` against the pullback of `T(d)`: an explicit intertwiner of the
/// formal parts that also carries one set of gluing matrices to the other.
pub fn tower_compatibility(
    d: &ParabolicDatum,
    small: &CoverScene,
    big: &CoverScene,
    refinement: &RefinementMap,
    quotient: &[usize],
) -> Result<Vec<TowerPoint>> {
    let lhs = functor_t(&pullback_refine(d, refinement)?, big)?;
    let b = functor_t(d, small)?;
    let rhs = glued_pullback(&b, big, refinement, quotient)?;
    lhs.points
        .iter()
        .map(|x| {
            let y = rhs.point(&x.label).ok_or_else(|| {
                OrbiparError::Config(format!("point {} missing after pullback", x.label))
            })?;
            let rho = independence_intertwiner(&x.module, &y.module)?;
            let mut failure = verify_morphism(&x.module, &y.module, &rho)
                .map(|v| format!("not equivariant: {v}"));
            if failure.is_none() {
                for (i, r) in rho.iter().enumerate() {
                    if let Some(e) = lmat_diff(&smat_to_lmat(r).mul(&x.tau[i]), &y.tau[i]) {
                        failure = Some(format!("gluing square fails on component {i} at {e}"));
                        break;
                    }
                }
            }
            Ok(TowerPoint {
                label: x.label.clone(),
                rho,
                failure,
            })
        })
        .collect()
}

pub fn glued_pullback(
    b: &GluedBundle,
    big: &CoverScene,
    refinement: &RefinementMap,
    quotient: &[usize],
) -> Result<GluedBundle> {
    let points = b
        .points
        .iter()
        .map(|p| {
            let sp = big
                .point(&p.label)
                .ok_or_else(|| OrbiparError::Config(format!("scene has no point {}", p.label)))?;
            match refinement.get(&p.label) {
                Some(RefinementTarget::Embed(emb)) => glued_pullback_point(p, sp, emb, quotient),
                _ => Err(OrbiparError::Config(format!(
                    "no embedding given for point {}",
                    p.label
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GluedBundle {
        rank: b.rank,
        group: big.group.clone(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::local_galois::make_kummer;
    use crate::parabolic::corpus::{random_datum, sign_twist};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tower() -> (Arc<LocalExtension>, Arc<LocalExtension>, ExtensionEmbedding) {
        let f = Field::prime(5).unwrap();
        let k2 = Arc::new(make_kummer(&f, 2, 16).unwrap());
        let k4 = Arc::new(make_kummer(&f, 4, 16).unwrap());
        let emb = ExtensionEmbedding::kummer_tower(k2.clone(), k4.clone()).unwrap();
        (k2, k4, emb)
    }

    #[test]
    fn identity_refinement_is_identity() {
        let (k2, _, _) = tower();
        let d = ParabolicDatum::single(sign_twist("p", k2).unwrap());
        let e = pullback_refine(&d, &RefinementMap::identity(&d)).unwrap();
        assert_eq!(e.points[0].mu, d.points[0].mu);
        assert_eq!(e.points[0].psi.mats(), d.points[0].psi.mats());
    }

    #[test]
    fn sign_twist_pulled_to_kummer4() {
        let (k2, _, emb) = tower();
        let d = ParabolicDatum::single(sign_twist("p", k2).unwrap());
        let r = RefinementMap::default().embed("p", emb.clone());
        let e = pullback_refine(&d, &r).unwrap();
        let psi = &e.points[0].psi;
        assert_eq!(psi.mats().len(), 4);
        assert_eq!(psi.mat(1).get(0, 0).coeff(0), 4);
        assert_eq!(psi.mat(2).get(0, 0).coeff(0), 1);
        // restricting along the embedding recovers the original entries
        let back = emb.restrict_series(psi.mat(1).get(0, 0)).unwrap();
        assert_eq!(back.coeff(0), 4);
    }

    #[test]
    fn separation_after_pullback() {
        let (k2, k4, emb) = tower();
        let d = ParabolicDatum::single(sign_twist("p", k2.clone()).unwrap());
        let one = ParabolicDatum::single(PointDatum::trivial("p", k2, 1));
        let r = RefinementMap::default().embed("p", emb);
        let rep = equiv_check(&d, &r, &one, &r, None, &Budget::default(), 1).unwrap();
        assert_eq!(rep.status, EquivStatus::NotEquivalent);
        let same = RefinementMap::identity(&pullback_refine(&d, &r).unwrap());
        let rep = equiv_check(
            &d,
            &r,
            &pullback_refine(&d, &r).unwrap(),
            &same,
            None,
            &Budget::default(),
            1,
        )
        .unwrap();
        assert_eq!(rep.status, EquivStatus::Equivalent);
        assert_eq!(*rep.left.points[0].ext().group(), *k4.group());
    }

    #[test]
    fn extend_support_adds_trivial_point() {
        let (k2, k4, emb) = tower();
        let d = ParabolicDatum::single(sign_twist("p", k2).unwrap());
        let mut r = RefinementMap::default().embed("p", emb);
        r.points.push(("q".into(), RefinementTarget::Extend(k4)));
        let e = pullback_refine(&d, &r).unwrap();
        assert_eq!(e.points.len(), 2);
        assert!(e.point("q").unwrap().psi.verify().is_none());
    }

    #[test]
    fn tower_commutes_with_t() {
        let (k2, k4, emb) = tower();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // totally ramified
        let d =
            ParabolicDatum::single(random_datum("p", k2.clone(), &[0, 1], 0, &mut rng).unwrap());
        let r = RefinementMap::default().embed("p", emb.clone());
        let small = CoverScene::totally_ramified("p", &k2);
        let big = CoverScene::totally_ramified("p", &k4);
        let pts = tower_compatibility(&d, &small, &big, &r, &emb.quotient).unwrap();
        assert!(pts[0].failure.is_none());
        // with a Z/2 factor: Z/4 x Z/2 -> Z/2 x Z/2
        let small = CoverScene::with_cyclic_factor("p", &k2, 2);
        let big = CoverScene::with_cyclic_factor("p", &k4, 2);
        let q: Vec<usize> = (0..8).map(|g| (g % 4) % 2 + 2 * (g / 4)).collect();
        assert!(big.group.is_homomorphism(&small.group, &q));
        let pts = tower_compatibility(&d, &small, &big, &r, &q).unwrap();
        assert!(pts[0].failure.is_none(), "{:?}", pts[0].failure);
    }
}
