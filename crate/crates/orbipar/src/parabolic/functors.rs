//! The functors between parabolic data and glued equivariant bundles, and
//! the explicit isomorphisms closing both round trips.

use crate::algebra::matrix::{
    lmat_diff, lmat_inverse, lmat_inverse_det, lmat_min_valuation, smat_inverse,
    smat_is_unimodular, smat_to_lmat, LMat, SMat,
};
use crate::equivariant::cocycle::Cocycle;
use crate::equivariant::invariants::{invariants, is_induced};
use crate::equivariant::product::{assemble, verify_morphism, ProductSpec};
use crate::equivariant::search::check_intertwiner;
use crate::error::{OrbiparError, Result};
use crate::parabolic::datum::{
    validate_point, window_exhausted, ParabolicDatum, ParabolicIssue, PointDatum,
};
use crate::parabolic::glued::{verify_gluing, GluedBundle, GluedPoint};
use crate::parabolic::scene::{CoverScene, ScenePoint};

fn config(msg: impl Into<String>) -> OrbiparError {
    OrbiparError::Config(msg.into())
}

/// T at one point: `Phi_1 = Psi`, `Phi_j` transported along the connectors
/// with identity transition matrices, `tau_j = psi(alpha_1j)(mu)`.
pub fn t_point(d: &PointDatum, sp: &ScenePoint) -> Result<GluedPoint> {
    let ext = d.ext().clone();
    if *ext.group() != sp.inertia_group {
        return Err(config(format!(
            "scene point {} expects inertia {} but the datum uses {}",
            sp.label,
            sp.inertia_group.name(),
            ext.group().name()
        )));
    }
    let orbit = sp.orbit.clone();
    let grp = orbit.group.clone();
    let conn = sp.connectors();
    let l = orbit.count();
    let mut components = Vec::with_capacity(l);
    for j in 0..l {
        let g0j = conn[0][j];
        let alpha = orbit.ring_elem(g0j, 0);
        let mats = (0..orbit.inertia.len())
            .map(|h| {
                let b = orbit.conj_into(j, h);
                let a = grp.mul(grp.mul(grp.inv(g0j), b), g0j);
                let a = orbit.to_inertia(a).ok_or_else(|| {
                    OrbiparError::Structural("connector does not conjugate isotropy".into())
                })?;
                Ok(ext.psi_smat(alpha, d.psi.mat(a)))
            })
            .collect::<Result<Vec<_>>>()?;
        components.push(Cocycle::new(ext.clone(), mats)?);
    }
    let mut spec = ProductSpec::with_identity_thetas(orbit, ext.clone(), components)?;
    spec.connectors = conn;
    let module = assemble(spec)?;
    let tau = (0..l)
        .map(|j| ext.psi_lmat(module.spec().alpha(0, j), &d.mu))
        .collect();
    let out = GluedPoint {
        label: d.label.clone(),
        module,
        tau,
    };
    if let Some(issue) = verify_gluing(&out) {
        return Err(OrbiparError::Validation(format!(
            "T output at {}: {issue}",
            d.label
        )));
    }
    Ok(out)
}

pub fn functor_t(d: &ParabolicDatum, scene: &CoverScene) -> Result<GluedBundle> {
    let points = d
        .points
        .iter()
        .map(|p| {
            let sp = scene
                .point(&p.label)
                .ok_or_else(|| config(format!("scene has no point {}", p.label)))?;
            t_point(p, sp)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GluedBundle {
        rank: d.rank,
        group: scene.group.clone(),
        points,
    })
}

/// How S identified `V (x) R` with the first component at a point.
#[derive(Clone, Debug)]
pub struct SChoice {
    pub label: String,
    /// First-component coordinates of the invariant basis.
    pub natural: SMat,
    /// The identification used: `natural` if it is unimodular, else the left
    /// factor of its Smith form.
    pub identification: SMat,
    pub induced: bool,
    pub profile: Vec<usize>,
}

/// S at one point: `V` is the module of invariants, `Psi = J^-1 Phi_1 psi(J)`
/// and `mu = J^-1 N` for the natural map `N` and identification `J`.
pub fn s_point(p: &GluedPoint) -> Result<(PointDatum, SChoice)> {
    let inv = invariants(&p.module)?;
    let rep = is_induced(&inv)?;
    let j = if rep.induced {
        inv.natural.clone()
    } else {
        rep.smith.u.clone()
    };
    let a = p.module.component_cocycle(0)?;
    let psi = a.gauge(&j)?;
    let mu = smat_to_lmat(&smat_inverse(&j)?.mul(&inv.natural));
    let d = PointDatum {
        label: p.label.clone(),
        psi,
        mu,
    };
    match validate_point(&d).issue {
        None => {}
        Some(ParabolicIssue::MuSingular) => return Err(window_exhausted(&d.mu)),
        Some(issue) => {
            return Err(OrbiparError::Validation(format!(
                "S output at {}: {issue}",
                p.label
            )));
        }
    }
    Ok((
        d,
        SChoice {
            label: p.label.clone(),
            natural: inv.natural,
            identification: j,
            induced: rep.induced,
            profile: rep.profile,
        },
    ))
}

pub fn functor_s(b: &GluedBundle) -> Result<(ParabolicDatum, Vec<SChoice>)> {
    let mut points = Vec::with_capacity(b.points.len());
    let mut choices = Vec::with_capacity(b.points.len());
    for p in &b.points {
        let (d, c) = s_point(p)?;
        points.push(d);
        choices.push(c);
    }
    Ok((ParabolicDatum::new(b.rank, points)?, choices))
}

/// Checks that a Laurent matrix is fixed by the substitution action of every
/// generator, i.e. lives over the base field `k((t))`.
pub fn is_base_matrix(d: &PointDatum, g: &LMat) -> bool {
    let ext = d.ext();
    ext.group()
        .generators()
        .iter()
        .all(|&h| lmat_diff(&ext.psi_lmat(h, g), g).is_none())
}

/// Integral with integral inverse.
pub fn is_base_unimodular(g: &LMat) -> bool {
    let integral = lmat_min_valuation(g).is_none_or(|v| v >= 0);
    integral
        && lmat_inverse_det(g)
            .ok()
            .and_then(|(_, det)| det.valuation())
            == Some(0)
}

#[derive(Clone, Debug)]
pub struct RoundTripPoint {
    pub label: String,
    pub induced: bool,
    pub profile: Vec<usize>,
    /// `S(T(d)) -> d`: ring part `sigma` and base part `g`.
    pub sigma: SMat,
    pub g: LMat,
    /// Whether `g` is invertible over `k[[t]]` and not only over `k((t))`.
    pub g_integral: bool,
    pub st_failure: Option<String>,
    /// `T(S(b)) -> b`: per-component `rho_i` and generic part `h`.
    pub rho: Vec<SMat>,
    pub h: LMat,
    pub ts_failure: Option<String>,
}

impl RoundTripPoint {
    pub fn passed(&self) -> bool {
        self.st_failure.is_none() && self.ts_failure.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub points: Vec<RoundTripPoint>,
}

impl RoundTrip {
    pub fn passed(&self) -> bool {
        self.points.iter().all(RoundTripPoint::passed)
    }
}

/// Checks a morphism `(g, sigma)` from `src` to `dst`: `sigma` intertwines the
/// actions and `mu_dst g = sigma mu_src`; `g` must be a base matrix.
pub fn check_point_morphism(
    src: &PointDatum,
    dst: &PointDatum,
    g: &LMat,
    sigma: &SMat,
) -> Option<String> {
    let n = src.ext().prec();
    if !check_intertwiner(&src.psi, &dst.psi, sigma, n) {
        return Some("sigma does not intertwine the actions".into());
    }
    if !is_base_matrix(src, g) {
        return Some("base part is not invariant".into());
    }
    let lhs = dst.mu.mul(g);
    let rhs = smat_to_lmat(sigma).mul(&src.mu);
    lmat_diff(&lhs, &rhs).map(|e| format!("mu square fails at {e}"))
}

/// The isomorphism `T(S(b)) -> b` at one point: `rho_1 = J`, the other
/// components forced by equivariance along the connectors of `T(S(b))`, and
/// the generic part `h = tau_1^-1 N`.
pub fn ts_point(b: &GluedPoint, sp: &ScenePoint) -> Result<(Vec<SMat>, LMat, Option<String>)> {
    let (d2, choice) = s_point(b)?;
    let b2 = t_point(&d2, sp)?;
    let (m, m2) = (&b.module, &b2.module);
    if !m.orbit().same_shape(m2.orbit()) {
        return Err(config("round trip changed the orbit data"));
    }
    let ext = m.ext();
    let mut rho = Vec::with_capacity(m.count());
    for j in 0..m.count() {
        let g = m2.spec().connectors[0][j];
        let (bb, b2b) = (m.block(g, 0), m2.block(g, 0));
        rho.push(
            bb.mat
                .mul(&ext.psi_smat(bb.ring, &choice.identification))
                .mul(&smat_inverse(&b2b.mat)?),
        );
    }
    let h = lmat_inverse(&b.tau[0])?.mul(&smat_to_lmat(&choice.natural));
    let mut failure = None;
    if rho.iter().any(|r| !smat_is_unimodular(r)) {
        failure = Some("rho is not invertible".to_string());
    } else if let Some(v) = verify_morphism(m2, m, &rho) {
        failure = Some(format!("rho is not equivariant: {v}"));
    } else if !is_base_matrix(&d2, &h) {
        failure = Some("generic part is not a base matrix".into());
    } else {
        for i in 0..m.count() {
            let lhs = smat_to_lmat(&rho[i]).mul(&b2.tau[i]);
            let rhs = b.tau[i].mul(&h);
            if let Some(e) = lmat_diff(&lhs, &rhs) {
                failure = Some(format!("gluing square fails on component {i} at {e}"));
                break;
            }
        }
    }
    Ok((rho, h, failure))
}

/// Both round trips at one point.
pub fn roundtrip_point(d: &PointDatum, sp: &ScenePoint) -> Result<RoundTripPoint> {
    let b = t_point(d, sp)?;
    let (d2, choice) = s_point(&b)?;
    let sigma = choice.identification.clone();
    let g = lmat_inverse(&d.mu)?.mul(&smat_to_lmat(&choice.natural));
    let mut st_failure = check_point_morphism(&d2, d, &g, &sigma);
    if st_failure.is_none() && !smat_is_unimodular(&sigma) {
        st_failure = Some("sigma is not invertible".into());
    }
    let (rho, h, ts_failure) = ts_point(&b, sp)?;
    Ok(RoundTripPoint {
        label: d.label.clone(),
        induced: choice.induced,
        profile: choice.profile,
        g_integral: is_base_unimodular(&g),
        sigma,
        g,
        st_failure,
        rho,
        h,
        ts_failure,
    })
}

pub fn roundtrip_check(d: &ParabolicDatum, scene: &CoverScene) -> Result<RoundTrip> {
    let points = d
        .points
        .iter()
        .map(|p| {
            let sp = scene
                .point(&p.label)
                .ok_or_else(|| config(format!("scene has no point {}", p.label)))?;
            roundtrip_point(p, sp)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RoundTrip { points })
}

/// Pointwise T and S with per-point outcomes; errors stay attached to their
/// point instead of aborting the others.
#[derive(Debug)]
pub struct MultipointReport {
    pub points: Vec<(String, Result<RoundTripPoint>)>,
}

impl MultipointReport {
    pub fn passed(&self) -> bool {
        self.points
            .iter()
            .all(|(_, r)| matches!(r, Ok(p) if p.passed()))
    }
}

pub fn multipoint_map(d: &ParabolicDatum, scene: &CoverScene) -> MultipointReport {
    let points = d
        .points
        .iter()
        .map(|p| {
            let r = scene
                .point(&p.label)
                .ok_or_else(|| config(format!("scene has no point {}", p.label)))
                .and_then(|sp| roundtrip_point(p, sp));
            (p.label.clone(), r)
        })
        .collect();
    MultipointReport { points }
}
