//! Glued bundles: a generic part (the pullback of `V` away from the branch
//! points, kept implicit), a formal equivariant module per point and the
//! gluing matrices `tau_i` between them.

use std::fmt;
use std::sync::Arc;

use crate::algebra::matrix::{lmat_diff, lmat_inverse_det, smat_to_lmat, EntryDiff, LMat};
use crate::equivariant::product::ProductModule;
use crate::local_galois::FiniteGroup;

#[derive(Clone, Debug)]
pub struct GluedPoint {
    pub label: String,
    pub module: ProductModule,
    /// One invertible Laurent matrix per component of the fiber.
    pub tau: Vec<LMat>,
}

#[derive(Clone, Debug)]
pub struct GluedBundle {
    pub rank: usize,
    pub group: Arc<FiniteGroup>,
    pub points: Vec<GluedPoint>,
}

impl GluedBundle {
    pub fn point(&self, label: &str) -> Option<&GluedPoint> {
        self.points.iter().find(|p| p.label == label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingIssue {
    Singular {
        component: usize,
    },
    Equivariance {
        g: usize,
        component: usize,
        entry: EntryDiff,
    },
}

impl fmt::Display for GluingIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingIssue::Singular { component } => {
                write!(f, "tau on component {component} is singular")
            }
            GluingIssue::Equivariance {
                g,
                component,
                entry,
            } => {
                write!(
                    f,
                    "gluing not equivariant for element {g} from component {component} at {entry}"
                )
            }
        }
    }
}

/// `M_j(g) psi(ring)(tau_i) = tau_j` for every `g` and source `i`: the formal
/// action transported by `tau` is the plain substitution action on the
/// generic part.
pub fn verify_gluing(p: &GluedPoint) -> Option<GluingIssue> {
    let m = &p.module;
    for (component, t) in p.tau.iter().enumerate() {
        if lmat_inverse_det(t).is_err() {
            return Some(GluingIssue::Singular { component });
        }
    }
    for g in m.group().elements() {
        for i in 0..m.count() {
            let b = m.block(g, i);
            let lhs = smat_to_lmat(&b.mat).mul(&m.ext().psi_lmat(b.ring, &p.tau[i]));
            if let Some(entry) = lmat_diff(&lhs, &p.tau[b.target]) {
                return Some(GluingIssue::Equivariance {
                    g,
                    component: i,
                    entry,
                });
            }
        }
    }
    None
}
