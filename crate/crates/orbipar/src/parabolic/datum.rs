//! Local parabolic data `(V, Psi, mu)`: a free module of rank `r`, a
//! semilinear inertia action on `V (x) R` and a generic equivariant
//! identification `mu`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::laurent::Laurent;
use crate::algebra::matrix::{
    lmat_diff, lmat_identity, lmat_inverse_det, smat_to_lmat, EntryDiff, LMat, Matrix,
};
use crate::equivariant::cocycle::{Cocycle, CocycleViolation};
use crate::error::{structural, OrbiparError, Result};
use crate::local_galois::LocalExtension;

#[derive(Clone, Debug)]
pub struct PointDatum {
    pub label: String,
    pub psi: Cocycle,
    pub mu: LMat,
}

impl PointDatum {
    pub fn ext(&self) -> &Arc<LocalExtension> {
        self.psi.ext()
    }

    pub fn trivial(label: &str, ext: Arc<LocalExtension>, rank: usize) -> PointDatum {
        let mu = lmat_identity(ext.field(), ext.prec(), rank);
        PointDatum {
            label: label.to_string(),
            psi: Cocycle::trivial(ext, rank),
            mu,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    pub rank: usize,
    pub points: Vec<PointDatum>,
}

impl ParabolicDatum {
    pub fn new(rank: usize, points: Vec<PointDatum>) -> Result<ParabolicDatum> {
        for p in &points {
            if p.psi.rank() != rank || p.mu.rows() != rank || p.mu.cols() != rank {
                return Err(structural(format!(
                    "point {} does not have rank {rank}",
                    p.label
                )));
            }
        }
        let mut labels: Vec<&str> = points.iter().map(|p| p.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(structural("duplicate point labels"));
        }
        Ok(ParabolicDatum { rank, points })
    }

    pub fn single(point: PointDatum) -> ParabolicDatum {
        ParabolicDatum {
            rank: point.psi.rank(),
            points: vec![point],
        }
    }

    pub fn point(&self, label: &str) -> Option<&PointDatum> {
        self.points.iter().find(|p| p.label == label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParabolicIssue {
    /// Condition (a): the action is not a cocycle.
    Cocycle(CocycleViolation),
    /// Condition (b): `A_g psi(g)(mu) != mu`.
    MuEquivariance {
        g: usize,
        entry: EntryDiff,
    },
    MuSingular,
}

impl fmt::Display for ParabolicIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParabolicIssue::Cocycle(v) => write!(f, "condition (a): {v}"),
            ParabolicIssue::MuEquivariance { g, entry } => {
                write!(f, "condition (b) fails for element {g} at {entry}")
            }
            ParabolicIssue::MuSingular => write!(f, "mu is singular on its window"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub label: String,
    pub issue: Option<ParabolicIssue>,
    /// Common validity window `[floor, abs)` of the condition (b) comparison.
    pub window: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicReport {
    pub points: Vec<PointReport>,
}

impl ParabolicReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.issue.is_none())
    }

    pub fn first_issue(&self) -> Option<(&str, &ParabolicIssue)> {
        self.points
            .iter()
            .find_map(|p| p.issue.as_ref().map(|i| (p.label.as_str(), i)))
    }
}

/// `A_g psi(g)(mu)` as a Laurent matrix.
pub fn twisted_mu(psi: &Cocycle, mu: &LMat, g: usize) -> LMat {
    smat_to_lmat(psi.mat(g)).mul(&psi.ext().psi_lmat(g, mu))
}

/// A derived `mu` that is invertible in exact arithmetic but whose window is
/// too short to show it.
pub fn window_exhausted(mu: &LMat) -> OrbiparError {
    let achievable = mu.entries().iter().map(|x| x.prec()).min().unwrap_or(0);
    OrbiparError::Precision { achievable }
}

pub fn validate_point(p: &PointDatum) -> PointReport {
    let mut window = (0, 0);
    let issue = (|| {
        if let Some(v) = p.psi.verify() {
            return Some(ParabolicIssue::Cocycle(v));
        }
        if lmat_inverse_det(&p.mu).is_err() {
            return Some(ParabolicIssue::MuSingular);
        }
        for g in p.ext().group().elements() {
            let lhs = twisted_mu(&p.psi, &p.mu, g);
            window = common_window(&lhs, &p.mu);
            if let Some(entry) = lmat_diff(&lhs, &p.mu) {
                return Some(ParabolicIssue::MuEquivariance { g, entry });
            }
        }
        None
    })();
    PointReport {
        label: p.label.clone(),
        issue,
        window,
    }
}

fn common_window(a: &LMat, b: &LMat) -> (i64, i64) {
    let lo = a
        .entries()
        .iter()
        .chain(b.entries())
        .map(Laurent::val_floor)
        .min()
        .unwrap_or(0);
    let hi = a
        .entries()
        .iter()
        .chain(b.entries())
        .map(Laurent::abs_prec)
        .min()
        .unwrap_or(0);
    (lo, hi)
}

/// Conditions (a) and (b) at every point.
pub fn validate_parabolic(d: &ParabolicDatum) -> ParabolicReport {
    ParabolicReport {
        points: d.points.iter().map(validate_point).collect(),
    }
}

/// Scalar Laurent matrix `c s^v` of size 1.
pub fn laurent_scalar(ext: &LocalExtension, c: u32, v: i64) -> LMat {
    Matrix::from_fn(1, 1, |_, _| {
        Laurent::monomial(ext.field(), c, v, ext.prec())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::matrix::Matrix;
    use crate::algebra::series::Series;
    use crate::local_galois::make_kummer;

    fn sign(ext: &Arc<LocalExtension>) -> Cocycle {
        let f = ext.field();
        Cocycle::from_generator(
            ext.clone(),
            Matrix::from_fn(1, 1, |_, _| Series::constant(f, 4, ext.prec())),
        )
        .unwrap()
    }

    #[test]
    fn trivial_datum_passes() {
        let f = Field::prime(5).unwrap();
        let ext = Arc::new(make_kummer(&f, 2, 8).unwrap());
        let d = ParabolicDatum::single(PointDatum::trivial("p", ext, 2));
        assert!(validate_parabolic(&d).passed());
    }

    #[test]
    fn sign_twist_needs_mu_s() {
        let f = Field::prime(5).unwrap();
        let ext = Arc::new(make_kummer(&f, 2, 8).unwrap());
        let good = PointDatum {
            label: "p".into(),
            psi: sign(&ext),
            mu: laurent_scalar(&ext, 1, 1),
        };
        assert!(validate_parabolic(&ParabolicDatum::single(good)).passed());
        let bad = PointDatum {
            label: "p".into(),
            psi: sign(&ext),
            mu: laurent_scalar(&ext, 1, 0),
        };
        let rep = validate_parabolic(&ParabolicDatum::single(bad));
        assert!(matches!(
            rep.first_issue(),
            Some((_, ParabolicIssue::MuEquivariance { g: 1, .. }))
        ));
    }
}
