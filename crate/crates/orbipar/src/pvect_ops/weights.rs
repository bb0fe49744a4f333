//! Weights at a tame point: eigenvalues `zeta^a` of the residue action of
//! the canonical generator, read as `a / n`.

use crate::algebra::linsolve::{kernel, KMat};
use crate::algebra::matrix::smat_residue;
use crate::error::{OrbiparError, Result};
use crate::local_galois::ExtensionKind;
use crate::parabolic::datum::PointDatum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub n: usize,
    /// `(a, multiplicity)` with `0 <= a < n`, ascending, zero multiplicities
    /// left out.
    pub weights: Vec<(usize, usize)>,
    /// `rank - sum of multiplicities`; nonzero means the residue matrix is
    /// not semisimple and the weights only describe its eigenspaces.
    pub jordan_defect: usize,
}

impl Weights {
    pub fn is_semisimple(&self) -> bool {
        self.jordan_defect == 0
    }

    /// The multiset `{a / n}` as reduced fractions.
    pub fn fractions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &(a, m) in &self.weights {
            let g = gcd(a, self.n);
            out.extend(std::iter::repeat_n((a / g, self.n / g), m));
        }
        out
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

pub fn extract_weights(p: &PointDatum) -> Result<Weights> {
    let ext = p.ext();
    let (n, zeta) = match ext.kind() {
        ExtensionKind::Kummer { n, zeta } => (*n, *zeta),
        ExtensionKind::ArtinSchreier => {
            return Err(OrbiparError::WeightsUndefined("wild inertia".into()))
        }
        ExtensionKind::Inert if ext.group().order() == 1 => {
            return Ok(Weights {
                n: 1,
                weights: vec![(0, p.psi.rank())],
                jordan_defect: 0,
            })
        }
        _ if ext.group().order().is_multiple_of(ext.field().p() as usize) => {
            return Err(OrbiparError::WeightsUndefined("wild inertia".into()))
        }
        _ => return Err(OrbiparError::Config("weights need a Kummer point".into())),
    };
    let f = ext.field();
    let r = p.psi.rank();
    let gen = if n > 1 { 1 } else { 0 };
    let res = smat_residue(p.psi.mat(gen));
    if res.pow(n as u64) != KMat::identity(f, r) {
        return Err(OrbiparError::Domain(format!(
            "residue of the generator does not have order dividing {n}"
        )));
    }
    let mut weights = Vec::new();
    let mut total = 0;
    for a in 0..n {
        let ev = f.pow(zeta, a as i64);
        let m = res.sub(&KMat::identity(f, r).scale(ev));
        let d = kernel(&m).len();
        if d > 0 {
            weights.push((a, d));
            total += d;
        }
    }
    Ok(Weights {
        n,
        weights,
        jordan_defect: r - total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::matrix::Matrix;
    use crate::algebra::series::Series;
    use crate::equivariant::cocycle::Cocycle;
    use crate::local_galois::{make_artin_schreier, make_kummer};
    use crate::parabolic::corpus::random_datum;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn trivial_n4_all_zero() {
        let f = Field::prime(5).unwrap();
        let ext = Arc::new(make_kummer(&f, 4, 8).unwrap());
        let w = extract_weights(&PointDatum::trivial("p", ext, 3)).unwrap();
        assert_eq!(w.weights, vec![(0, 3)]);
    }

    #[test]
    fn kummer2_diag() {
        let f = Field::prime(5).unwrap();
        let ext = Arc::new(make_kummer(&f, 2, 8).unwrap());
        let a = Matrix::from_fn(2, 2, |i, j| {
            Series::constant(
                &f,
                if i != j {
                    0
                } else if i == 0 {
                    1
                } else {
                    4
                },
                8,
            )
        });
        let psi = Cocycle::from_generator(ext.clone(), a).unwrap();
        let p = PointDatum {
            label: "p".into(),
            psi,
            mu: crate::algebra::matrix::lmat_identity(&f, 8, 2),
        };
        let w = extract_weights(&p).unwrap();
        assert_eq!(w.weights, vec![(0, 1), (1, 1)]);
        assert_eq!(w.fractions(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn wild_is_undefined() {
        let f = Field::prime(2).unwrap();
        let ext = Arc::new(make_artin_schreier(&f, 8).unwrap());
        let err = extract_weights(&PointDatum::trivial("p", ext, 1)).unwrap_err();
        assert_eq!(err.to_string(), "weights undefined: wild inertia");
    }

    #[test]
    fn random_weights_read_back() {
        let f = Field::prime(7).unwrap();
        let ext = Arc::new(make_kummer(&f, 3, 9).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // (s / sigma(s))^m has residue zeta^-m
        let d = random_datum("p", ext, &[0, 1, 2, 4], 0, &mut rng).unwrap();
        let w = extract_weights(&d).unwrap();
        assert_eq!(w.weights, vec![(0, 1), (1, 1), (2, 2)]);
    }
}
