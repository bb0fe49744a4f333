//! Semilinear actions `Psi(g)(v) = A_g psi(g)(v)` stored as matrix cocycles.

use std::fmt;
use std::sync::Arc;

use crate::algebra::linsolve::KMat;
use crate::algebra::matrix::{
    smat_diff, smat_identity, smat_inverse, smat_residue, EntryDiff, SMat,
};
use crate::error::{structural, OrbiparError, Result};
use crate::local_galois::{ExtensionEmbedding, LocalExtension};

/// Matrices `A_g` with `A_e = I` and `A_{hg} = A_h psi(h)(A_g)`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    ext: Arc<LocalExtension>,
    rank: usize,
    mats: Vec<SMat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleViolation {
    Identity {
        entry: EntryDiff,
    },
    Law {
        h: usize,
        g: usize,
        entry: EntryDiff,
    },
}

impl fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleViolation::Identity { entry } => write!(f, "A_e is not the identity at {entry}"),
            CocycleViolation::Law { h, g, entry } => {
                write!(f, "cocycle law fails for pair ({h}, {g}) at {entry}")
            }
        }
    }
}

impl Cocycle {
    pub fn new(ext: Arc<LocalExtension>, mats: Vec<SMat>) -> Result<Cocycle> {
        if mats.len() != ext.group().order() {
            return Err(structural(format!(
                "{} matrices given for a group of order {}",
                mats.len(),
                ext.group().order()
            )));
        }
        let rank = mats[0].rows();
        for m in &mats {
            if m.rows() != rank || m.cols() != rank {
                return Err(structural("cocycle matrices must be square of one size"));
            }
            if m.entries()
                .iter()
                .any(|x| x.prec() != ext.prec() || x.field() != ext.field())
            {
                return Err(structural("cocycle entries must match the extension"));
            }
        }
        Ok(Cocycle { ext, rank, mats })
    }

    pub fn trivial(ext: Arc<LocalExtension>, rank: usize) -> Cocycle {
        let id = smat_identity(ext.field(), ext.prec(), rank);
        let mats = vec![id; ext.group().order()];
        Cocycle { ext, rank, mats }
    }

    /// Extends the matrix of the generator of a cyclic group (element 1, with
    /// element `a` its `a`-th power) by the cocycle law. The wrap-around
    /// condition is left to [`Cocycle::verify`].
    pub fn from_generator(ext: Arc<LocalExtension>, gen: SMat) -> Result<Cocycle> {
        let g = ext.group();
        let n = g.order();
        if n > 1 && (1..n).any(|a| g.mul(1, a - 1) != a) {
            return Err(structural(
                "from_generator needs a cyclic group in power order",
            ));
        }
        let rank = gen.rows();
        let mut mats = vec![smat_identity(ext.field(), ext.prec(), rank)];
        for a in 1..n {
            let prev = &mats[a - 1];
            let next = gen.mul(&ext.psi_smat(1, prev));
            mats.push(next);
        }
        Cocycle::new(ext, mats)
    }

    /// `A_g = B psi(g)(B)^-1` for a unimodular `B`.
    pub fn coboundary(ext: Arc<LocalExtension>, b: &SMat) -> Result<Cocycle> {
        let mats = ext
            .group()
            .elements()
            .map(|g| Ok(b.mul(&smat_inverse(&ext.psi_smat(g, b))?)))
            .collect::<Result<Vec<_>>>()?;
        Cocycle::new(ext, mats)
    }

    pub fn ext(&self) -> &Arc<LocalExtension> {
        &self.ext
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mat(&self, g: usize) -> &SMat {
        &self.mats[g]
    }

    pub fn mats(&self) -> &[SMat] {
        &self.mats
    }

    pub fn residue(&self, g: usize) -> KMat {
        smat_residue(&self.mats[g])
    }

    /// Checks `A_e = I` and the law on all ordered pairs.
    pub fn verify(&self) -> Option<CocycleViolation> {
        let id = smat_identity(self.ext.field(), self.ext.prec(), self.rank);
        if let Some(entry) = smat_diff(&self.mats[0], &id) {
            return Some(CocycleViolation::Identity { entry });
        }
        let grp = self.ext.group();
        for h in grp.elements() {
            for g in grp.elements() {
                let lhs = &self.mats[grp.mul(h, g)];
                let rhs = self.mats[h].mul(&self.ext.psi_smat(h, &self.mats[g]));
                if let Some(entry) = smat_diff(lhs, &rhs) {
                    return Some(CocycleViolation::Law { h, g, entry });
                }
            }
        }
        None
    }

    /// Change of basis by a unimodular `B`: `A_g -> B^-1 A_g psi(g)(B)`.
    pub fn gauge(&self, b: &SMat) -> Result<Cocycle> {
        let binv = smat_inverse(b)?;
        let mats = self
            .ext
            .group()
            .elements()
            .map(|g| binv.mul(&self.mats[g]).mul(&self.ext.psi_smat(g, b)))
            .collect();
        Cocycle::new(self.ext.clone(), mats)
    }

    /// Kronecker product of two cocycles over the same extension.
    pub fn kron(&self, other: &Cocycle) -> Result<Cocycle> {
        if *self.ext != *other.ext {
            return Err(OrbiparError::Config(
                "tensor factors live over different extensions".into(),
            ));
        }
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| a.kron(b))
            .collect();
        Cocycle::new(self.ext.clone(), mats)
    }

    /// Contragredient action `(A_g^-1)^T`.
    pub fn contragredient(&self) -> Result<Cocycle> {
        let mats = self
            .mats
            .iter()
            .map(|a| smat_inverse(a).map(|x| x.transpose()))
            .collect::<Result<Vec<_>>>()?;
        Cocycle::new(self.ext.clone(), mats)
    }

    /// Pullback along an embedding: `A'_g = A_{q(g)}(s_image)`.
    pub fn pullback(&self, emb: &ExtensionEmbedding) -> Result<Cocycle> {
        if *emb.small != *self.ext {
            return Err(OrbiparError::Config(
                "embedding does not start at this extension".into(),
            ));
        }
        let mats = emb
            .big
            .group()
            .elements()
            .map(|g| self.mats[emb.quotient[g]].map(|x| emb.push_series(x)))
            .collect();
        Cocycle::new(emb.big.clone(), mats)
    }

    /// Same extension, matrices rebuilt by `f`.
    pub fn map_mats(&self, mut f: impl FnMut(usize, &SMat) -> SMat) -> Result<Cocycle> {
        let mats = self.mats.iter().enumerate().map(|(g, m)| f(g, m)).collect();
        Cocycle::new(self.ext.clone(), mats)
    }
}
