//! Local pushforward by restriction of scalars along `k[[t]] -> k[[s]]`, and
//! the checks of its adjunction with pullback.

use std::sync::Arc;

use crate::algebra::linsolve::{kernel, KMat};
use crate::algebra::matrix::{smat_diff, smat_identity, Matrix, SMat};
use crate::algebra::series::Series;
use crate::equivariant::cocycle::Cocycle;
use crate::equivariant::product::{from_blocks, Block, ProductModule, ProductSpec};
use crate::equivariant::search::hom_space;
use crate::error::{OrbiparError, Result};
use crate::local_galois::{make_inert, LocalExtension};

#[derive(Clone, Debug)]
pub struct Pushforward {
    pub label: String,
    /// Over the trivial extension of the base: the group acts `k[[t]]`-linearly.
    pub module: ProductModule,
    pub ram_index: usize,
    pub base_prec: usize,
}

/// Matrix over `k[[t]]` of `v -> X psi(ring)(v)` in the basis `e_a s^j`
/// (index `a e + j`), truncated to `m` coefficients in `t`.
pub fn restrict_scalars(ext: &LocalExtension, x: &SMat, ring: usize, m: usize) -> SMat {
    let e = ext.ram_index().max(1);
    let f = ext.field();
    let n = ext.prec();
    let powers: Vec<Series> = (0..e)
        .map(|j| ext.psi(ring, &Series::monomial(f, 1, j, n)))
        .collect();
    let mut out = Matrix::from_fn(x.rows() * e, x.cols() * e, |_, _| Series::zero(f, m));
    for b in 0..x.rows() {
        for a in 0..x.cols() {
            for (j, pw) in powers.iter().enumerate() {
                let parts = ext.decompose(&x.get(b, a).mul(pw));
                for (l, h) in parts.into_iter().enumerate() {
                    out.set(b * e + l, a * e + j, h.with_prec(m));
                }
            }
        }
    }
    out
}

/// Restriction of scalars of the formal part of a glued point. `base_prec`
/// defaults to the achievable `floor(N / e)`.
pub fn pushforward_local(
    label: &str,
    m: &ProductModule,
    base_prec: Option<usize>,
) -> Result<Pushforward> {
    let ext = m.ext();
    let e = ext.ram_index().max(1);
    let achievable = ext.prec() / e;
    let prec = base_prec.unwrap_or(achievable);
    if prec > achievable || prec < 2 {
        return Err(OrbiparError::Precision { achievable });
    }
    let inert = Arc::new(make_inert(ext.field(), prec, ext.group().clone())?);
    let blocks = m
        .group()
        .elements()
        .map(|g| {
            (0..m.count())
                .map(|i| {
                    let b = m.block(g, i);
                    Block {
                        target: b.target,
                        ring: b.ring,
                        mat: restrict_scalars(ext, &b.mat, b.ring, prec),
                    }
                })
                .collect()
        })
        .collect();
    let spec = ProductSpec {
        orbit: m.orbit().clone(),
        ext: inert,
        connectors: m.spec().connectors.clone(),
        thetas: vec![],
        components: vec![],
    };
    Ok(Pushforward {
        label: label.to_string(),
        module: from_blocks(spec, blocks)?,
        ram_index: e,
        base_prec: prec,
    })
}

/// Dimension over `k` of the vectors fixed by every generator.
pub fn fixed_dim(m: &ProductModule) -> usize {
    let f = m.ext().field();
    let dim = m.total_dim();
    let gens = m.group().generators();
    if gens.is_empty() {
        return dim;
    }
    let mut stacked = KMat::zeros(f, 0, dim);
    for &g in gens {
        stacked = stacked.vstack(&m.phi_kmat(g).sub(&KMat::identity(f, dim)));
    }
    kernel(&stacked).len()
}

/// Rank of the invariants of a pushforward over `k[[t]]`: the increment of
/// the truncated fixed dimension between the last two levels.
pub fn invariant_rank(label: &str, m: &ProductModule, p: &Pushforward) -> Result<usize> {
    if p.base_prec < 3 {
        return Err(OrbiparError::Precision {
            achievable: p.base_prec,
        });
    }
    let lower = pushforward_local(label, m, Some(p.base_prec - 1))?;
    Ok(fixed_dim(&p.module) - fixed_dim(&lower.module))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// `t`-adic truncation of the comparison; the `s`-adic one is `e` times it.
    pub base_level: usize,
    /// `dim_k Hom(f* V, W)` mod `s^(e m)`, solved as a linear system.
    pub pullback_side: usize,
    /// `dim_k Hom(V, f_* W)` mod `t^m`, from the fixed space of `f_* W`.
    pub pushforward_side: usize,
}

impl AdjunctionReport {
    pub fn passed(&self) -> bool {
        self.pullback_side == self.pushforward_side
    }
}

/// `V` a free base module of rank `rank_v` (no action at an unramified point
/// downstairs), `W` the formal part of a glued point. Both hom spaces are
/// computed independently and their truncated dimensions compared. The
/// compatibility with `mu` imposes nothing further: `mu^-1 sigma` is
/// invariant whenever `sigma` is equivariant.
pub fn adjunction_check(
    rank_v: usize,
    w: &ProductModule,
    base_level: Option<usize>,
) -> Result<AdjunctionReport> {
    let push = pushforward_local("", w, base_level)?;
    let e = push.ram_index;
    let a0 = w.component_cocycle(0)?;
    let v = Cocycle::trivial(w.ext().clone(), rank_v);
    let pullback_side = hom_space(&v, &a0, e * push.base_prec)?.len();
    let pushforward_side = rank_v * fixed_dim(&push.module);
    Ok(AdjunctionReport {
        base_level: push.base_prec,
        pullback_side,
        pushforward_side,
    })
}

/// `f_*(f* V (x) W)` against `V (x) f_* W` for `V` free of rank `rank_v`:
/// compares every block. Returns the first mismatch.
pub fn projection_formula_check(rank_v: usize, w: &ProductModule) -> Result<Option<String>> {
    let ext = w.ext();
    let id = smat_identity(ext.field(), ext.prec(), rank_v);
    let lhs_blocks = w
        .group()
        .elements()
        .map(|g| {
            (0..w.count())
                .map(|i| {
                    let b = w.block(g, i);
                    Block {
                        target: b.target,
                        ring: b.ring,
                        mat: id.kron(&b.mat),
                    }
                })
                .collect()
        })
        .collect();
    let spec = ProductSpec {
        orbit: w.orbit().clone(),
        ext: ext.clone(),
        connectors: w.spec().connectors.clone(),
        thetas: vec![],
        components: vec![],
    };
    let lhs = pushforward_local("", &from_blocks(spec, lhs_blocks)?, None)?;
    let rhs = pushforward_local("", w, None)?;
    let base = rhs.module.ext();
    let id_base = smat_identity(base.field(), base.prec(), rank_v);
    for g in w.group().elements() {
        for i in 0..w.count() {
            let expected = id_base.kron(&rhs.module.block(g, i).mat);
            if let Some(d) = smat_diff(&lhs.module.block(g, i).mat, &expected) {
                return Ok(Some(format!("element {g}, component {i}: {d}")));
            }
        }
    }
    Ok(None)
}
