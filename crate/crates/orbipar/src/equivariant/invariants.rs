//! Invariants of a product module as a lattice over `k[[t]]`, read off the
//! first component.

use crate::algebra::linsolve::{kernel, KMat};
use crate::algebra::matrix::{Matrix, SMat};
use crate::algebra::series::Series;
use crate::algebra::smith::{smith_form, Smith};
use crate::equivariant::product::ProductModule;
use crate::error::{OrbiparError, Result};

/// A chain `v, t v, t^2 v, ...` of the truncated fixed space, identified by
/// the leading entry and degree of `v` on the first component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Strand {
    pub start: usize,
    pub entry: usize,
}

#[derive(Clone, Debug)]
pub struct Invariants {
    /// Columns are the first-component parts of the basis vectors.
    pub natural: SMat,
    /// Each basis vector across all components (`l * r` series).
    pub basis: Vec<Vec<Series>>,
    pub strands: Vec<Strand>,
    /// Dimension of the truncated fixed space over the base field.
    pub fixed_dim: usize,
}

/// Computes a basis of the invariants over `k[[t]]`.
///
/// The fixed space of the generators on the truncated module is put in
/// echelon form with first-component coordinates ordered by degree then
/// entry. Pivots are grouped into strands by entry and degree mod `e`; the
/// lowest pivot of each strand gives a basis vector.
pub fn invariants(m: &ProductModule) -> Result<Invariants> {
    let ext = m.ext();
    let f = ext.field().clone();
    let n = ext.prec();
    let r = m.rank();
    let e = ext.ram_index().max(1);
    let dim = m.total_dim();
    let mut stacked: Option<KMat> = None;
    for &g in m.group().generators() {
        let d = m.phi_kmat(g).sub(&KMat::identity(&f, dim));
        stacked = Some(match stacked {
            None => d,
            Some(s) => s.vstack(&d),
        });
    }
    let fixed = match stacked {
        Some(s) => kernel(&s),
        None => (0..dim)
            .map(|i| (0..dim).map(|j| u32::from(i == j)).collect())
            .collect(),
    };
    // column order: first component by (degree, entry), then the rest
    let mut order = Vec::with_capacity(dim);
    for d in 0..n {
        for a in 0..r {
            order.push(m.coord(0, a, d));
        }
    }
    order.extend(r * n..dim);
    let mut ech = KMat::from_fn(&f, fixed.len(), dim, |i, j| fixed[i][order[j]]);
    let pivots = ech.rref();
    let mut best: Vec<Option<(usize, usize)>> = vec![None; r * e];
    for (row, &col) in pivots.iter().enumerate() {
        if col >= r * n {
            continue;
        }
        let (d, a) = (col / r, col % r);
        let slot = &mut best[a * e + d % e];
        if slot.is_none() {
            *slot = Some((d, row));
        }
    }
    let mut chosen: Vec<(Strand, usize)> = best
        .iter()
        .enumerate()
        .filter_map(|(k, b)| {
            b.map(|(d, row)| {
                (
                    Strand {
                        start: d,
                        entry: k / e,
                    },
                    row,
                )
            })
        })
        .collect();
    chosen.sort();
    if chosen.len() < r {
        return Err(OrbiparError::RankDeficiency {
            found: chosen.len(),
            expected: r,
        });
    }
    chosen.truncate(r);
    let mut basis = Vec::with_capacity(r);
    for &(_, row) in &chosen {
        let mut raw = vec![0u32; dim];
        for (j, &c) in order.iter().enumerate() {
            raw[c] = ech.get(row, j);
        }
        let v: Vec<Series> = (0..m.count() * r)
            .map(|k| Series::from_coeffs(&f, &raw[k * n..(k + 1) * n], n))
            .collect();
        basis.push(v);
    }
    let natural = Matrix::from_fn(r, r, |a, k| basis[k][a].clone());
    Ok(Invariants {
        natural,
        basis,
        strands: chosen.into_iter().map(|(s, _)| s).collect(),
        fixed_dim: fixed.len(),
    })
}

#[derive(Clone, Debug)]
pub struct InducedReport {
    pub induced: bool,
    /// Exponents `d_i` of the Smith form of the natural map.
    pub profile: Vec<usize>,
    pub smith: Smith,
}

/// The module is induced from its invariants exactly when the natural map
/// `M^G (x) k[[s]] -> M` is invertible.
pub fn is_induced(inv: &Invariants) -> Result<InducedReport> {
    let smith = smith_form(&inv.natural)?;
    Ok(InducedReport {
        induced: smith.is_unimodular(),
        profile: smith.d.clone(),
        smith,
    })
}
