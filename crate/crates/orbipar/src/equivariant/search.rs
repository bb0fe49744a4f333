//! Searches for equivariant isomorphisms between cocycles and for
//! trivializations `A_g = B psi(g)(B)^-1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::linsolve::{kernel, linearize, KMat};
use crate::algebra::matrix::{smat_diff, smat_is_unimodular, smat_residue, Matrix, SMat};
use crate::algebra::series::Series;
use crate::equivariant::cocycle::Cocycle;
use crate::error::{OrbiparError, Result};

/// Limits for the searches. `residue_cap` bounds exhaustive enumeration
/// (number of candidates), `samples` the random fallback.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub residue_cap: u64,
    pub samples: usize,
    pub averaging_tries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            residue_cap: 1_000_000,
            samples: 512,
            averaging_tries: 8,
        }
    }
}

fn sigma_from(
    field: &crate::algebra::Field,
    rows: usize,
    cols: usize,
    level: usize,
    prec: usize,
    x: &[u32],
) -> SMat {
    Matrix::from_fn(rows, cols, |i, j| {
        let start = (i * cols + j) * level;
        Series::from_coeffs(field, &x[start..start + level], prec)
    })
}

/// Basis over the base field of the matrices `sigma` (entries mod `s^level`)
/// with `sigma A_g = B_g psi(g)(sigma)` mod `s^level` for the generators.
pub fn hom_space(a: &Cocycle, b: &Cocycle, level: usize) -> Result<Vec<SMat>> {
    if **a.ext() != **b.ext() {
        return Err(OrbiparError::Config(
            "cocycles live over different extensions".into(),
        ));
    }
    let ext = a.ext();
    let f = ext.field().clone();
    let n = ext.prec();
    let level = level.min(n).max(1);
    let (rows, cols) = (b.rank(), a.rank());
    let gens = ext.group().generators().to_vec();
    let unknowns = rows * cols * level;
    let eqs = gens.len() * rows * cols * level;
    let m = linearize(&f, unknowns, eqs, |x| {
        let s = sigma_from(&f, rows, cols, level, n, x);
        let mut out = Vec::with_capacity(eqs);
        for &g in &gens {
            let d = s.mul(a.mat(g)).sub(&b.mat(g).mul(&ext.psi_smat(g, &s)));
            for x in d.entries() {
                out.extend_from_slice(&x.coeffs()[..level]);
            }
        }
        out
    });
    Ok(kernel(&m)
        .into_iter()
        .map(|x| sigma_from(&f, rows, cols, level, n, &x))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    /// Coefficients on the independent subset returned alongside.
    Found(Vec<u32>),
    /// Every combination was tried: no invertible element exists.
    Absent { dim: usize, enumerated: u64 },
    /// Random sampling failed; nothing is certified.
    Inconclusive { dim: usize, tries: usize },
}

/// Looks for an invertible linear combination of square residue matrices.
/// Returns the outcome and the indices of an independent subset spanning
/// the same space (the combination refers to that subset).
pub fn find_invertible(residues: &[KMat], budget: &Budget, seed: u64) -> (Search, Vec<usize>) {
    let Some(first) = residues.first() else {
        return (
            Search::Absent {
                dim: 0,
                enumerated: 0,
            },
            vec![],
        );
    };
    let f = first.field().clone();
    let (r, c) = (first.rows(), first.cols());
    let mut chosen = Vec::new();
    let mut span: Option<KMat> = None;
    for (k, m) in residues.iter().enumerate() {
        let row = KMat::from_fn(&f, 1, r * c, |_, j| m.get(j / c, j % c));
        let cand = match &span {
            None => row.clone(),
            Some(s) => s.vstack(&row),
        };
        if cand.rank() > chosen.len() {
            chosen.push(k);
            span = Some(cand);
        }
    }
    let dim = chosen.len();
    if r != c || dim == 0 {
        return (Search::Absent { dim, enumerated: 0 }, chosen);
    }
    let combine = |coef: &[u32]| {
        let mut acc = KMat::zeros(&f, r, c);
        for (&k, &x) in chosen.iter().zip(coef) {
            if x != 0 {
                acc = acc.add(&residues[k].scale(x));
            }
        }
        acc
    };
    for i in 0..dim {
        let mut coef = vec![0u32; dim];
        coef[i] = 1;
        if residues[chosen[i]].is_invertible() {
            return (Search::Found(coef), chosen);
        }
    }
    let q = f.q() as u64;
    let total = (0..dim).try_fold(1u64, |acc, _| acc.checked_mul(q));
    match total {
        Some(total) if total <= budget.residue_cap => {
            let mut coef = vec![0u32; dim];
            for count in 1..total {
                let mut x = count;
                for slot in coef.iter_mut() {
                    *slot = (x % q) as u32;
                    x /= q;
                }
                if combine(&coef).is_invertible() {
                    return (Search::Found(coef), chosen);
                }
            }
            (
                Search::Absent {
                    dim,
                    enumerated: total - 1,
                },
                chosen,
            )
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget.samples {
                let coef: Vec<u32> = (0..dim).map(|_| rng.random_range(0..f.q())).collect();
                if combine(&coef).is_invertible() {
                    return (Search::Found(coef), chosen);
                }
            }
            (
                Search::Inconclusive {
                    dim,
                    tries: budget.samples,
                },
                chosen,
            )
        }
    }
}

#[derive(Clone, Debug)]
pub enum Intertwiner {
    Found(SMat),
    Absent { level: usize, dim: usize },
    Inconclusive { level: usize, dim: usize },
}

/// An invertible `sigma` with `sigma A_g = B_g psi(g)(sigma)` mod `s^level`.
/// `Absent` is a certificate (exhaustive residue search failed).
pub fn find_intertwiner(
    a: &Cocycle,
    b: &Cocycle,
    level: usize,
    budget: &Budget,
    seed: u64,
) -> Result<Intertwiner> {
    let basis = hom_space(a, b, level)?;
    let residues: Vec<KMat> = basis.iter().map(smat_residue).collect();
    let level = level.min(a.ext().prec());
    if a.rank() != b.rank() {
        return Ok(Intertwiner::Absent { level, dim: 0 });
    }
    let (search, chosen) = find_invertible(&residues, budget, seed);
    Ok(match search {
        Search::Found(coef) => {
            let f = a.ext().field();
            let mut sigma =
                Matrix::from_fn(a.rank(), a.rank(), |_, _| Series::zero(f, a.ext().prec()));
            for (&k, &c) in chosen.iter().zip(&coef) {
                if c != 0 {
                    sigma = sigma.add(&basis[k].map(|x| x.scale(c)));
                }
            }
            Intertwiner::Found(sigma)
        }
        Search::Absent { dim, .. } => Intertwiner::Absent { level, dim },
        Search::Inconclusive { dim, .. } => Intertwiner::Inconclusive { level, dim },
    })
}

/// Checks `sigma A_g = B_g psi(g)(sigma)` for all `g`, mod `s^level`.
pub fn check_intertwiner(a: &Cocycle, b: &Cocycle, sigma: &SMat, level: usize) -> bool {
    let ext = a.ext();
    ext.group().elements().all(|g| {
        let lhs = sigma.mul(a.mat(g)).map(|x| x.with_prec(level));
        let rhs = b
            .mat(g)
            .mul(&ext.psi_smat(g, sigma))
            .map(|x| x.with_prec(level));
        smat_diff(&lhs, &rhs).is_none()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Averaging,
    Residue,
    Lifting,
}

#[derive(Clone, Debug)]
pub enum Trivialization {
    Found {
        b: SMat,
        stage: Stage,
    },
    /// `certified` means an exhaustive search ruled out every candidate at
    /// `level` (coefficients mod `s^level`).
    NotFound {
        stage: Stage,
        level: usize,
        certified: bool,
    },
}

/// Looks for a unimodular `B` with `A_g = B psi(g)(B)^-1` for all `g`:
/// group averaging first, then an exhaustive residue-level search, then
/// level-by-level lifting.
pub fn trivialize(c: &Cocycle, budget: &Budget, seed: u64) -> Result<Trivialization> {
    let ext = c.ext();
    let f = ext.field().clone();
    let n = ext.prec();
    let r = c.rank();
    let found = |b: SMat, stage| -> Result<Option<Trivialization>> {
        let one = Cocycle::trivial(ext.clone(), r);
        if smat_is_unimodular(&b) && check_intertwiner(&one, c, &b, n) {
            Ok(Some(Trivialization::Found { b, stage }))
        } else {
            Ok(None)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget.averaging_tries {
        let seedmat = Matrix::from_fn(r, r, |_, _| {
            let coeffs: Vec<u32> = (0..n).map(|_| rng.random_range(0..f.q())).collect();
            Series::from_coeffs(&f, &coeffs, n)
        });
        let mut acc = seedmat.map(|x| x.scale(0));
        for g in ext.group().elements() {
            acc = acc.add(&c.mat(g).mul(&ext.psi_smat(g, &seedmat)));
        }
        if let Some(t) = found(acc, Stage::Averaging)? {
            return Ok(t);
        }
    }
    let one = Cocycle::trivial(ext.clone(), r);
    match find_intertwiner(&one, c, 1, budget, seed)? {
        Intertwiner::Absent { .. } => {
            return Ok(Trivialization::NotFound {
                stage: Stage::Residue,
                level: 1,
                certified: true,
            })
        }
        Intertwiner::Inconclusive { .. } => {
            return Ok(Trivialization::NotFound {
                stage: Stage::Residue,
                level: 1,
                certified: false,
            })
        }
        Intertwiner::Found(_) => {}
    }
    match find_intertwiner(&one, c, n, budget, seed)? {
        Intertwiner::Found(b) => {
            if let Some(t) = found(b, Stage::Lifting)? {
                return Ok(t);
            }
        }
        Intertwiner::Inconclusive { .. } => {}
        Intertwiner::Absent { .. } => {
            for level in 2..=n {
                if let Intertwiner::Absent { .. } = find_intertwiner(&one, c, level, budget, seed)?
                {
                    return Ok(Trivialization::NotFound {
                        stage: Stage::Lifting,
                        level,
                        certified: true,
                    });
                }
            }
        }
    }
    Ok(Trivialization::NotFound {
        stage: Stage::Lifting,
        level: n,
        certified: false,
    })
}

/// `B^-1` applied as a basis change: the cocycle becomes trivial.
pub fn apply_trivialization(c: &Cocycle, b: &SMat) -> Result<Cocycle> {
    c.gauge(b)
}
