//! Oracles shared by the integration tests. They work on the truncated
//! total module `k^(l r N)` and never call the library's own checks.
#![allow(dead_code)]

use std::sync::Arc;

use orbipar::algebra::field::Field;
use orbipar::algebra::linsolve::KMat;
use orbipar::algebra::matrix::SMat;
use orbipar::algebra::series::Series;
use orbipar::equivariant::product::ProductModule;
use orbipar::local_galois::{make_artin_schreier, make_kummer, LocalExtension};

/// Left multiplication by `mats[i]` on component `i`, as a `k`-matrix.
pub fn block_diag(m: &ProductModule, mats: &[SMat]) -> KMat {
    let f = m.ext().field().clone();
    let n = m.ext().prec();
    let r = m.rank();
    let dim = m.total_dim();
    let mut out = KMat::zeros(&f, dim, dim);
    for (i, x) in mats.iter().enumerate() {
        for a in 0..r {
            for d in 0..n {
                let src = (i * r + a) * n + d;
                for row in 0..r {
                    let v = x.get(row, a).mul(&Series::monomial(&f, 1, d, n));
                    for (k, &c) in v.coeffs().iter().enumerate() {
                        if c != 0 {
                            out.set((i * r + row) * n + k, src, c);
                        }
                    }
                }
            }
        }
    }
    out
}

/// First pair `(h, g)` with `Phi(hg) != Phi(h) Phi(g)`, and the number of
/// pairs compared.
pub fn action_law(m: &ProductModule) -> (Option<(usize, usize)>, usize) {
    let g = m.group();
    let phis: Vec<KMat> = g.elements().map(|x| m.phi_kmat(x)).collect();
    let mut pairs = 0;
    for h in g.elements() {
        for x in g.elements() {
            pairs += 1;
            if phis[g.mul(h, x)] != phis[h].mul(&phis[x]) {
                return (Some((h, x)), pairs);
            }
        }
    }
    (None, pairs)
}

/// `Phi_b(g) T = T Phi_a(g)` for every `g`, with `T` invertible.
pub fn intertwines(a: &ProductModule, b: &ProductModule, mats: &[SMat]) -> Result<(), String> {
    let t = block_diag(a, mats);
    if !t.is_invertible() {
        return Err("intertwiner is not invertible".into());
    }
    for g in a.group().elements() {
        if b.phi_kmat(g).mul(&t) != t.mul(&a.phi_kmat(g)) {
            return Err(format!("fails at element {g}"));
        }
    }
    Ok(())
}

/// Smallest `k` with `n | p^k - 1`.
pub fn degree_for(n: usize, p: u32) -> u32 {
    (1..=4)
        .find(|&k| (p as usize).pow(k) % n == 1 % n)
        .expect("roots of unity within degree 4")
}

pub fn kummer(n: usize, p: u32, prec: usize) -> Arc<LocalExtension> {
    let f = Field::new(p, degree_for(n, p)).unwrap();
    Arc::new(make_kummer(&f, n, prec).unwrap())
}

pub fn artin_schreier(p: u32, prec: usize) -> Arc<LocalExtension> {
    Arc::new(make_artin_schreier(&Field::prime(p).unwrap(), prec).unwrap())
}

/// The four random-corpus families.
pub fn families(prec: usize) -> Vec<(&'static str, Arc<LocalExtension>)> {
    vec![
        ("kummer2/GF5", kummer(2, 5, prec)),
        ("kummer3/GF7", kummer(3, 7, prec)),
        ("AS/GF2", artin_schreier(2, prec)),
        ("AS/GF3", artin_schreier(3, prec)),
    ]
}
