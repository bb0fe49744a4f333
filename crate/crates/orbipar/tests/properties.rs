mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{action_law, artin_schreier, kummer};
use orbipar::algebra::field::Field;
use orbipar::algebra::linsolve::{solve_linear, KMat};
use orbipar::algebra::matrix::{
    lmat_inverse_det, smat_diff, smat_identity, smat_inverse, smat_to_lmat, Matrix, SMat,
};
use orbipar::algebra::series::Series;
use orbipar::equivariant::cocycle::Cocycle;
use orbipar::equivariant::invariants::invariants;
use orbipar::equivariant::random::{random_series, random_unimodular};
use orbipar::equivariant::search::{trivialize, Budget, Trivialization};
use orbipar::local_galois::{ExtensionEmbedding, LocalExtension};
use orbipar::parabolic::corpus::random_datum;
use orbipar::parabolic::datum::{ParabolicDatum, PointDatum};
use orbipar::parabolic::functors::{functor_s, functor_t, t_point};
use orbipar::parabolic::glued::verify_gluing;
use orbipar::parabolic::scene::CoverScene;
use orbipar::pvect_ops::calculus::{dual, tensor};
use orbipar::pvect_ops::pushforward::pushforward_local;
use orbipar::pvect_ops::refine::{pullback_refine, RefinementMap};
use orbipar::pvect_ops::weights::extract_weights;
use orbipar::OrbiparError;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 1u32), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2)])
        .prop_map(|(p, k)| Field::new(p, k).unwrap())
}

fn ext_at(prec: usize) -> impl Strategy<Value = Arc<LocalExtension>> {
    prop::sample::select(vec![0usize, 1, 2, 3, 4]).prop_map(move |i| match i {
        0 => kummer(2, 5, prec),
        1 => kummer(3, 7, prec),
        2 => kummer(4, 5, prec),
        3 => artin_schreier(2, prec),
        _ => artin_schreier(3, prec),
    })
}

fn ext_strategy() -> impl Strategy<Value = Arc<LocalExtension>> {
    ext_at(12)
}

fn scene_for(ext: &LocalExtension, kind: usize) -> CoverScene {
    match kind {
        0 => CoverScene::totally_ramified("p", ext),
        m => CoverScene::with_cyclic_factor("p", ext, m + 1),
    }
}

fn random_point(ext: &Arc<LocalExtension>, rank: usize, rng: &mut ChaCha8Rng) -> PointDatum {
    let e = ext.group().order();
    let w: Vec<usize> = (0..rank).map(|_| rng.random_range(0..2 * e)).collect();
    let k = rng.random_range(-1..=1);
    random_datum("p", ext.clone(), &w, k, rng).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_ring_laws(f in field_strategy(), prec in 1usize..12, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_series(&f, prec, &mut rng), random_series(&f, prec, &mut rng), random_series(&f, prec, &mut rng));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn series_inverse_two_sided(f in field_strategy(), prec in 1usize..16, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_series(&f, prec, &mut rng);
        if a.coeff(0) == 0 {
            a.set_coeff(0, 1);
        }
        let inv = a.inverse().unwrap();
        let one = Series::one(&f, prec);
        prop_assert_eq!(a.mul(&inv), one.clone());
        prop_assert_eq!(inv.mul(&a), one);
    }

    #[test]
    fn compose_and_reversion(f in field_strategy(), prec in 2usize..12, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_series(&f, prec, &mut rng);
        g.set_coeff(0, 0);
        if g.coeff(1) == 0 {
            g.set_coeff(1, 1);
        }
        let mut h = random_series(&f, prec, &mut rng);
        h.set_coeff(0, 0);
        let a = random_series(&f, prec, &mut rng);
        prop_assert_eq!(a.compose(&g).unwrap().compose(&h).unwrap(), a.compose(&g.compose(&h).unwrap()).unwrap());
        let r = g.reversion().unwrap();
        let s = Series::var(&f, prec);
        prop_assert_eq!(g.compose(&r).unwrap(), s.clone());
        prop_assert_eq!(r.compose(&g).unwrap(), s);
    }

    #[test]
    fn solve_linear_solutions_check(f in field_strategy(), rows in 1usize..6, cols in 1usize..6, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = f.q();
        let m = KMat::from_fn(&f, rows, cols, |_, _| if rng.random_bool(0.3) { 0 } else { rng.random_range(0..q) });
        let x0: Vec<u32> = (0..cols).map(|_| rng.random_range(0..q)).collect();
        let rhs = m.mul_vec(&x0);
        let sol = solve_linear(&m, &rhs).unwrap();
        prop_assert_eq!(m.mul_vec(&sol.particular), rhs.clone());
        prop_assert_eq!(sol.kernel.len(), cols - m.rank());
        for v in &sol.kernel {
            let x: Vec<u32> = sol.particular.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect();
            prop_assert_eq!(m.mul_vec(&x), rhs.clone());
        }
    }

    #[test]
    fn base_rewrite_inverts_evaluation(ext in ext_strategy(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_series(ext.field(), ext.base_prec(), &mut rng);
        let x = ext.eval_base(&h);
        for g in ext.group().elements() {
            prop_assert_eq!(ext.psi(g, &x), x.clone());
        }
        prop_assert_eq!(ext.rewrite_in_base(&x).unwrap(), h);
    }

    #[test]
    fn assembly_laws(ext in ext_strategy(), kind in 0usize..3, rank in 1usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_point(&ext, rank, &mut rng);
        let scene = scene_for(&ext, kind);
        let b = t_point(&d, &scene.points[0]).unwrap();
        let (bad, _) = action_law(&b.module);
        prop_assert_eq!(bad, None);
        prop_assert_eq!(b.module.verify_restriction(), None);
        let c0 = b.module.component_cocycle(0).unwrap();
        for g in ext.group().elements() {
            prop_assert!(smat_diff(c0.mat(g), d.psi.mat(g)).is_none());
        }
        prop_assert!(verify_gluing(&b).is_none());
    }

    #[test]
    fn invariants_are_fixed_and_span_generically(ext in ext_strategy(), kind in 0usize..3, rank in 1usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_point(&ext, rank, &mut rng);
        let b = t_point(&d, &scene_for(&ext, kind).points[0]).unwrap();
        let inv = invariants(&b.module).unwrap();
        prop_assert_eq!(inv.basis.len(), rank);
        for v in &inv.basis {
            for g in b.module.group().elements() {
                prop_assert_eq!(&b.module.apply(g, v), v);
            }
        }
        prop_assert!(lmat_inverse_det(&smat_to_lmat(&inv.natural)).is_ok());
    }

    #[test]
    fn trivialize_recovers_coboundaries(ext in ext_strategy(), rank in 1usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_unimodular(ext.field(), ext.prec(), rank, &mut rng);
        let c = Cocycle::coboundary(ext.clone(), &b).unwrap();
        match trivialize(&c, &Budget::default(), seed).unwrap() {
            Trivialization::Found { b: found, .. } => {
                let inv = smat_inverse(&found).unwrap();
                for g in ext.group().elements() {
                    let rebuilt = found.mul(&ext.psi_smat(g, &inv));
                    prop_assert!(smat_diff(&rebuilt, c.mat(g)).is_none());
                }
            }
            other => prop_assert!(false, "not trivialized: {:?}", other),
        }
    }

    #[test]
    fn trivial_datum_round_trips_to_trivial(ext in ext_strategy(), kind in 0usize..3, rank in 1usize..4) {
        let d = ParabolicDatum::single(PointDatum::trivial("p", ext.clone(), rank));
        let b = functor_t(&d, &scene_for(&ext, kind)).unwrap();
        let id = smat_identity(ext.field(), ext.prec(), rank);
        for g in b.group.elements() {
            for i in 0..b.points[0].module.count() {
                prop_assert!(smat_diff(&b.points[0].module.block(g, i).mat, &id).is_none());
            }
        }
        let (d2, choices) = functor_s(&b).unwrap();
        prop_assert!(choices[0].induced);
        for g in ext.group().elements() {
            prop_assert!(smat_diff(d2.points[0].psi.mat(g), &id).is_none());
        }
        prop_assert_eq!(&d2.points[0].mu, &d.points[0].mu);
    }

    #[test]
    fn calculus_outputs_are_cocycles(ext in ext_at(24), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ParabolicDatum::single(random_point(&ext, 2, &mut rng));
        let b = ParabolicDatum::single(random_point(&ext, 1, &mut rng));
        for d in [tensor(&a, &b).unwrap(), dual(&a).unwrap(), dual(&b).unwrap()] {
            prop_assert_eq!(d.points[0].psi.verify(), None);
        }
    }

    #[test]
    fn short_windows_fail_as_precision(ext in ext_at(6), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = ext.group().order();
        let w: Vec<usize> = (0..2).map(|_| rng.random_range(0..2 * e)).collect();
        let a = match random_datum("p", ext.clone(), &w, rng.random_range(-1..=1), &mut rng) {
            Ok(p) => ParabolicDatum::single(p),
            Err(e) => {
                prop_assert!(matches!(e, OrbiparError::Precision { .. }), "{}", e);
                return Ok(());
            }
        };
        match dual(&a) {
            Ok(d) => prop_assert_eq!(d.points[0].psi.verify(), None),
            Err(e) => prop_assert!(matches!(e, OrbiparError::Precision { .. }), "{}", e),
        }
    }

    #[test]
    fn pushforward_rank_law(ext in ext_strategy(), kind in 0usize..3, rank in 1usize..3, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_point(&ext, rank, &mut rng);
        let b = t_point(&d, &scene_for(&ext, kind).points[0]).unwrap();
        let p = pushforward_local("p", &b.module, None).unwrap();
        prop_assert_eq!(p.module.rank(), rank * ext.ram_index());
    }

    #[test]
    fn weights_survive_gauge_by_one_mod_s(idx in 0usize..3, rank in 1usize..4, seed: u64) {
        let ext = [kummer(2, 5, 12), kummer(3, 7, 12), kummer(4, 5, 12)][idx].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_point(&ext, rank, &mut rng);
        let w = extract_weights(&d).unwrap();
        let f = ext.field();
        let b: SMat = Matrix::from_fn(rank, rank, |i, j| {
            let mut s = random_series(f, ext.prec(), &mut rng);
            s.set_coeff(0, u32::from(i == j));
            s
        });
        let moved = PointDatum { psi: d.psi.gauge(&b).unwrap(), ..d };
        prop_assert_eq!(extract_weights(&moved).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pullback_restricts_back(rank in 1usize..3, seed: u64) {
        let k2 = kummer(2, 5, 16);
        let k4 = kummer(4, 5, 16);
        let emb = ExtensionEmbedding::kummer_tower(k2.clone(), k4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = ParabolicDatum::single(random_point(&k2, rank, &mut rng));
        let r = RefinementMap::default().embed("p", emb.clone());
        let up = pullback_refine(&d, &r).unwrap();
        for g in up.points[0].ext().group().elements() {
            let small = emb.quotient[g];
            let a = up.points[0].psi.mat(g);
            let want = d.points[0].psi.mat(small);
            for i in 0..rank {
                for j in 0..rank {
                    let back = emb.restrict_series(a.get(i, j)).unwrap();
                    let n = back.prec().min(want.get(i, j).prec());
                    prop_assert_eq!(&back.coeffs()[..n], &want.get(i, j).coeffs()[..n]);
                }
            }
        }
    }
}
