//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness; the process exits nonzero if any criterion fails.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{action_law, artin_schreier, families, intertwines, kummer};
use orbipar::algebra::linsolve::KMat;
use orbipar::algebra::matrix::{
    lmat_diff, lmat_identity, smat_diff, smat_residue, smat_to_lmat, Matrix, SMat,
};
use orbipar::algebra::series::Series;
use orbipar::cli::runner::{run_scenario, Overrides, Status};
use orbipar::cli::scenario::build_context;
use orbipar::cli::{demo, Scenario, DEMOS};
use orbipar::equivariant::cocycle::Cocycle;
use orbipar::equivariant::product::{default_seeds, independence_intertwiner, ProductModule};
use orbipar::equivariant::search::{hom_space, Budget};
use orbipar::local_galois::{ExtensionEmbedding, FiniteGroup, LocalExtension};
use orbipar::parabolic::corpus::{random_datum, sign_twist};
use orbipar::parabolic::datum::{laurent_scalar, ParabolicDatum, PointDatum};
use orbipar::parabolic::functors::{functor_t, roundtrip_check, s_point, t_point};
use orbipar::parabolic::morphism::find_parabolic_isomorphism;
use orbipar::parabolic::scene::{CoverScene, ScenePoint};
use orbipar::pvect_ops::calculus::{dual, dual_pairing_check};
use orbipar::pvect_ops::pushforward::{adjunction_check, invariant_rank, pushforward_local};
use orbipar::pvect_ops::refine::{
    equiv_check, glued_pullback, pullback_refine, tower_compatibility, EquivStatus, RefinementMap,
};
use orbipar::pvect_ops::weights::extract_weights;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- 1

fn check_extension(ext: &LocalExtension) -> Result<(), String> {
    if let Some(f) = ext.verify() {
        return Err(format!("verify: {f}"));
    }
    let g = ext.group();
    let s = |x: usize| ext.action(x).clone();
    for a in g.elements() {
        for b in g.elements() {
            let comp = s(a).compose(&s(b)).map_err(err)?;
            ensure(comp == s(g.mul(a, b)), || {
                format!("act({a}) o act({b}) differs from act({})", g.mul(a, b))
            })?;
        }
    }
    let t = ext.base_uniformizer();
    for a in g.elements() {
        ensure(t.compose(&s(a)).map_err(err)? == *t, || {
            format!("t not fixed by {a}")
        })?;
    }
    let f = ext.field();
    let mut norm = Series::one(f, ext.prec());
    for a in g.elements() {
        norm = norm.mul(&s(a));
    }
    ensure(norm == *t, || {
        "t differs from the product of the conjugates of s".into()
    })?;
    ensure(norm.valuation() == Some(g.order()), || {
        "valuation of the norm is not |G|".into()
    })
}

fn criterion_1() -> Outcome {
    let prec = 32;
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for n in [2, 3, 4] {
        for p in [5, 7, 13] {
            let start = Instant::now();
            let ext = kummer(n, p, prec);
            check_extension(&ext).map_err(|e| format!("kummer n={n} p={p}: {e}"))?;
            // t = prod_a zeta^a s = zeta^(n(n-1)/2) s^n
            let f = ext.field();
            let zeta = ext.action(1).coeff(1);
            ensure(
                (1..n).all(|a| f.pow(zeta, a as i64) != 1) && f.pow(zeta, n as i64) == 1,
                || format!("kummer n={n} p={p}: zeta not primitive"),
            )?;
            let want = Series::monomial(f, f.pow(zeta, (n * (n - 1) / 2) as i64), n, prec);
            ensure(*ext.base_uniformizer() == want, || {
                format!("kummer n={n} p={p}: t is not zeta^(n(n-1)/2) s^n")
            })?;
            slowest = slowest.max(start.elapsed());
            count += 1;
        }
    }
    for p in [2u32, 3, 5] {
        let start = Instant::now();
        let ext = artin_schreier(p, prec);
        check_extension(&ext).map_err(|e| format!("AS p={p}: {e}"))?;
        // s^p / (1 - s^(p-1)) = sum_j s^(p + j (p-1))
        let f = ext.field();
        let mut closed = vec![0u32; prec];
        let mut e = p as usize;
        while e < prec {
            closed[e] = 1;
            e += p as usize - 1;
        }
        ensure(
            *ext.base_uniformizer() == Series::from_coeffs(f, &closed, prec),
            || format!("AS p={p}: closed form differs from the norm"),
        )?;
        slowest = slowest.max(start.elapsed());
        count += 1;
    }
    ensure(slowest < Duration::from_secs(1), || {
        format!("slowest extension took {slowest:?}")
    })?;
    Ok(format!(
        "{count} extensions at N={prec}, slowest {slowest:?}"
    ))
}

// ---------------------------------------------------------------- 2

fn d4_scene(ext: &LocalExtension) -> CoverScene {
    // reflection f = 4 in D4 (element a + 4 b is r^a f^b)
    let g = Arc::new(FiniteGroup::dihedral(4));
    let sp = ScenePoint::new(g.clone(), "p", ext.group(), vec![0, 4], None).unwrap();
    CoverScene::new(g, vec![sp]).unwrap()
}

fn criterion_2() -> Outcome {
    let mut cases: Vec<(String, ParabolicDatum, CoverScene)> = Vec::new();
    let ctx = build_context(demo("z6-two-points").map_err(err)?).map_err(err)?;
    ensure(ctx.scenario.precision == 16, || {
        "demo precision is not 16".into()
    })?;
    cases.push((
        "z6-two-points".into(),
        ctx.data["v"].clone(),
        ctx.scenes["z6"].clone(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let k2 = kummer(2, 5, 16);
    cases.push((
        "D4 reflection inertia".into(),
        ParabolicDatum::single(
            random_datum("p", k2.clone(), &[0, 1, 1], 0, &mut rng).map_err(err)?,
        ),
        d4_scene(&k2),
    ));
    let k4 = kummer(4, 5, 16);
    cases.push((
        "Z/4 x Z/2".into(),
        ParabolicDatum::single(
            random_datum("p", k4.clone(), &[0, 3, 1], 1, &mut rng).map_err(err)?,
        ),
        CoverScene::with_cyclic_factor("p", &k4, 2),
    ));
    let start = Instant::now();
    let mut summary = Vec::new();
    for (name, d, scene) in &cases {
        ensure(d.rank <= 3, || format!("{name}: rank above 3"))?;
        let b = functor_t(d, scene).map_err(|e| format!("{name}: {e}"))?;
        for p in &b.points {
            let (bad, pairs) = action_law(&p.module);
            if let Some((h, g)) = bad {
                return Err(format!(
                    "{name} point {}: Phi({h}{g}) != Phi({h}) Phi({g})",
                    p.label
                ));
            }
            let order = p.module.group().order();
            ensure(pairs == order * order, || {
                format!("{name}: only {pairs} pairs compared")
            })?;
            summary.push(format!("{name}/{}: {pairs} pairs", p.label));
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("{} in {t:?}", summary.join(", ")))
}

// ---------------------------------------------------------------- 3

fn alternative_seeds(sp: &ScenePoint) -> Vec<usize> {
    let o = &sp.orbit;
    (0..o.count() - 1)
        .map(|i| {
            o.group
                .elements()
                .filter(|&g| o.target(g, i) == i + 1)
                .max()
                .unwrap()
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k2 = kummer(2, 5, 16);
    let k3 = kummer(3, 7, 16);
    let k4 = kummer(4, 5, 16);
    let as2 = artin_schreier(2, 16);
    let as3 = artin_schreier(3, 16);
    let z6 = Arc::new(FiniteGroup::cyclic(6));
    let s3 = Arc::new(FiniteGroup::dihedral(3));
    let scenes: Vec<(&str, Arc<LocalExtension>, CoverScene)> = vec![
        (
            "Z/6 over kummer3",
            k3.clone(),
            CoverScene::new(
                z6.clone(),
                vec![ScenePoint::new(z6, "p", k3.group(), vec![0, 2, 4], None).unwrap()],
            )
            .unwrap(),
        ),
        ("D4 over kummer2", k2.clone(), d4_scene(&k2)),
        (
            "S3 over kummer2",
            k2.clone(),
            CoverScene::new(
                s3.clone(),
                vec![ScenePoint::new(s3, "p", k2.group(), vec![0, 3], None).unwrap()],
            )
            .unwrap(),
        ),
        (
            "Z/4 x Z/2 over kummer4",
            k4.clone(),
            CoverScene::with_cyclic_factor("p", &k4, 2),
        ),
        (
            "Z/2 x Z/4 over AS2",
            as2.clone(),
            CoverScene::with_cyclic_factor("p", &as2, 4),
        ),
        (
            "Z/3 x Z/2 over AS3",
            as3.clone(),
            CoverScene::with_cyclic_factor("p", &as3, 2),
        ),
    ];
    let start = Instant::now();
    let mut done = Vec::new();
    for (name, ext, scene) in &scenes {
        let e = ext.group().order();
        let weights: Vec<usize> = (0..2).map(|_| rng.random_range(0..2 * e)).collect();
        let d = random_datum("p", ext.clone(), &weights, 0, &mut rng).map_err(err)?;
        let sp = &scene.points[0];
        let alt = alternative_seeds(sp);
        ensure(alt != default_seeds(&sp.orbit), || {
            format!("{name}: no second connector choice")
        })?;
        let sp2 = sp.with_seeds(alt).map_err(err)?;
        ensure(sp.connectors() != sp2.connectors(), || {
            format!("{name}: connectors coincide")
        })?;
        let a = t_point(&d, sp).map_err(err)?;
        let b = t_point(&d, &sp2).map_err(err)?;
        let tau =
            independence_intertwiner(&a.module, &b.module).map_err(|e| format!("{name}: {e}"))?;
        intertwines(&a.module, &b.module, &tau).map_err(|e| format!("{name}: tau {e}"))?;
        done.push(format!("{name} ({} components)", a.module.count()));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!(
        "{} scenes in {t:?}: {}",
        done.len(),
        done.join("; ")
    ))
}

// ---------------------------------------------------------------- 4

struct CorpusItem {
    family: &'static str,
    datum: ParabolicDatum,
    induced: bool,
}

fn corpus() -> Vec<(&'static str, ParabolicDatum, CoverScene)> {
    let mut out = Vec::new();
    for (fi, (family, ext)) in families(16).into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + fi as u64);
        let e = ext.group().order();
        for i in 0..20 {
            let rank = 1 + i % 2;
            let weights: Vec<usize> = (0..rank).map(|_| rng.random_range(0..2 * e)).collect();
            let k = rng.random_range(-1..=1);
            let d = random_datum("p", ext.clone(), &weights, k, &mut rng).expect("corpus datum");
            let scene = match i % 3 {
                0 => CoverScene::totally_ramified("p", &ext),
                1 => CoverScene::with_cyclic_factor("p", &ext, 2),
                _ => CoverScene::with_cyclic_factor("p", &ext, 3),
            };
            out.push((family, ParabolicDatum::single(d), scene));
        }
    }
    out
}

/// Re-checks both round-trip certificates with the oracles.
fn recheck_roundtrip(d: &PointDatum, sp: &ScenePoint) -> Result<bool, String> {
    let rt = roundtrip_check(
        &ParabolicDatum::single(d.clone()),
        &CoverScene {
            group: sp.orbit.group.clone(),
            points: vec![sp.clone()],
        },
    )
    .map_err(err)?;
    let r = &rt.points[0];
    if let Some(f) = r.st_failure.as_ref().or(r.ts_failure.as_ref()) {
        return Err(f.clone());
    }
    let ext = d.ext();
    let b = t_point(d, sp).map_err(err)?;
    let (d2, _) = s_point(&b).map_err(err)?;
    // S(T(d)) -> d
    for h in ext.group().elements() {
        let lhs = r.sigma.mul(d2.psi.mat(h));
        let rhs = d.psi.mat(h).mul(&ext.psi_smat(h, &r.sigma));
        ensure(smat_diff(&lhs, &rhs).is_none(), || {
            format!("sigma not equivariant at {h}")
        })?;
        ensure(lmat_diff(&ext.psi_lmat(h, &r.g), &r.g).is_none(), || {
            format!("g moved by {h}")
        })?;
    }
    ensure(smat_residue(&r.sigma).is_invertible(), || {
        "sigma not invertible".into()
    })?;
    ensure(
        lmat_diff(&d.mu.mul(&r.g), &smat_to_lmat(&r.sigma).mul(&d2.mu)).is_none(),
        || "mu square".into(),
    )?;
    // T(S(b)) -> b
    let b2 = t_point(&d2, sp).map_err(err)?;
    intertwines(&b2.module, &b.module, &r.rho).map_err(|e| format!("rho {e}"))?;
    for i in 0..b.module.count() {
        let lhs = smat_to_lmat(&r.rho[i]).mul(&b2.tau[i]);
        ensure(lmat_diff(&lhs, &b.tau[i].mul(&r.h)).is_none(), || {
            format!("gluing square on component {i}")
        })?;
    }
    Ok(r.induced)
}

fn criterion_4(items: &mut Vec<CorpusItem>) -> Outcome {
    let start = Instant::now();
    let mut per_family: Vec<(&str, usize)> = Vec::new();
    for (family, d, scene) in corpus() {
        let induced = recheck_roundtrip(&d.points[0], &scene.points[0])
            .map_err(|e| format!("{family} #{}: {e}", items.len()))?;
        match per_family.iter_mut().find(|(f, _)| *f == family) {
            Some((_, c)) => *c += 1,
            None => per_family.push((family, 1)),
        }
        items.push(CorpusItem {
            family,
            datum: d,
            induced,
        });
    }
    let t = start.elapsed();
    ensure(per_family.iter().all(|(_, c)| *c == 20), || {
        "corpus size".into()
    })?;
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "{} data ({}) all verified in {t:?}",
        items.len(),
        per_family
            .iter()
            .map(|(f, c)| format!("{f}: {c}"))
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let ext = kummer(2, 5, 16);
    let d = sign_twist("p", ext.clone()).map_err(err)?;
    let scene = CoverScene::totally_ramified("p", &ext);
    let b = t_point(&d, &scene.points[0]).map_err(err)?;
    let (d2, choice) = s_point(&b).map_err(err)?;
    ensure(!choice.induced, || "sign twist reported induced".into())?;
    ensure(choice.profile == vec![1], || {
        format!("divisor profile {:?}", choice.profile)
    })?;
    ensure(d2.mu == laurent_scalar(&ext, 1, 1), || {
        "mu after S(T(d)) is not s".into()
    })?;
    let rt = roundtrip_check(&ParabolicDatum::single(d.clone()), &scene).map_err(err)?;
    ensure(rt.passed(), || "round trip failed".into())?;
    recheck_roundtrip(&d, &scene.points[0])?;
    let rep = run_scenario(demo("sign-twist").map_err(err)?, &Overrides::default()).map_err(err)?;
    ensure(rep.exit_code() == 0, || {
        format!("sign-twist demo: {}", rep.human())
    })?;
    Ok("is_induced = false, profile [1], mu = s, round trip verified".into())
}

// ---------------------------------------------------------------- 6

fn criterion_6(items: &[CorpusItem]) -> Outcome {
    let start = Instant::now();
    let budget = Budget::default();
    let mut notes = Vec::new();

    // (a)
    let ext2 = kummer(2, 5, 16);
    let sign = ParabolicDatum::single(sign_twist("p", ext2.clone()).map_err(err)?);
    let mut all: Vec<&ParabolicDatum> = items.iter().map(|i| &i.datum).collect();
    all.push(&sign);
    for (i, d) in all.iter().enumerate() {
        let dd = dual(&dual(d).map_err(err)?).map_err(err)?;
        let s = find_parabolic_isomorphism(&dd, d, &budget, i as u64).map_err(err)?;
        ensure(s.found(), || {
            format!("(a) datum {i}: (V*)* not isomorphic to V: {:?}", s.points)
        })?;
    }
    notes.push(format!("(a) {} data", all.len()));

    // (b)
    let induced: Vec<&CorpusItem> = items.iter().filter(|i| i.induced).collect();
    ensure(!induced.is_empty(), || "(b) induced corpus is empty".into())?;
    for (i, it) in induced.iter().enumerate() {
        let rep = dual_pairing_check(&it.datum, &budget, i as u64).map_err(err)?;
        ensure(rep.passed(), || {
            format!("(b) {} datum {i}: pairing check failed", it.family)
        })?;
    }
    notes.push(format!("(b) {} induced data", induced.len()));

    // (c)
    let k4 = kummer(4, 5, 16);
    let emb = ExtensionEmbedding::kummer_tower(ext2.clone(), k4.clone()).map_err(err)?;
    let r = RefinementMap::default().embed("p", emb.clone());
    let one = ParabolicDatum::single(PointDatum::trivial("p", ext2.clone(), 1));
    let rep = equiv_check(&sign, &r, &one, &r, None, &budget, 0).map_err(err)?;
    ensure(rep.status == EquivStatus::NotEquivalent, || {
        format!("(c) status {:?}", rep.status)
    })?;
    let s = find_parabolic_isomorphism(
        &pullback_refine(&sign, &r).map_err(err)?,
        &pullback_refine(&one, &r).map_err(err)?,
        &budget,
        0,
    )
    .map_err(err)?;
    ensure(s.certified_absent(), || {
        "(c) non-isomorphism not certified".into()
    })?;
    notes.push("(c) certified".into());

    // (d)
    let ctx = build_context(demo("tower-2-4").map_err(err)?).map_err(err)?;
    let d = &ctx.data["v"];
    let q: Vec<usize> = (0..8).map(|g| (g % 4) % 2 + 2 * (g / 4)).collect();
    let cases = [
        (ctx.scenes["small"].clone(), ctx.scenes["big"].clone(), q),
        (
            CoverScene::totally_ramified("p", &ext2),
            CoverScene::totally_ramified("p", &k4),
            emb.quotient.clone(),
        ),
    ];
    for (small, big, q) in &cases {
        let refinement = &ctx.refinements["tower"];
        let pts = tower_compatibility(d, small, big, refinement, q).map_err(err)?;
        let lhs = functor_t(&pullback_refine(d, refinement).map_err(err)?, big).map_err(err)?;
        let rhs =
            glued_pullback(&functor_t(d, small).map_err(err)?, big, refinement, q).map_err(err)?;
        for (p, (x, y)) in pts.iter().zip(lhs.points.iter().zip(&rhs.points)) {
            ensure(p.failure.is_none(), || format!("(d) {:?}", p.failure))?;
            intertwines(&x.module, &y.module, &p.rho).map_err(|e| format!("(d) rho {e}"))?;
            for i in 0..x.module.count() {
                let lhs = smat_to_lmat(&p.rho[i]).mul(&x.tau[i]);
                ensure(lmat_diff(&lhs, &y.tau[i]).is_none(), || {
                    format!("(d) gluing square on component {i}")
                })?;
            }
        }
    }
    notes.push("(d) 2 scene pairs".into());

    // (e)
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut adj = 0;
    for (_, ext) in families(16) {
        let mut lines = vec![PointDatum::trivial("p", ext.clone(), 1)];
        for _ in 0..3 {
            let w = rng.random_range(0..2 * ext.group().order());
            lines.push(random_datum("p", ext.clone(), &[w], 0, &mut rng).map_err(err)?);
        }
        if ext.group().order() == 2 && ext.field().p() == 5 {
            lines.push(sign_twist("p", ext.clone()).map_err(err)?);
        }
        for line in &lines {
            let m = ProductModule::single(&line.psi).map_err(err)?;
            for rank_v in [1, 2] {
                let rep = adjunction_check(rank_v, &m, None).map_err(err)?;
                ensure(rep.passed(), || format!("(e) {rep:?}"))?;
                adj += 1;
            }
            if ext.field().q() == 2 {
                brute_force_adjunction(line, &m)?;
            }
        }
    }
    notes.push(format!("(e) {adj} comparisons, GF(2) cases enumerated"));

    // (f)
    let m = ProductModule::single(&Cocycle::trivial(ext2.clone(), 1)).map_err(err)?;
    let push = pushforward_local("p", &m, None).map_err(err)?;
    let f = ext2.field();
    let bp = push.base_prec;
    let want: SMat = Matrix::from_fn(2, 2, |i, j| {
        Series::constant(
            f,
            if i != j {
                0
            } else if i == 0 {
                1
            } else {
                4
            },
            bp,
        )
    });
    ensure(push.module.rank() == 2, || "(f) rank".into())?;
    ensure(
        smat_diff(&push.module.block(1, 0).mat, &want).is_none(),
        || "(f) sigma is not diag(1, -1)".into(),
    )?;
    let inv = invariant_rank("p", &m, &push).map_err(err)?;
    ensure(inv == 1, || format!("(f) invariant rank {inv}"))?;
    notes.push("(f) diag(1, -1), invariant rank 1".into());

    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("{} in {t:?}", notes.join("; ")))
}

/// Over GF(2) both sides are small enough to count by enumeration.
fn brute_force_adjunction(line: &PointDatum, m: &ProductModule) -> Result<(), String> {
    let ext = line.ext();
    let f = ext.field();
    let n = ext.prec();
    let e = ext.ram_index();
    let level = e * (n / e);
    let gens = ext.group().generators().to_vec();
    let a = &line.psi;
    let expect = hom_space(&Cocycle::trivial(ext.clone(), 1), a, level)
        .map_err(err)?
        .len();
    // sigma A_1 = A_g psi(g)(sigma) for sigma of degree < level
    let mut count = 0u64;
    for bits in 0u64..(1 << level) {
        let coeffs: Vec<u32> = (0..level).map(|i| ((bits >> i) & 1) as u32).collect();
        let s = Series::from_coeffs(f, &coeffs, n);
        let ok = gens.iter().all(|&g| {
            let lhs = s.clone();
            let rhs = a.mat(g).get(0, 0).mul(&ext.psi(g, &s));
            lhs.coeffs()[..level] == rhs.coeffs()[..level]
        });
        count += u64::from(ok);
    }
    ensure(count == 1 << expect, || {
        format!("(e) brute force hom count {count} vs dim {expect}")
    })?;
    let push = pushforward_local("p", m, None).map_err(err)?;
    let phis: Vec<KMat> = push
        .module
        .group()
        .generators()
        .iter()
        .map(|&g| push.module.phi_kmat(g))
        .collect();
    let dim = push.module.total_dim();
    let mut fixed = 0u64;
    for bits in 0u64..(1 << dim) {
        let v: Vec<u32> = (0..dim).map(|i| ((bits >> i) & 1) as u32).collect();
        fixed += u64::from(phis.iter().all(|p| p.mul_vec(&v) == v));
    }
    ensure(fixed == count, || {
        format!("(e) brute force: {count} homs upstairs, {fixed} fixed vectors downstairs")
    })
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let exts = [
        kummer(2, 5, 16),
        kummer(3, 7, 16),
        kummer(4, 5, 16),
        kummer(6, 7, 16),
        kummer(3, 2, 16),
    ];
    let mut trials = 0;
    for ext in &exts {
        let f = ext.field();
        let n = ext.group().order();
        let zeta = ext.action(1).coeff(1);
        let prec = ext.prec();
        for _ in 0..10 {
            let r = rng.random_range(1..=3);
            let a: Vec<usize> = (0..r).map(|_| rng.random_range(0..n)).collect();
            let d = Matrix::from_fn(r, r, |i, j| {
                Series::constant(f, if i == j { f.pow(zeta, a[i] as i64) } else { 0 }, prec)
            });
            let b: SMat = Matrix::from_fn(r, r, |i, j| {
                let mut c: Vec<u32> = (0..prec).map(|_| rng.random_range(0..f.q())).collect();
                c[0] = u32::from(i == j);
                Series::from_coeffs(f, &c, prec)
            });
            let gen = b
                .mul(&d)
                .mul(&orbipar::algebra::matrix::smat_inverse(&ext.psi_smat(1, &b)).map_err(err)?);
            let psi = Cocycle::from_generator(ext.clone(), gen).map_err(err)?;
            let p = PointDatum {
                label: "p".into(),
                psi,
                mu: lmat_identity(f, prec, r),
            };
            let w = extract_weights(&p).map_err(err)?;
            let mut got: Vec<usize> = w
                .weights
                .iter()
                .flat_map(|&(x, m)| std::iter::repeat_n(x, m))
                .collect();
            let mut want = a.clone();
            got.sort();
            want.sort();
            ensure(got == want && w.jordan_defect == 0 && w.n == n, || {
                format!("n={n}: weights {:?} for exponents {a:?}", w.weights)
            })?;
            trials += 1;
        }
    }
    for p in [2, 3, 5] {
        let ext = artin_schreier(p, 16);
        let e = extract_weights(&PointDatum::trivial("p", ext, 2))
            .unwrap_err()
            .to_string();
        ensure(e.contains("wild inertia"), || format!("AS p={p}: {e}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("{trials} tame data exact, 3 wild errors, {t:?}"))
}

// ---------------------------------------------------------------- 8

fn corpus_scenario() -> Scenario {
    let v = serde_json::json!({
        "version": 1,
        "name": "corpus",
        "seed": 88,
        "field": {"p": 7},
        "precision": 16,
        "extensions": {"k3": {"kind": "kummer", "n": 3}},
        "data": {
            "a": {"rank": 2, "points": [{"kind": "random", "label": "p", "extension": "k3", "weights": [0, 4], "base_power": 1}]},
            "b": {"rank": 1, "points": [{"kind": "random", "label": "p", "extension": "k3", "weights": [2]}]},
            "one": {"rank": 1, "points": [{"kind": "trivial", "label": "p", "extension": "k3"}]}
        },
        "commands": [
            {"op": "validate", "datum": "a"},
            {"op": "roundtrip", "datum": "a"},
            {"op": "trivialize", "datum": "a", "expect": false},
            {"op": "isomorphic", "left": "b", "right": "one", "expect": false},
            {"op": "dual_involution", "datum": "a"},
            {"op": "dual_pairing", "datum": "b"},
            {"op": "tensor", "left": "a", "right": "b", "as": "ab"},
            {"op": "roundtrip", "datum": "ab"},
            {"op": "weights", "datum": "ab"},
            {"op": "adjunction", "datum": "b", "rank_v": 1},
            {"op": "pushforward", "datum": "a"}
        ]
    });
    serde_json::from_value(v).expect("corpus scenario")
}

fn suite() -> Vec<Scenario> {
    let mut out: Vec<Scenario> = DEMOS.iter().map(|d| demo(d).unwrap()).collect();
    out.push(corpus_scenario());
    out
}

fn criterion_8() -> Outcome {
    let dir = std::env::temp_dir().join(format!("orbipar-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let bin = env!("CARGO_BIN_EXE_orbipar");
    let mut bytes = 0;
    for sc in suite() {
        let name = sc.name.clone().unwrap_or_default();
        let r1 = run_scenario(sc.clone(), &Overrides::default()).map_err(err)?;
        let r2 = run_scenario(sc.clone(), &Overrides::default()).map_err(err)?;
        ensure(r1.results.iter().all(|r| r.status == Status::Pass), || {
            format!("{name}: {}", r1.human())
        })?;
        let (a, b) = (r1.to_canonical_string(), r2.to_canonical_string());
        ensure(a == b, || format!("{name}: library reports differ"))?;
        let file = dir.join(format!("{name}.json"));
        std::fs::write(&file, serde_json::to_string_pretty(&sc).unwrap()).map_err(err)?;
        let mut outs = Vec::new();
        for _ in 0..2 {
            let o = Command::new(bin)
                .arg("run")
                .arg(&file)
                .args(["--json-out", "-"])
                .output()
                .map_err(err)?;
            outs.push(o.stdout);
        }
        ensure(outs[0] == outs[1], || {
            format!("{name}: binary reports differ")
        })?;
        ensure(outs[0] == a.as_bytes(), || {
            format!("{name}: binary and library reports differ")
        })?;
        bytes += a.len();
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} scenarios, {bytes} report bytes identical across runs",
        suite().len()
    ))
}

// ----------------------------------------------------------------

fn main() {
    let mut items = Vec::new();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "extension laws", criterion_1()),
        (2, "assembly action law", criterion_2()),
        (3, "connector independence", criterion_3()),
        (4, "round trips", criterion_4(&mut items)),
        (5, "sign twist", criterion_5()),
        (6, "calculus", criterion_6(&items)),
        (7, "weights", criterion_7()),
        (8, "determinism", criterion_8()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n} ({name}): PASS - {detail}"),
            Err(e) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL - {e}");
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
