//! Executes scenario commands in order and collects a canonical report.

use serde_json::{json, Map, Value};

use crate::algebra::matrix::{lmat_diff, smat_to_lmat, LMat, SMat};
use crate::algebra::series::Series;
use crate::cli::scenario::{build_context, lmat_spec, smat_spec, Command, Context, Scenario};
use crate::equivariant::product::independence_intertwiner;
use crate::equivariant::search::{trivialize, Budget, Trivialization};
use crate::error::{OrbiparError, Result};
use crate::local_galois::ExtensionKind;
use crate::parabolic::datum::{validate_parabolic, ParabolicDatum};
use crate::parabolic::functors::{functor_s, functor_t, multipoint_map, roundtrip_check, t_point};
use crate::parabolic::morphism::{find_parabolic_isomorphism, IsoSearch, PointIso};
use crate::parabolic::scene::CoverScene;
use crate::pvect_ops::calculus::{dual, dual_pairing_check, tensor};
use crate::pvect_ops::pushforward::{
    adjunction_check, invariant_rank, projection_formula_check, pushforward_local,
};
use crate::pvect_ops::refine::{
    equiv_check, pullback_refine, tower_compatibility, EquivStatus, RefinementMap,
};
use crate::pvect_ops::weights::extract_weights;

pub const OPS: &[&str] = &[
    "adjunction",
    "assemble",
    "dual",
    "dual_involution",
    "dual_pairing",
    "equiv",
    "independence",
    "induced",
    "isomorphic",
    "multipoint",
    "pullback",
    "pushforward",
    "roundtrip",
    "tensor",
    "tower",
    "trivialize",
    "validate",
    "verify_cocycle",
    "verify_extension",
    "weights",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommandResult {
    pub index: usize,
    pub op: String,
    pub status: Status,
    pub details: Map<String, Value>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: Option<String>,
    pub seed: u64,
    pub precision: usize,
    pub results: Vec<CommandResult>,
}

impl Report {
    /// 2 on any error, else 1 on any failure, else 3 if something was
    /// inconclusive, else 0.
    pub fn exit_code(&self) -> i32 {
        let has = |s| self.results.iter().any(|r| r.status == s);
        if has(Status::Error) {
            2
        } else if has(Status::Fail) {
            1
        } else if has(Status::Inconclusive) {
            3
        } else {
            0
        }
    }

    pub fn count(&self, s: Status) -> usize {
        self.results.iter().filter(|r| r.status == s).count()
    }

    pub fn to_json(&self) -> Value {
        let results: Vec<Value> = self
            .results
            .iter()
            .map(|r| {
                json!({
                    "index": r.index,
                    "op": r.op,
                    "status": r.status.as_str(),
                    "details": Value::Object(r.details.clone()),
                    "failure": r.failure,
                })
            })
            .collect();
        json!({
            "name": self.name,
            "seed": self.seed,
            "precision": self.precision,
            "results": results,
            "summary": {
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "inconclusive": self.count(Status::Inconclusive),
                "error": self.count(Status::Error),
            },
            "exit_code": self.exit_code(),
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!(
                "scenario {n} (seed {}, precision {})\n",
                self.seed, self.precision
            ));
        }
        for r in &self.results {
            out.push_str(&format!("[{}] #{} {}", r.status.as_str(), r.index, r.op));
            if let Some(f) = &r.failure {
                out.push_str(&format!(": {f}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} inconclusive, {} error\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Inconclusive),
            self.count(Status::Error)
        ));
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub precision: Option<usize>,
}

/// Closest known op names.
pub fn suggest(op: &str) -> Vec<&'static str> {
    let mut scored: Vec<(f64, &str)> = OPS
        .iter()
        .map(|o| (strsim::jaro_winkler(op, o), *o))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));
    scored
        .into_iter()
        .filter(|(s, _)| *s > 0.7)
        .take(3)
        .map(|(_, o)| o)
        .collect()
}

fn check_ops(cmds: &[Command]) -> Result<()> {
    let unknown: Vec<String> = cmds
        .iter()
        .enumerate()
        .filter(|(_, c)| !OPS.contains(&c.op.as_str()))
        .map(|(i, c)| {
            let s = suggest(&c.op);
            if s.is_empty() {
                format!("#{i} '{}'", c.op)
            } else {
                format!("#{i} '{}' (did you mean {}?)", c.op, s.join(", "))
            }
        })
        .collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(OrbiparError::Config(format!(
            "unknown commands: {}",
            unknown.join("; ")
        )))
    }
}

pub fn run_scenario(mut sc: Scenario, ov: &Overrides) -> Result<Report> {
    if let Some(s) = ov.seed {
        sc.seed = s;
    }
    if let Some(p) = ov.precision {
        sc.precision = p;
    }
    check_ops(&sc.commands)?;
    let mut ctx = build_context(sc)?;
    let cmds = ctx.scenario.commands.clone();
    let results = cmds
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let (status, details, failure) = match run_command(&mut ctx, c) {
                Ok(o) => o.finish(expect(c)),
                Err(e) => (Status::Error, Map::new(), Some(e.to_string())),
            };
            CommandResult {
                index,
                op: c.op.clone(),
                status,
                details,
                failure,
            }
        })
        .collect();
    Ok(Report {
        name: ctx.scenario.name.clone(),
        seed: ctx.scenario.seed,
        precision: ctx.scenario.precision,
        results,
    })
}

/// Validation only: every extension and every datum.
pub fn verify_scenario(mut sc: Scenario, ov: &Overrides) -> Result<Report> {
    let mut cmds = Vec::new();
    for name in sc.extensions.keys() {
        cmds.push(command("verify_extension", &[("extension", name)]));
    }
    for name in sc.data.keys() {
        cmds.push(command("validate", &[("datum", name)]));
    }
    sc.commands = cmds;
    run_scenario(sc, ov)
}

pub fn command(op: &str, args: &[(&str, &str)]) -> Command {
    Command {
        op: op.to_string(),
        args: args
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect(),
    }
}

fn expect(c: &Command) -> bool {
    c.args
        .get("expect")
        .and_then(Value::as_bool)
        .unwrap_or(true)
}

struct Outcome {
    /// `None` when undecided.
    verdict: Option<bool>,
    details: Map<String, Value>,
    failure: Option<String>,
}

impl Outcome {
    fn new(verdict: Option<bool>) -> Outcome {
        Outcome {
            verdict,
            details: Map::new(),
            failure: None,
        }
    }

    fn set(&mut self, k: &str, v: Value) {
        self.details.insert(k.to_string(), v);
    }

    fn finish(self, expect: bool) -> (Status, Map<String, Value>, Option<String>) {
        let status = match self.verdict {
            None => Status::Inconclusive,
            Some(v) if v == expect => Status::Pass,
            Some(_) => Status::Fail,
        };
        let failure = match (status, self.failure) {
            (Status::Fail, None) => Some(format!(
                "outcome {} differs from the expected {expect}",
                !expect
            )),
            (Status::Pass, _) => None,
            (_, f) => f,
        };
        (status, self.details, failure)
    }
}

fn arg<'a>(c: &'a Command, key: &str) -> Result<&'a str> {
    c.args
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| OrbiparError::Config(format!("{}: missing string argument '{key}'", c.op)))
}

fn opt_arg<'a>(c: &'a Command, key: &str) -> Option<&'a str> {
    c.args.get(key).and_then(Value::as_str)
}

fn datum<'a>(ctx: &'a Context, c: &Command, key: &str) -> Result<&'a ParabolicDatum> {
    let name = arg(c, key)?;
    ctx.data
        .get(name)
        .ok_or_else(|| OrbiparError::Config(format!("{}: unknown datum {name}", c.op)))
}

fn scene(ctx: &Context, c: &Command, key: &str) -> Result<CoverScene> {
    let name = arg(c, key)?;
    ctx.scenes
        .get(name)
        .cloned()
        .ok_or_else(|| OrbiparError::Config(format!("{}: unknown scene {name}", c.op)))
}

/// The named scene, or the totally ramified scene at every point.
fn scene_or_default(ctx: &Context, c: &Command, d: &ParabolicDatum) -> Result<CoverScene> {
    match opt_arg(c, "scene") {
        Some(_) => scene(ctx, c, "scene"),
        None => {
            let mut points = Vec::new();
            let mut group = None;
            for p in &d.points {
                let s = CoverScene::totally_ramified(&p.label, p.ext());
                if group
                    .as_ref()
                    .is_some_and(|g: &std::sync::Arc<_>| **g != *s.group)
                {
                    return Err(OrbiparError::Config(format!(
                        "{}: points use different groups; name a scene",
                        c.op
                    )));
                }
                group = Some(s.group.clone());
                points.extend(s.points);
            }
            let group = group.ok_or_else(|| OrbiparError::Config("datum has no points".into()))?;
            CoverScene::new(group, points)
        }
    }
}

fn refinement(ctx: &Context, c: &Command, key: &str, d: &ParabolicDatum) -> Result<RefinementMap> {
    match opt_arg(c, key) {
        None => Ok(RefinementMap::identity(d)),
        Some(name) => ctx
            .refinements
            .get(name)
            .cloned()
            .ok_or_else(|| OrbiparError::Config(format!("{}: unknown refinement {name}", c.op))),
    }
}

fn store(ctx: &mut Context, c: &Command, d: ParabolicDatum) -> Result<()> {
    let name = arg(c, "as")?;
    ctx.data.insert(name.to_string(), d);
    Ok(())
}

fn smat_json(a: &SMat) -> Value {
    serde_json::to_value(smat_spec(a)).expect("matrix serializes")
}

fn lmat_json(a: &LMat) -> Value {
    serde_json::to_value(lmat_spec(a)).expect("matrix serializes")
}

fn trimmed(s: &Series) -> Value {
    let mut c = s.coeffs().to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    json!(c)
}

fn iso_json(p: &PointIso) -> Value {
    match p {
        PointIso::Found {
            morphism,
            base_integral,
        } => json!({
            "status": "found",
            "sigma": smat_json(&morphism.sigma),
            "g": lmat_json(&morphism.g),
            "base_integral": base_integral,
        }),
        PointIso::Absent { level, dim } => {
            json!({"status": "absent", "level": level, "hom_dim": dim})
        }
        PointIso::Inconclusive { level, dim } => {
            json!({"status": "inconclusive", "level": level, "hom_dim": dim})
        }
    }
}

fn search_verdict(s: &IsoSearch) -> Option<bool> {
    if s.found() {
        Some(true)
    } else if s.certified_absent() {
        Some(false)
    } else {
        None
    }
}

fn search_json(s: &IsoSearch) -> Value {
    Value::Object(
        s.points
            .iter()
            .map(|(l, p)| (l.clone(), iso_json(p)))
            .collect(),
    )
}

fn budget(ctx: &Context) -> Budget {
    let mut b = Budget::default();
    if let Some(s) = &ctx.scenario.budget {
        if let Some(x) = s.residue_cap {
            b.residue_cap = x;
        }
        if let Some(x) = s.samples {
            b.samples = x;
        }
        if let Some(x) = s.averaging_tries {
            b.averaging_tries = x;
        }
    }
    b
}

fn run_command(ctx: &mut Context, c: &Command) -> Result<Outcome> {
    let seed = ctx.scenario.seed;
    match c.op.as_str() {
        "verify_extension" => {
            let name = arg(c, "extension")?;
            let ext = ctx
                .extensions
                .get(name)
                .ok_or_else(|| OrbiparError::Config(format!("unknown extension {name}")))?
                .clone();
            let failure = ext.verify();
            let mut o = Outcome::new(Some(failure.is_none()));
            o.failure = failure.map(|f| f.to_string());
            let f = ext.field().clone();
            let n = ext.prec();
            let norm = ext.norm_of_uniformizer();
            match ext.kind() {
                ExtensionKind::Kummer { .. } | ExtensionKind::ArtinSchreier => {
                    let ok = norm == *ext.base_uniformizer();
                    o.set("norm_matches", json!(ok));
                    if !ok {
                        o.verdict = Some(false);
                        o.failure
                            .get_or_insert_with(|| "t differs from the norm of s".into());
                    }
                }
                _ => {}
            }
            if matches!(ext.kind(), ExtensionKind::ArtinSchreier) {
                let p = f.p() as usize;
                let closed = Series::monomial(&f, 1, p, n).mul(
                    &Series::one(&f, n)
                        .sub(&Series::monomial(&f, 1, p - 1, n))
                        .inverse()?,
                );
                let ok = closed == norm;
                o.set("closed_form_matches", json!(ok));
                if !ok {
                    o.verdict = Some(false);
                    o.failure
                        .get_or_insert_with(|| "closed form differs from the norm".into());
                }
            }
            o.set("group_order", json!(ext.group().order()));
            o.set("ram_index", json!(ext.ram_index()));
            o.set(
                "action",
                json!(ext
                    .group()
                    .elements()
                    .map(|g| trimmed(ext.action(g)))
                    .collect::<Vec<_>>()),
            );
            o.set("t", trimmed(ext.base_uniformizer()));
            Ok(o)
        }
        "validate" => {
            let d = datum(ctx, c, "datum")?;
            let rep = validate_parabolic(d);
            let mut o = Outcome::new(Some(rep.passed()));
            o.failure = rep.first_issue().map(|(l, i)| format!("point {l}: {i}"));
            let pts: Map<String, Value> = rep
                .points
                .iter()
                .map(|p| {
                    (
                        p.label.clone(),
                        json!({"issue": p.issue.as_ref().map(|i| i.to_string()), "window": [p.window.0, p.window.1]}),
                    )
                })
                .collect();
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "verify_cocycle" => {
            let d = datum(ctx, c, "datum")?;
            let mut o = Outcome::new(Some(true));
            let mut pts = Map::new();
            for p in &d.points {
                if opt_arg(c, "point").is_some_and(|l| l != p.label) {
                    continue;
                }
                let v = p.psi.verify();
                if let Some(v) = &v {
                    if o.failure.is_none() {
                        o.failure = Some(format!("point {}: {v}", p.label));
                    }
                    o.verdict = Some(false);
                }
                pts.insert(p.label.clone(), json!(v.map(|v| v.to_string())));
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "assemble" => {
            let d = datum(ctx, c, "datum")?.clone();
            let sc = scene_or_default(ctx, c, &d)?;
            let b = match functor_t(&d, &sc) {
                Ok(b) => b,
                Err(e @ OrbiparError::Assembly { .. }) | Err(e @ OrbiparError::Validation(_)) => {
                    let mut o = Outcome::new(Some(false));
                    o.failure = Some(e.to_string());
                    return Ok(o);
                }
                Err(e) => return Err(e),
            };
            let mut o = Outcome::new(Some(true));
            let mut pts = Map::new();
            for p in &b.points {
                let m = &p.module;
                let v = m.verify_action();
                if let Some(v) = &v {
                    o.verdict = Some(false);
                    o.failure
                        .get_or_insert_with(|| format!("point {}: {v}", p.label));
                }
                let order = m.group().order();
                pts.insert(
                    p.label.clone(),
                    json!({
                        "components": m.count(),
                        "rank": m.rank(),
                        "group_order": order,
                        "pairs_checked": order * order,
                        "action_law": v.is_none(),
                    }),
                );
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "independence" => {
            let d = datum(ctx, c, "datum")?.clone();
            let sc = scene(ctx, c, "scene")?;
            let seeds = c
                .args
                .get("seeds")
                .and_then(Value::as_object)
                .ok_or_else(|| {
                    OrbiparError::Config("independence: missing 'seeds' object".into())
                })?;
            let mut o = Outcome::new(Some(true));
            let mut pts = Map::new();
            for p in &d.points {
                let sp = sc.point(&p.label).ok_or_else(|| {
                    OrbiparError::Config(format!("scene has no point {}", p.label))
                })?;
                let alt: Vec<usize> = match seeds.get(&p.label) {
                    Some(v) => serde_json::from_value(v.clone())
                        .map_err(|e| OrbiparError::Config(format!("seeds for {}: {e}", p.label)))?,
                    None => continue,
                };
                let sp2 = sp.with_seeds(alt)?;
                let a = t_point(p, sp)?;
                let b = t_point(p, &sp2)?;
                let tau = independence_intertwiner(&a.module, &b.module)?;
                let mut failure = None;
                for (i, t) in tau.iter().enumerate() {
                    if let Some(e) = lmat_diff(&smat_to_lmat(t).mul(&a.tau[i]), &b.tau[i]) {
                        failure = Some(format!(
                            "point {}: gluing square fails on component {i} at {e}",
                            p.label
                        ));
                        break;
                    }
                }
                if failure.is_some() {
                    o.verdict = Some(false);
                    o.failure = o.failure.or(failure);
                }
                pts.insert(
                    p.label.clone(),
                    json!({
                        "connectors_a": sp.connectors()[0],
                        "connectors_b": sp2.connectors()[0],
                        "tau": tau.iter().map(smat_json).collect::<Vec<_>>(),
                    }),
                );
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "roundtrip" => {
            let d = datum(ctx, c, "datum")?.clone();
            let sc = scene_or_default(ctx, c, &d)?;
            let rt = roundtrip_check(&d, &sc)?;
            let mut o = Outcome::new(Some(rt.passed()));
            let mut pts = Map::new();
            for p in &rt.points {
                if !p.passed() {
                    o.failure.get_or_insert_with(|| {
                        format!(
                            "point {}: {}",
                            p.label,
                            p.st_failure
                                .clone()
                                .or(p.ts_failure.clone())
                                .unwrap_or_default()
                        )
                    });
                }
                pts.insert(
                    p.label.clone(),
                    json!({
                        "induced": p.induced,
                        "profile": p.profile,
                        "st": {"sigma": smat_json(&p.sigma), "g": lmat_json(&p.g), "g_integral": p.g_integral, "failure": p.st_failure},
                        "ts": {"rho": p.rho.iter().map(smat_json).collect::<Vec<_>>(), "h": lmat_json(&p.h), "failure": p.ts_failure},
                    }),
                );
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "induced" => {
            let d = datum(ctx, c, "datum")?.clone();
            let sc = scene_or_default(ctx, c, &d)?;
            let (s, choices) = functor_s(&functor_t(&d, &sc)?)?;
            let all = choices.iter().all(|ch| ch.induced);
            let mut o = Outcome::new(Some(all));
            let pts: Map<String, Value> = choices
                .iter()
                .zip(&s.points)
                .map(|(ch, p)| {
                    (
                        ch.label.clone(),
                        json!({"induced": ch.induced, "profile": ch.profile, "natural": smat_json(&ch.natural), "mu": lmat_json(&p.mu)}),
                    )
                })
                .collect();
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "trivialize" => {
            let d = datum(ctx, c, "datum")?.clone();
            let b = budget(ctx);
            let mut verdict = Some(true);
            let mut pts = Map::new();
            for p in &d.points {
                let t = trivialize(&p.psi, &b, seed)?;
                let v = match &t {
                    Trivialization::Found { b, stage } => {
                        json!({"found": true, "stage": format!("{stage:?}").to_lowercase(), "b": smat_json(b)})
                    }
                    Trivialization::NotFound {
                        stage,
                        level,
                        certified,
                    } => {
                        verdict = match (verdict, certified) {
                            (_, true) => Some(false),
                            (Some(true), false) => None,
                            (v, false) => v,
                        };
                        json!({"found": false, "stage": format!("{stage:?}").to_lowercase(), "level": level, "certified": certified})
                    }
                };
                pts.insert(p.label.clone(), v);
            }
            let mut o = Outcome::new(verdict);
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "isomorphic" => {
            let a = datum(ctx, c, "left")?;
            let b = datum(ctx, c, "right")?;
            let s = find_parabolic_isomorphism(a, b, &budget(ctx), seed)?;
            let mut o = Outcome::new(search_verdict(&s));
            o.set("points", search_json(&s));
            Ok(o)
        }
        "pullback" => {
            let d = datum(ctx, c, "datum")?.clone();
            let r = refinement(ctx, c, "refinement", &d)?;
            let out = pullback_refine(&d, &r)?;
            let mut o = Outcome::new(Some(true));
            o.set(
                "points",
                json!(out
                    .points
                    .iter()
                    .map(|p| p.label.clone())
                    .collect::<Vec<_>>()),
            );
            o.set(
                "group_orders",
                json!(out
                    .points
                    .iter()
                    .map(|p| p.ext().group().order())
                    .collect::<Vec<_>>()),
            );
            store(ctx, c, out)?;
            Ok(o)
        }
        "equiv" => {
            let a = datum(ctx, c, "left")?.clone();
            let b = datum(ctx, c, "right")?.clone();
            let ra = refinement(ctx, c, "refinement_left", &a)?;
            let rb = refinement(ctx, c, "refinement_right", &b)?;
            let rep = equiv_check(&a, &ra, &b, &rb, None, &budget(ctx), seed)?;
            let mut o = Outcome::new(match rep.status {
                EquivStatus::Equivalent => Some(true),
                EquivStatus::NotEquivalent => Some(false),
                EquivStatus::Inconclusive => None,
            });
            o.set("status", json!(format!("{:?}", rep.status).to_lowercase()));
            o.set(
                "notes",
                Value::Object(rep.notes.into_iter().map(|(l, n)| (l, json!(n))).collect()),
            );
            Ok(o)
        }
        "tensor" => {
            let a = datum(ctx, c, "left")?;
            let b = datum(ctx, c, "right")?;
            let out = tensor(a, b)?;
            let mut o = Outcome::new(Some(true));
            o.set("rank", json!(out.rank));
            store(ctx, c, out)?;
            Ok(o)
        }
        "dual" => {
            let out = dual(datum(ctx, c, "datum")?)?;
            let mut o = Outcome::new(Some(true));
            o.set("rank", json!(out.rank));
            o.set(
                "mu",
                Value::Object(
                    out.points
                        .iter()
                        .map(|p| (p.label.clone(), lmat_json(&p.mu)))
                        .collect(),
                ),
            );
            store(ctx, c, out)?;
            Ok(o)
        }
        "dual_involution" => {
            let d = datum(ctx, c, "datum")?;
            let dd = dual(&dual(d)?)?;
            let s = find_parabolic_isomorphism(&dd, d, &budget(ctx), seed)?;
            let mut o = Outcome::new(search_verdict(&s));
            o.set("points", search_json(&s));
            Ok(o)
        }
        "dual_pairing" => {
            let d = datum(ctx, c, "datum")?;
            let rep = dual_pairing_check(d, &budget(ctx), seed)?;
            let undecided = rep
                .points
                .iter()
                .any(|p| matches!(p.iso, PointIso::Inconclusive { .. }));
            let mut o = Outcome::new(if rep.passed() {
                Some(true)
            } else if undecided {
                None
            } else {
                Some(false)
            });
            o.set("rank", json!(rep.rank));
            o.set(
                "points",
                Value::Object(
                    rep.points
                        .iter()
                        .map(|p| {
                            let triv = matches!(p.trivialization, Trivialization::Found { .. });
                            (
                                p.label.clone(),
                                json!({"trivialized": triv, "isomorphism": iso_json(&p.iso)}),
                            )
                        })
                        .collect(),
                ),
            );
            Ok(o)
        }
        "pushforward" => {
            let d = datum(ctx, c, "datum")?.clone();
            let sc = scene_or_default(ctx, c, &d)?;
            let b = functor_t(&d, &sc)?;
            let mut o = Outcome::new(Some(true));
            let mut pts = Map::new();
            for p in &b.points {
                let push = pushforward_local(&p.label, &p.module, None)?;
                let m = &push.module;
                let gens: Vec<Value> = m
                    .group()
                    .generators()
                    .iter()
                    .map(|&g| smat_json(&m.block(g, 0).mat))
                    .collect();
                let inv = invariant_rank(&p.label, &p.module, &push)?;
                if m.rank() != d.rank * push.ram_index {
                    o.verdict = Some(false);
                }
                pts.insert(
                    p.label.clone(),
                    json!({"rank": m.rank(), "base_prec": push.base_prec, "invariant_rank": inv, "generators": gens}),
                );
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "adjunction" => {
            let d = datum(ctx, c, "datum")?.clone();
            let rank_v = c.args.get("rank_v").and_then(Value::as_u64).unwrap_or(1) as usize;
            let sc = scene_or_default(ctx, c, &d)?;
            let b = functor_t(&d, &sc)?;
            let mut o = Outcome::new(Some(true));
            let mut pts = Map::new();
            for p in &b.points {
                let rep = adjunction_check(rank_v, &p.module, None)?;
                let proj = projection_formula_check(rank_v, &p.module)?;
                if !rep.passed() || proj.is_some() {
                    o.verdict = Some(false);
                    o.failure.get_or_insert_with(|| {
                        format!(
                            "point {}: hom dimensions {} vs {}{}",
                            p.label,
                            rep.pullback_side,
                            rep.pushforward_side,
                            proj.clone()
                                .map(|x| format!("; projection formula: {x}"))
                                .unwrap_or_default()
                        )
                    });
                }
                pts.insert(
                    p.label.clone(),
                    json!({
                        "base_level": rep.base_level,
                        "hom_pullback": rep.pullback_side,
                        "hom_pushforward": rep.pushforward_side,
                        "projection_formula": proj.is_none(),
                    }),
                );
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "weights" => {
            let d = datum(ctx, c, "datum")?;
            let mut o = Outcome::new(Some(true));
            let mut pts = Map::new();
            for p in &d.points {
                match extract_weights(p) {
                    Ok(w) => {
                        if !w.is_semisimple() {
                            o.verdict = Some(false);
                            o.failure.get_or_insert_with(|| {
                                format!(
                                    "point {}: residue not semisimple (defect {})",
                                    p.label, w.jordan_defect
                                )
                            });
                        }
                        pts.insert(
                            p.label.clone(),
                            json!({
                                "n": w.n,
                                "weights": w.weights.iter().map(|(a, m)| json!({"a": a, "multiplicity": m})).collect::<Vec<_>>(),
                                "jordan_defect": w.jordan_defect,
                            }),
                        );
                    }
                    Err(e @ OrbiparError::WeightsUndefined(_)) => {
                        o.verdict = Some(false);
                        o.failure
                            .get_or_insert_with(|| format!("point {}: {e}", p.label));
                        pts.insert(p.label.clone(), json!({"error": e.to_string()}));
                    }
                    Err(e) => return Err(e),
                }
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        "tower" => {
            let d = datum(ctx, c, "datum")?.clone();
            let small = scene(ctx, c, "small_scene")?;
            let big = scene(ctx, c, "big_scene")?;
            let r = refinement(ctx, c, "refinement", &d)?;
            let q: Vec<usize> = serde_json::from_value(
                c.args
                    .get("quotient")
                    .cloned()
                    .ok_or_else(|| OrbiparError::Config("tower: missing 'quotient'".into()))?,
            )
            .map_err(|e| OrbiparError::Config(format!("tower: quotient: {e}")))?;
            let pts = tower_compatibility(&d, &small, &big, &r, &q)?;
            let mut o = Outcome::new(Some(pts.iter().all(|p| p.failure.is_none())));
            o.failure = pts
                .iter()
                .find_map(|p| p.failure.clone().map(|f| format!("point {}: {f}", p.label)));
            o.set(
                "points",
                Value::Object(
                    pts.iter()
                        .map(|p| {
                            (
                                p.label.clone(),
                                json!({"rho": p.rho.iter().map(smat_json).collect::<Vec<_>>()}),
                            )
                        })
                        .collect(),
                ),
            );
            Ok(o)
        }
        "multipoint" => {
            let d = datum(ctx, c, "datum")?.clone();
            let sc = scene(ctx, c, "scene")?;
            let rep = multipoint_map(&d, &sc);
            let mut o = Outcome::new(Some(rep.passed()));
            let mut pts = Map::new();
            for (label, r) in &rep.points {
                let v = match r {
                    Ok(p) => {
                        json!({"passed": p.passed(), "induced": p.induced, "profile": p.profile})
                    }
                    Err(e) => json!({"passed": false, "error": e.to_string()}),
                };
                if !matches!(r, Ok(p) if p.passed()) {
                    o.failure
                        .get_or_insert_with(|| format!("point {label} failed"));
                }
                pts.insert(label.clone(), v);
            }
            o.set("points", Value::Object(pts));
            Ok(o)
        }
        other => Err(OrbiparError::Config(format!("unknown command {other}"))),
    }
}
