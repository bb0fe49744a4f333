//! Scenario files: JSON, versioned. Coefficient arrays list `s^0` first;
//! Laurent matrices carry one explicit `val_floor`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::field::Field;
use crate::algebra::laurent::Laurent;
use crate::algebra::matrix::{LMat, Matrix, SMat};
use crate::algebra::series::Series;
use crate::equivariant::cocycle::Cocycle;
use crate::error::{OrbiparError, Result};
use crate::local_galois::{
    make_artin_schreier, make_inert, make_kummer, ExtensionEmbedding, ExtensionKind, FiniteGroup,
    LocalExtension,
};
use crate::parabolic::corpus::{random_datum, sign_twist};
use crate::parabolic::datum::{ParabolicDatum, PointDatum};
use crate::parabolic::scene::{CoverScene, ScenePoint};
use crate::pvect_ops::refine::{RefinementMap, RefinementTarget};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub seed: u64,
    pub field: FieldSpec,
    pub precision: usize,
    #[serde(default)]
    pub extensions: BTreeMap<String, ExtensionSpec>,
    #[serde(default)]
    pub scenes: BTreeMap<String, SceneSpec>,
    #[serde(default)]
    pub data: BTreeMap<String, DatumSpec>,
    #[serde(default)]
    pub refinements: BTreeMap<String, Vec<RefinementSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<BudgetSpec>,
    #[serde(default)]
    pub commands: Vec<Command>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averaging_tries: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

/// Named constructions may also carry their explicit tables; these are then
/// checked against the construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    /// `act(g)(s)` coefficients per group element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ram_index: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub group: GroupSpec,
    pub points: Vec<ScenePointSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenePointSpec {
    pub label: String,
    pub extension: String,
    /// Image in the scene group of each element of the extension group.
    pub inertia: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumSpec {
    pub rank: usize,
    pub points: Vec<PointSpec>,
}

/// A matrix of series: rows of coefficient arrays.
pub type SMatSpec = Vec<Vec<Vec<u32>>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LMatSpec {
    pub val_floor: i64,
    pub rows: SMatSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PointSpec {
    Trivial {
        label: String,
        extension: String,
    },
    SignTwist {
        label: String,
        extension: String,
    },
    Random {
        label: String,
        extension: String,
        weights: Vec<usize>,
        #[serde(default)]
        base_power: i64,
    },
    /// Either all matrices `A_g` or only the generator of a cyclic group.
    Explicit {
        label: String,
        extension: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cocycle: Option<Vec<SMatSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generator: Option<SMatSpec>,
        mu: LMatSpec,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RefinementSpec {
    KummerTower {
        label: String,
        small: String,
        big: String,
    },
    Identity {
        label: String,
        extension: String,
    },
    Explicit {
        label: String,
        small: String,
        big: String,
        s_image: Vec<u32>,
        quotient: Vec<usize>,
    },
    Extend {
        label: String,
        extension: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Command {
    pub op: String,
    #[serde(flatten)]
    pub args: Map<String, Value>,
}

/// A scenario with every named object built.
pub struct Context {
    pub scenario: Scenario,
    pub field: Field,
    pub extensions: BTreeMap<String, Arc<LocalExtension>>,
    pub scenes: BTreeMap<String, CoverScene>,
    pub data: BTreeMap<String, ParabolicDatum>,
    pub refinements: BTreeMap<String, RefinementMap>,
}

fn config(msg: impl Into<String>) -> OrbiparError {
    OrbiparError::Config(msg.into())
}

/// Pretty JSON with a trailing newline, the format written by `demo -o`.
pub fn scenario_to_string(sc: &Scenario) -> Result<String> {
    let mut text = serde_json::to_string_pretty(sc).map_err(|e| config(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Parses scenario text; errors carry line and column.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let sc: Scenario = serde_json::from_str(text).map_err(|e| {
        config(format!(
            "parse error at line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    if sc.version != SCHEMA_VERSION {
        return Err(config(format!(
            "unsupported scenario version {} (expected {SCHEMA_VERSION})",
            sc.version
        )));
    }
    Ok(sc)
}

pub fn build_group(g: &GroupSpec) -> Result<FiniteGroup> {
    Ok(match g {
        GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
        GroupSpec::Dihedral(m) => FiniteGroup::dihedral(*m),
        GroupSpec::Product(a, b) => FiniteGroup::product(&build_group(a)?, &build_group(b)?),
        GroupSpec::Table(t) => FiniteGroup::from_table(t.clone(), "table")?,
    })
}

pub fn series(f: &Field, c: &[u32], prec: usize) -> Result<Series> {
    if c.iter().any(|&x| !f.is_element(x)) {
        return Err(config(format!("coefficient outside the field in {c:?}")));
    }
    if c.len() > prec {
        return Err(config(format!(
            "{} coefficients exceed precision {prec}",
            c.len()
        )));
    }
    Ok(Series::from_coeffs(f, c, prec))
}

pub fn build_smat(f: &Field, m: &SMatSpec, prec: usize) -> Result<SMat> {
    let rows = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| series(f, c, prec))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn build_lmat(f: &Field, m: &LMatSpec, prec: usize) -> Result<LMat> {
    let rows = m
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    if c.iter().any(|&x| !f.is_element(x)) {
                        return Err(config("coefficient outside the field"));
                    }
                    let mut c = c.clone();
                    c.resize(prec, 0);
                    Ok(Laurent::new(f, m.val_floor, c))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn smat_spec(a: &SMat) -> SMatSpec {
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| a.get(i, j).coeffs().to_vec())
                .collect()
        })
        .collect()
}

/// Common floor, coefficients padded to one window.
pub fn lmat_spec(a: &LMat) -> LMatSpec {
    let floor = a
        .entries()
        .iter()
        .map(Laurent::val_floor)
        .min()
        .unwrap_or(0);
    let abs = a
        .entries()
        .iter()
        .map(Laurent::abs_prec)
        .min()
        .unwrap_or(floor);
    let width = (abs - floor).max(0) as usize;
    let rows = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let x = a.get(i, j);
                    (0..width)
                        .map(|k| x.coeff(floor + k as i64).unwrap_or(0))
                        .collect()
                })
                .collect()
        })
        .collect();
    LMatSpec {
        val_floor: floor,
        rows,
    }
}

fn build_extension(
    f: &Field,
    prec: usize,
    name: &str,
    e: &ExtensionSpec,
) -> Result<LocalExtension> {
    let built = match e.kind.as_str() {
        "kummer" => make_kummer(
            f,
            e.n.ok_or_else(|| config(format!("extension {name}: kummer needs n")))?,
            prec,
        )?,
        "artin-schreier" => make_artin_schreier(f, prec)?,
        "inert" => {
            let g = e
                .group
                .as_ref()
                .map(build_group)
                .transpose()?
                .unwrap_or_else(|| FiniteGroup::cyclic(1));
            make_inert(f, prec, g)?
        }
        "explicit" => {
            let g = build_group(
                e.group
                    .as_ref()
                    .ok_or_else(|| config(format!("extension {name}: explicit needs a group")))?,
            )?;
            let action = e
                .action
                .as_ref()
                .ok_or_else(|| config(format!("extension {name}: explicit needs an action table")))?
                .iter()
                .map(|c| series(f, c, prec))
                .collect::<Result<Vec<_>>>()?;
            let t = series(
                f,
                e.t.as_ref()
                    .ok_or_else(|| config(format!("extension {name}: explicit needs t")))?,
                prec,
            )?;
            let ram = e.ram_index.unwrap_or(g.order());
            LocalExtension::new(f, prec, g, action, t, ram, ExtensionKind::Explicit)?
        }
        other => {
            return Err(config(format!(
                "extension {name}: unknown kind {other} (kummer, artin-schreier, inert, explicit)"
            )))
        }
    };
    if e.kind != "explicit" {
        if let Some(action) = &e.action {
            for (g, c) in action.iter().enumerate() {
                if g >= built.group().order() || series(f, c, prec)? != *built.action(g) {
                    return Err(config(format!(
                        "extension {name}: listed action of element {g} does not match"
                    )));
                }
            }
        }
        if let Some(t) = &e.t {
            if series(f, t, prec)? != *built.base_uniformizer() {
                return Err(config(format!("extension {name}: listed t does not match")));
            }
        }
    }
    Ok(built)
}

/// Table form of an extension, as written by the demos.
pub fn extension_tables(kind: &str, n: Option<usize>, ext: &LocalExtension) -> ExtensionSpec {
    let trim = |s: &Series| {
        let mut c = s.coeffs().to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        c
    };
    ExtensionSpec {
        kind: kind.to_string(),
        n,
        group: Some(GroupSpec::Table(ext.group().table_rows())),
        action: Some(
            ext.group()
                .elements()
                .map(|g| trim(ext.action(g)))
                .collect(),
        ),
        t: Some(trim(ext.base_uniformizer())),
        ram_index: Some(ext.ram_index()),
    }
}

/// Stable 64-bit FNV-1a, used to derive per-datum random streams.
pub fn name_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn build_point(
    ctx: &Context,
    p: &PointSpec,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PointDatum> {
    let ext_of = |name: &str| {
        ctx.extensions
            .get(name)
            .cloned()
            .ok_or_else(|| config(format!("unknown extension {name}")))
    };
    let prec = ctx.scenario.precision;
    match p {
        PointSpec::Trivial { label, extension } => {
            Ok(PointDatum::trivial(label, ext_of(extension)?, rank))
        }
        PointSpec::SignTwist { label, extension } => sign_twist(label, ext_of(extension)?),
        PointSpec::Random {
            label,
            extension,
            weights,
            base_power,
        } => random_datum(label, ext_of(extension)?, weights, *base_power, rng),
        PointSpec::Explicit {
            label,
            extension,
            cocycle,
            generator,
            mu,
        } => {
            let ext = ext_of(extension)?;
            let psi = match (cocycle, generator) {
                (Some(mats), None) => Cocycle::new(
                    ext.clone(),
                    mats.iter()
                        .map(|m| build_smat(&ctx.field, m, prec))
                        .collect::<Result<Vec<_>>>()?,
                )?,
                (None, Some(g)) => {
                    Cocycle::from_generator(ext.clone(), build_smat(&ctx.field, g, prec)?)?
                }
                _ => {
                    return Err(config(format!(
                        "point {label}: give exactly one of cocycle and generator"
                    )))
                }
            };
            Ok(PointDatum {
                label: label.clone(),
                psi,
                mu: build_lmat(&ctx.field, mu, prec)?,
            })
        }
    }
}

fn build_refinement(ctx: &Context, items: &[RefinementSpec]) -> Result<RefinementMap> {
    let ext_of = |name: &str| {
        ctx.extensions
            .get(name)
            .cloned()
            .ok_or_else(|| config(format!("unknown extension {name}")))
    };
    let mut r = RefinementMap::default();
    for it in items {
        let (label, target) = match it {
            RefinementSpec::KummerTower { label, small, big } => (
                label,
                RefinementTarget::Embed(ExtensionEmbedding::kummer_tower(
                    ext_of(small)?,
                    ext_of(big)?,
                )?),
            ),
            RefinementSpec::Identity { label, extension } => (
                label,
                RefinementTarget::Embed(ExtensionEmbedding::identity(ext_of(extension)?)),
            ),
            RefinementSpec::Explicit {
                label,
                small,
                big,
                s_image,
                quotient,
            } => {
                let img = series(&ctx.field, s_image, ctx.scenario.precision)?;
                (
                    label,
                    RefinementTarget::Embed(ExtensionEmbedding::new(
                        ext_of(small)?,
                        ext_of(big)?,
                        img,
                        quotient.clone(),
                    )?),
                )
            }
            RefinementSpec::Extend { label, extension } => {
                (label, RefinementTarget::Extend(ext_of(extension)?))
            }
        };
        r.points.push((label.clone(), target));
    }
    Ok(r)
}

/// Builds every named object. Data are built but not validated here.
pub fn build_context(sc: Scenario) -> Result<Context> {
    let field = match &sc.field.modulus {
        Some(m) => Field::with_modulus(sc.field.p, sc.field.k, m.clone())?,
        None => Field::new(sc.field.p, sc.field.k)?,
    };
    let mut ctx = Context {
        field,
        extensions: BTreeMap::new(),
        scenes: BTreeMap::new(),
        data: BTreeMap::new(),
        refinements: BTreeMap::new(),
        scenario: sc,
    };
    let prec = ctx.scenario.precision;
    for (name, e) in &ctx.scenario.extensions {
        let ext = build_extension(&ctx.field, prec, name, e)?;
        ctx.extensions.insert(name.clone(), Arc::new(ext));
    }
    for (name, s) in &ctx.scenario.scenes {
        let group = Arc::new(build_group(&s.group)?);
        let points = s
            .points
            .iter()
            .map(|p| {
                let ext = ctx.extensions.get(&p.extension).ok_or_else(|| {
                    config(format!("scene {name}: unknown extension {}", p.extension))
                })?;
                ScenePoint::new(
                    group.clone(),
                    &p.label,
                    ext.group(),
                    p.inertia.clone(),
                    p.seeds.clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        ctx.scenes
            .insert(name.clone(), CoverScene::new(group, points)?);
    }
    let data_specs = ctx.scenario.data.clone();
    for (name, d) in &data_specs {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.scenario.seed ^ name_hash(name));
        let points = d
            .points
            .iter()
            .map(|p| build_point(&ctx, p, d.rank, &mut rng))
            .collect::<Result<Vec<_>>>()
            .map_err(|e: OrbiparError| config(format!("datum {name}: {e}")))?;
        let datum = ParabolicDatum::new(d.rank, points)
            .map_err(|e| config(format!("datum {name}: {e}")))?;
        ctx.data.insert(name.clone(), datum);
    }
    let refs = ctx.scenario.refinements.clone();
    for (name, items) in &refs {
        let r =
            build_refinement(&ctx, items).map_err(|e| config(format!("refinement {name}: {e}")))?;
        ctx.refinements.insert(name.clone(), r);
    }
    Ok(ctx)
}
