//! Built-in scenarios.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::algebra::field::Field;
use crate::cli::scenario::{
    extension_tables, Command, DatumSpec, ExtensionSpec, FieldSpec, GroupSpec, PointSpec,
    RefinementSpec, Scenario, ScenePointSpec, SceneSpec, SCHEMA_VERSION,
};
use crate::error::{OrbiparError, Result};
use crate::local_galois::{make_artin_schreier, make_kummer};

pub const DEFAULT_PRECISION: usize = 16;

/// Fixed demo names; `kummer-N-P[-K]` and `artin-schreier-P` are also accepted.
pub const DEMOS: &[&str] = &[
    "artin-schreier-2",
    "artin-schreier-3",
    "kummer-2-5",
    "kummer-3-7",
    "multipoint-mixed",
    "sign-twist",
    "tower-2-4",
    "z6-two-points",
];

fn cmd(op: &str, args: Value) -> Command {
    let args = match args {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    Command {
        op: op.to_string(),
        args,
    }
}

fn base(name: &str, p: u32, k: u32) -> Scenario {
    Scenario {
        version: SCHEMA_VERSION,
        name: Some(name.to_string()),
        seed: 1,
        field: FieldSpec {
            p,
            k,
            modulus: None,
        },
        precision: DEFAULT_PRECISION,
        extensions: BTreeMap::new(),
        scenes: BTreeMap::new(),
        data: BTreeMap::new(),
        refinements: BTreeMap::new(),
        budget: None,
        commands: vec![],
    }
}

fn named(kind: &str, n: Option<usize>) -> ExtensionSpec {
    ExtensionSpec {
        kind: kind.to_string(),
        n,
        group: None,
        action: None,
        t: None,
        ram_index: None,
    }
}

fn scene_point(label: &str, extension: &str, inertia: Vec<usize>) -> ScenePointSpec {
    ScenePointSpec {
        label: label.to_string(),
        extension: extension.to_string(),
        inertia,
        seeds: None,
    }
}

fn random(label: &str, extension: &str, weights: Vec<usize>, base_power: i64) -> PointSpec {
    PointSpec::Random {
        label: label.to_string(),
        extension: extension.to_string(),
        weights,
        base_power,
    }
}

/// One Kummer extension written out as tables, verified.
pub fn kummer(n: usize, p: u32, k: u32) -> Result<Scenario> {
    let f = Field::new(p, k)?;
    let ext = make_kummer(&f, n, DEFAULT_PRECISION)?;
    let name = if k == 1 {
        format!("kummer-{n}-{p}")
    } else {
        format!("kummer-{n}-{p}-{k}")
    };
    let mut sc = base(&name, p, k);
    sc.extensions
        .insert("k".into(), extension_tables("kummer", Some(n), &ext));
    sc.commands
        .push(cmd("verify_extension", json!({"extension": "k"})));
    Ok(sc)
}

pub fn artin_schreier(p: u32) -> Result<Scenario> {
    let f = Field::new(p, 1)?;
    let ext = make_artin_schreier(&f, DEFAULT_PRECISION)?;
    let mut sc = base(&format!("artin-schreier-{p}"), p, 1);
    sc.extensions
        .insert("as".into(), extension_tables("artin-schreier", None, &ext));
    sc.commands
        .push(cmd("verify_extension", json!({"extension": "as"})));
    Ok(sc)
}

/// The sign character over the Kummer double cover in characteristic 5.
pub fn sign_twist() -> Result<Scenario> {
    let f = Field::new(5, 1)?;
    let ext = make_kummer(&f, 2, DEFAULT_PRECISION)?;
    let mut sc = base("sign-twist", 5, 1);
    sc.extensions
        .insert("k2".into(), extension_tables("kummer", Some(2), &ext));
    sc.data.insert(
        "v".into(),
        DatumSpec {
            rank: 1,
            points: vec![PointSpec::SignTwist {
                label: "p".into(),
                extension: "k2".into(),
            }],
        },
    );
    sc.data.insert(
        "one".into(),
        DatumSpec {
            rank: 1,
            points: vec![PointSpec::Trivial {
                label: "p".into(),
                extension: "k2".into(),
            }],
        },
    );
    sc.commands = vec![
        cmd("verify_extension", json!({"extension": "k2"})),
        cmd("validate", json!({"datum": "v"})),
        cmd("verify_cocycle", json!({"datum": "v"})),
        cmd("assemble", json!({"datum": "v"})),
        cmd("roundtrip", json!({"datum": "v"})),
        cmd("induced", json!({"datum": "v", "expect": false})),
        cmd("weights", json!({"datum": "v"})),
        cmd(
            "isomorphic",
            json!({"left": "v", "right": "one", "expect": false}),
        ),
        cmd("dual", json!({"datum": "v", "as": "v_dual"})),
        cmd("tensor", json!({"left": "v", "right": "v_dual", "as": "w"})),
        cmd("validate", json!({"datum": "w"})),
        cmd("dual_pairing", json!({"datum": "v"})),
        cmd("dual_involution", json!({"datum": "v"})),
        cmd("pushforward", json!({"datum": "v"})),
        cmd("adjunction", json!({"datum": "v", "rank_v": 2})),
    ];
    Ok(sc)
}

/// `Z/6` with two branch points, each with inertia `Z/3` and two points in
/// its fiber.
pub fn z6_two_points() -> Result<Scenario> {
    let mut sc = base("z6-two-points", 7, 1);
    sc.extensions.insert("k3".into(), named("kummer", Some(3)));
    sc.scenes.insert(
        "z6".into(),
        SceneSpec {
            group: GroupSpec::Cyclic(6),
            points: vec![
                scene_point("x", "k3", vec![0, 2, 4]),
                scene_point("y", "k3", vec![0, 4, 2]),
            ],
        },
    );
    sc.data.insert(
        "v".into(),
        DatumSpec {
            rank: 2,
            points: vec![
                random("x", "k3", vec![0, 1], 0),
                random("y", "k3", vec![2, 2], 1),
            ],
        },
    );
    sc.commands = vec![
        cmd("validate", json!({"datum": "v"})),
        cmd("assemble", json!({"datum": "v", "scene": "z6"})),
        cmd(
            "independence",
            json!({"datum": "v", "scene": "z6", "seeds": {"x": [3], "y": [5]}}),
        ),
        cmd("roundtrip", json!({"datum": "v", "scene": "z6"})),
        cmd("multipoint", json!({"datum": "v", "scene": "z6"})),
        cmd("weights", json!({"datum": "v"})),
    ];
    Ok(sc)
}

/// Pullback along the Kummer tower of degrees 2 and 4, with an extra `Z/2`
/// factor in the cover groups.
pub fn tower_2_4() -> Result<Scenario> {
    let mut sc = base("tower-2-4", 5, 1);
    sc.extensions.insert("k2".into(), named("kummer", Some(2)));
    sc.extensions.insert("k4".into(), named("kummer", Some(4)));
    let prod = |n| {
        GroupSpec::Product(
            Box::new(GroupSpec::Cyclic(n)),
            Box::new(GroupSpec::Cyclic(2)),
        )
    };
    sc.scenes.insert(
        "small".into(),
        SceneSpec {
            group: prod(2),
            points: vec![scene_point("p", "k2", vec![0, 1])],
        },
    );
    sc.scenes.insert(
        "big".into(),
        SceneSpec {
            group: prod(4),
            points: vec![scene_point("p", "k4", vec![0, 1, 2, 3])],
        },
    );
    sc.refinements.insert(
        "tower".into(),
        vec![RefinementSpec::KummerTower {
            label: "p".into(),
            small: "k2".into(),
            big: "k4".into(),
        }],
    );
    sc.data.insert(
        "v".into(),
        DatumSpec {
            rank: 2,
            points: vec![random("p", "k2", vec![0, 1], 0)],
        },
    );
    let quotient: Vec<usize> = (0..8).map(|g| (g % 4) % 2 + 2 * (g / 4)).collect();
    sc.commands = vec![
        cmd("validate", json!({"datum": "v"})),
        cmd(
            "pullback",
            json!({"datum": "v", "refinement": "tower", "as": "v4"}),
        ),
        cmd("validate", json!({"datum": "v4"})),
        cmd("weights", json!({"datum": "v"})),
        cmd("weights", json!({"datum": "v4"})),
        cmd(
            "equiv",
            json!({"left": "v", "right": "v4", "refinement_left": "tower"}),
        ),
        cmd(
            "tower",
            json!({"datum": "v", "small_scene": "small", "big_scene": "big", "refinement": "tower", "quotient": quotient}),
        ),
    ];
    Ok(sc)
}

/// Tame, wild and unramified points in one `Z/6` cover over `GF(3)`.
pub fn multipoint_mixed() -> Result<Scenario> {
    let mut sc = base("multipoint-mixed", 3, 1);
    sc.extensions.insert("k2".into(), named("kummer", Some(2)));
    sc.extensions
        .insert("as3".into(), named("artin-schreier", None));
    sc.extensions.insert("un".into(), named("inert", None));
    sc.scenes.insert(
        "z6".into(),
        SceneSpec {
            group: GroupSpec::Cyclic(6),
            points: vec![
                scene_point("a", "k2", vec![0, 3]),
                scene_point("b", "as3", vec![0, 2, 4]),
                scene_point("c", "un", vec![0]),
            ],
        },
    );
    sc.data.insert(
        "v".into(),
        DatumSpec {
            rank: 2,
            points: vec![
                random("a", "k2", vec![0, 1], 0),
                random("b", "as3", vec![1, 2], 0),
                PointSpec::Trivial {
                    label: "c".into(),
                    extension: "un".into(),
                },
            ],
        },
    );
    sc.commands = vec![
        cmd("verify_extension", json!({"extension": "k2"})),
        cmd("verify_extension", json!({"extension": "as3"})),
        cmd("validate", json!({"datum": "v"})),
        cmd("assemble", json!({"datum": "v", "scene": "z6"})),
        cmd("multipoint", json!({"datum": "v", "scene": "z6"})),
        cmd("roundtrip", json!({"datum": "v", "scene": "z6"})),
        cmd("weights", json!({"datum": "v", "expect": false})),
    ];
    Ok(sc)
}

fn numbers(rest: &str) -> Option<Vec<u32>> {
    rest.split('-').map(|x| x.parse().ok()).collect()
}

pub fn demo(name: &str) -> Result<Scenario> {
    match name {
        "sign-twist" | "kummer2-sign-twist" => return sign_twist(),
        "z6-two-points" => return z6_two_points(),
        "tower-2-4" => return tower_2_4(),
        "multipoint-mixed" => return multipoint_mixed(),
        _ => {}
    }
    if let Some(v) = name.strip_prefix("kummer-").and_then(numbers) {
        match v[..] {
            [n, p] => return kummer(n as usize, p, 1),
            [n, p, k] => return kummer(n as usize, p, k),
            _ => {}
        }
    }
    if let Some(v) = name.strip_prefix("artin-schreier-").and_then(numbers) {
        if let [p] = v[..] {
            return artin_schreier(p);
        }
    }
    let mut best: Vec<(f64, &str)> = DEMOS
        .iter()
        .map(|d| (strsim::jaro_winkler(name, d), *d))
        .collect();
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    Err(OrbiparError::Config(format!(
        "unknown demo {name} (closest: {}; available: {})",
        best[0].1,
        DEMOS.join(", ")
    )))
}
