//! Local cover scenes: a group `G` and, per branch point, the embedding of the
//! inertia group, the coset data of the fiber and the connector seeds.

use std::sync::Arc;

use crate::equivariant::product::{default_seeds, make_connectors, OrbitData};
use crate::error::{structural, Result};
use crate::local_galois::{FiniteGroup, LocalExtension};

#[derive(Clone, Debug)]
pub struct ScenePoint {
    pub label: String,
    pub inertia_group: FiniteGroup,
    pub orbit: OrbitData,
    pub seeds: Vec<usize>,
}

impl ScenePoint {
    /// `seeds = None` uses `c_{i+1} c_i^-1`.
    pub fn new(
        group: Arc<FiniteGroup>,
        label: &str,
        inertia_group: &FiniteGroup,
        inertia: Vec<usize>,
        seeds: Option<Vec<usize>>,
    ) -> Result<ScenePoint> {
        let orbit = OrbitData::new(group, inertia_group, inertia)?;
        let seeds = seeds.unwrap_or_else(|| default_seeds(&orbit));
        make_connectors(&orbit, &seeds)?;
        Ok(ScenePoint {
            label: label.to_string(),
            inertia_group: inertia_group.clone(),
            orbit,
            seeds,
        })
    }

    pub fn connectors(&self) -> Vec<Vec<usize>> {
        make_connectors(&self.orbit, &self.seeds).expect("validated seeds")
    }

    pub fn fiber_size(&self) -> usize {
        self.orbit.count()
    }

    pub fn with_seeds(&self, seeds: Vec<usize>) -> Result<ScenePoint> {
        make_connectors(&self.orbit, &seeds)?;
        let mut out = self.clone();
        out.seeds = seeds;
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct CoverScene {
    pub group: Arc<FiniteGroup>,
    pub points: Vec<ScenePoint>,
}

impl CoverScene {
    pub fn new(group: Arc<FiniteGroup>, points: Vec<ScenePoint>) -> Result<CoverScene> {
        for p in &points {
            if *p.orbit.group != *group {
                return Err(structural(format!(
                    "point {} uses a different group",
                    p.label
                )));
            }
            if !p.orbit.is_transitive() {
                return Err(structural(format!(
                    "index action at {} is not transitive",
                    p.label
                )));
            }
        }
        Ok(CoverScene { group, points })
    }

    /// `G = I`, one point in the fiber.
    pub fn totally_ramified(label: &str, ext: &LocalExtension) -> CoverScene {
        let group = Arc::new(ext.group().clone());
        let inertia = group.elements().collect();
        let p = ScenePoint::new(group.clone(), label, ext.group(), inertia, None)
            .expect("identity inertia");
        CoverScene {
            group,
            points: vec![p],
        }
    }

    /// `G = I x Z/m` with `I` as the first factor: `m` points in the fiber.
    pub fn with_cyclic_factor(label: &str, ext: &LocalExtension, m: usize) -> CoverScene {
        let group = Arc::new(FiniteGroup::product(ext.group(), &FiniteGroup::cyclic(m)));
        let inertia = ext.group().elements().collect();
        let p = ScenePoint::new(group.clone(), label, ext.group(), inertia, None)
            .expect("product inertia");
        CoverScene {
            group,
            points: vec![p],
        }
    }

    pub fn point(&self, label: &str) -> Option<&ScenePoint> {
        self.points.iter().find(|p| p.label == label)
    }
}
