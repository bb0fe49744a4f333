//! Equivariant modules on a finite orbit `G/I` of points, each point carrying
//! a copy of the complete local ring with its inertia action.
//!
//! Component `i` sits at the coset `c_i I`. An element `g` sends component `i`
//! to the component `j` with `g c_i` in `c_j I`, and acts on the ring through
//! the inertia element `c_j^-1 g c_i`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::linsolve::KMat;
use crate::algebra::matrix::{
    smat_diff, smat_identity, smat_inverse, smat_is_unimodular, EntryDiff, SMat,
};
use crate::algebra::series::Series;
use crate::equivariant::cocycle::Cocycle;
use crate::error::{structural, OrbiparError, Result};
use crate::local_galois::{FiniteGroup, LocalExtension};

fn assembly(condition: &str, detail: impl Into<String>) -> OrbiparError {
    OrbiparError::Assembly {
        condition: condition.to_string(),
        detail: detail.into(),
    }
}

/// Coset data of an inertia subgroup `I` (embedded in `G`) and its left cosets.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub group: Arc<FiniteGroup>,
    /// Inertia element -> element of `G`.
    pub inertia: Vec<usize>,
    inertia_of: Vec<Option<usize>>,
    /// Coset representatives, the first one being the identity.
    pub reps: Vec<usize>,
    lambda: Vec<Vec<usize>>,
    ring: Vec<Vec<usize>>,
}

impl OrbitData {
    /// Representatives chosen as the smallest element of each coset.
    pub fn new(
        group: Arc<FiniteGroup>,
        ext_group: &FiniteGroup,
        inertia: Vec<usize>,
    ) -> Result<OrbitData> {
        let inertia_of = Self::check_inertia(&group, ext_group, &inertia)?;
        let mut reps: Vec<usize> = Vec::new();
        for g in group.elements() {
            let covered = reps
                .iter()
                .any(|&c| inertia_of[group.mul(group.inv(c), g)].is_some());
            if !covered {
                reps.push(g);
            }
        }
        Self::finish(group, inertia, inertia_of, reps)
    }

    pub fn with_reps(
        group: Arc<FiniteGroup>,
        ext_group: &FiniteGroup,
        inertia: Vec<usize>,
        reps: Vec<usize>,
    ) -> Result<OrbitData> {
        let inertia_of = Self::check_inertia(&group, ext_group, &inertia)?;
        if reps.first() != Some(&0) {
            return Err(structural(
                "the first coset representative must be the identity",
            ));
        }
        if reps.len() * inertia.len() != group.order() || reps.iter().any(|&c| c >= group.order()) {
            return Err(structural(
                "representatives do not match the index of inertia",
            ));
        }
        for (a, &ca) in reps.iter().enumerate() {
            for &cb in &reps[..a] {
                if inertia_of[group.mul(group.inv(cb), ca)].is_some() {
                    return Err(structural(format!(
                        "representatives {cb} and {ca} share a coset"
                    )));
                }
            }
        }
        Self::finish(group, inertia, inertia_of, reps)
    }

    fn check_inertia(
        group: &FiniteGroup,
        ext_group: &FiniteGroup,
        inertia: &[usize],
    ) -> Result<Vec<Option<usize>>> {
        if inertia.len() != ext_group.order() || !group.order().is_multiple_of(inertia.len()) {
            return Err(structural("inertia embedding has the wrong size"));
        }
        if !ext_group.is_homomorphism(group, inertia) {
            return Err(structural("inertia embedding is not a homomorphism"));
        }
        let mut inertia_of = vec![None; group.order()];
        for (h, &g) in inertia.iter().enumerate() {
            if inertia_of[g].is_some() {
                return Err(structural("inertia embedding is not injective"));
            }
            inertia_of[g] = Some(h);
        }
        Ok(inertia_of)
    }

    fn finish(
        group: Arc<FiniteGroup>,
        inertia: Vec<usize>,
        inertia_of: Vec<Option<usize>>,
        reps: Vec<usize>,
    ) -> Result<OrbitData> {
        let l = reps.len();
        let mut lambda = vec![vec![0; l]; group.order()];
        let mut ring = vec![vec![0; l]; group.order()];
        for g in group.elements() {
            for i in 0..l {
                let gc = group.mul(g, reps[i]);
                let (j, h) = reps
                    .iter()
                    .enumerate()
                    .find_map(|(j, &c)| inertia_of[group.mul(group.inv(c), gc)].map(|h| (j, h)))
                    .ok_or_else(|| structural("coset representatives do not cover the group"))?;
                lambda[g][i] = j;
                ring[g][i] = h;
            }
        }
        Ok(OrbitData {
            group,
            inertia,
            inertia_of,
            reps,
            lambda,
            ring,
        })
    }

    /// A single point whose inertia is the whole group.
    pub fn single(ext_group: &FiniteGroup) -> OrbitData {
        let group = Arc::new(ext_group.clone());
        let inertia = group.elements().collect();
        OrbitData::new(group, ext_group, inertia).expect("identity embedding")
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Component reached from `i` by `g`.
    pub fn target(&self, g: usize, i: usize) -> usize {
        self.lambda[g][i]
    }

    /// Inertia element `c_j^-1 g c_i` through which `g` acts on the ring.
    pub fn ring_elem(&self, g: usize, i: usize) -> usize {
        self.ring[g][i]
    }

    pub fn to_inertia(&self, g: usize) -> Option<usize> {
        self.inertia_of[g]
    }

    /// `c_i h c_i^-1` for an inertia element `h`.
    pub fn conj_into(&self, i: usize, h: usize) -> usize {
        let g = &self.group;
        g.mul(g.mul(self.reps[i], self.inertia[h]), g.inv(self.reps[i]))
    }

    /// Stabilizer `c_i I c_i^-1` of component `i`.
    pub fn isotropy(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.inertia.len())
            .map(|h| self.conj_into(i, h))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.count()];
        seen[0] = true;
        for g in self.group.elements() {
            seen[self.target(g, 0)] = true;
        }
        seen.iter().all(|&s| s)
    }

    pub fn same_shape(&self, other: &OrbitData) -> bool {
        *self.group == *other.group && self.inertia == other.inertia && self.reps == other.reps
    }
}

/// Default seeds `c_{i+1} c_i^-1`.
pub fn default_seeds(orbit: &OrbitData) -> Vec<usize> {
    let g = &orbit.group;
    (1..orbit.count())
        .map(|i| g.mul(orbit.reps[i], g.inv(orbit.reps[i - 1])))
        .collect()
}

/// Connectors `g_ij` built from seeds `g_{i,i+1}`: `g_ij` is the product of
/// consecutive seeds and `g_ji = g_ij^-1`.
pub fn make_connectors(orbit: &OrbitData, seeds: &[usize]) -> Result<Vec<Vec<usize>>> {
    let l = orbit.count();
    let g = &orbit.group;
    if seeds.len() + 1 != l {
        return Err(assembly(
            "A",
            format!("{} seeds given for {} components", seeds.len(), l),
        ));
    }
    for (i, &s) in seeds.iter().enumerate() {
        if s >= g.order() || orbit.target(s, i) != i + 1 {
            return Err(assembly(
                "A",
                format!("seed {s} does not move component {i} to {}", i + 1),
            ));
        }
    }
    let mut c = vec![vec![0usize; l]; l];
    for i in 0..l {
        for j in i + 1..l {
            c[i][j] = g.mul(seeds[j - 1], c[i][j - 1]);
            c[j][i] = g.inv(c[i][j]);
        }
    }
    check_connectors(orbit, &c)?;
    Ok(c)
}

/// `g_ii = e`, `g_ij` moves `i` to `j`, and `g_ik = g_jk g_ij`.
pub fn check_connectors(orbit: &OrbitData, c: &[Vec<usize>]) -> Result<()> {
    let l = orbit.count();
    let g = &orbit.group;
    if c.len() != l || c.iter().any(|row| row.len() != l) {
        return Err(assembly("A", "connector table has the wrong shape"));
    }
    for i in 0..l {
        if c[i][i] != 0 {
            return Err(assembly("A", format!("g_{i}{i} is not the identity")));
        }
        for j in 0..l {
            if orbit.target(c[i][j], i) != j {
                return Err(assembly("A", format!("g_{i}{j} does not move {i} to {j}")));
            }
            for k in 0..l {
                if c[i][k] != g.mul(c[j][k], c[i][j]) {
                    return Err(assembly("A", format!("g_{i}{k} != g_{j}{k} g_{i}{j}")));
                }
            }
        }
    }
    Ok(())
}

/// Input of the assembly: one cocycle per component (indexed by inertia
/// elements, `h` standing for `c_i h c_i^-1`), connectors and transition
/// matrices `Theta_ij`.
#[derive(Clone, Debug)]
pub struct ProductSpec {
    pub orbit: OrbitData,
    pub ext: Arc<LocalExtension>,
    pub connectors: Vec<Vec<usize>>,
    pub thetas: Vec<Vec<SMat>>,
    pub components: Vec<Cocycle>,
}

impl ProductSpec {
    /// Identity transitions, default connectors.
    pub fn with_identity_thetas(
        orbit: OrbitData,
        ext: Arc<LocalExtension>,
        components: Vec<Cocycle>,
    ) -> Result<ProductSpec> {
        let connectors = make_connectors(&orbit, &default_seeds(&orbit))?;
        let r = components.first().map_or(0, |c| c.rank());
        let id = smat_identity(ext.field(), ext.prec(), r);
        let l = orbit.count();
        Ok(ProductSpec {
            orbit,
            ext,
            connectors,
            thetas: vec![vec![id; l]; l],
            components,
        })
    }

    pub fn rank(&self) -> usize {
        self.components.first().map_or(0, |c| c.rank())
    }

    /// Inertia element `c_j^-1 g_ij c_i`.
    pub fn alpha(&self, i: usize, j: usize) -> usize {
        self.orbit.ring_elem(self.connectors[i][j], i)
    }

    /// Checks conditions (A) to (D) and the component cocycles.
    pub fn check(&self) -> Result<()> {
        let l = self.orbit.count();
        if !self.orbit.is_transitive() {
            return Err(assembly("A", "index action is not transitive"));
        }
        check_connectors(&self.orbit, &self.connectors)?;
        if self.components.len() != l {
            return Err(assembly(
                "D",
                format!("{} components for {} points", self.components.len(), l),
            ));
        }
        if self.orbit.inertia.len() != self.ext.group().order() {
            return Err(assembly("D", "inertia does not match the extension group"));
        }
        let r = self.rank();
        for (i, c) in self.components.iter().enumerate() {
            if **c.ext() != *self.ext || c.rank() != r {
                return Err(assembly(
                    "D",
                    format!("component {i} has the wrong extension or rank"),
                ));
            }
            if let Some(v) = c.verify() {
                return Err(assembly("D", format!("component {i}: {v}")));
            }
        }
        if self.thetas.len() != l || self.thetas.iter().any(|row| row.len() != l) {
            return Err(assembly("D", "transition table has the wrong shape"));
        }
        for i in 0..l {
            for j in 0..l {
                let t = &self.thetas[i][j];
                if t.rows() != r || t.cols() != r || !smat_is_unimodular(t) {
                    return Err(assembly(
                        "D",
                        format!("Theta_{i}{j} is not an invertible {r}x{r} matrix"),
                    ));
                }
            }
        }
        let id = smat_identity(self.ext.field(), self.ext.prec(), r);
        for i in 0..l {
            if let Some(d) = smat_diff(&self.thetas[i][i], &id) {
                return Err(assembly(
                    "B",
                    format!("Theta_{i}{i} is not the identity at {d}"),
                ));
            }
            for j in 0..l {
                for k in 0..l {
                    let rhs = self.thetas[j][k]
                        .mul(&self.ext.psi_smat(self.alpha(j, k), &self.thetas[i][j]));
                    if let Some(d) = smat_diff(&self.thetas[i][k], &rhs) {
                        return Err(assembly(
                            "B",
                            format!("cocycle condition fails for ({i}, {j}, {k}) at {d}"),
                        ));
                    }
                }
            }
        }
        let grp = &self.orbit.group;
        for i in 0..l {
            for j in 0..l {
                let gij = self.connectors[i][j];
                let a = self.alpha(i, j);
                let tinv = smat_inverse(&self.thetas[i][j])?;
                for h in 0..self.orbit.inertia.len() {
                    let x = self.orbit.conj_into(i, h);
                    let y = grp.mul(grp.mul(gij, x), grp.inv(gij));
                    let hb = self.orbit.to_inertia(
                        grp.mul(grp.mul(grp.inv(self.orbit.reps[j]), y), self.orbit.reps[j]),
                    );
                    let Some(hb) = hb else {
                        return Err(assembly(
                            "C",
                            format!("conjugate of {x} does not fix component {j}"),
                        ));
                    };
                    let rhs = self.thetas[i][j]
                        .mul(&self.ext.psi_smat(a, self.components[i].mat(h)))
                        .mul(&self.ext.psi_smat(hb, &tinv));
                    if let Some(d) = smat_diff(self.components[j].mat(hb), &rhs) {
                        return Err(assembly(
                            "C",
                            format!("component {j} disagrees with transport from {i} at inertia element {h}: {d}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Image of component `source` under `g`: lands in `target`, twisted by the
/// ring automorphism of inertia element `ring`, with matrix `mat`.
#[derive(Clone, Debug)]
pub struct Block {
    pub target: usize,
    pub ring: usize,
    pub mat: SMat,
}

#[derive(Clone, Debug)]
pub struct ProductModule {
    spec: ProductSpec,
    blocks: Vec<Vec<Block>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionViolation {
    pub h: usize,
    pub g: usize,
    pub component: usize,
    pub entry: Option<EntryDiff>,
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "action law fails for ({}, {}) on component {}",
            self.h, self.g, self.component
        )?;
        if let Some(e) = &self.entry {
            write!(f, " at {e}")?;
        }
        Ok(())
    }
}

/// Checks the `ProductSpec` and builds the action of every group element.
pub fn assemble(spec: ProductSpec) -> Result<ProductModule> {
    spec.check()?;
    let grp = spec.orbit.group.clone();
    let l = spec.orbit.count();
    let mut blocks = Vec::with_capacity(grp.order());
    for g in grp.elements() {
        let mut row = Vec::with_capacity(l);
        for i in 0..l {
            let j = spec.orbit.target(g, i);
            let gi = grp.mul(grp.inv(spec.connectors[i][j]), g);
            let c = spec.orbit.reps[i];
            let h = spec
                .orbit
                .to_inertia(grp.mul(grp.mul(grp.inv(c), gi), c))
                .ok_or_else(|| structural("connector does not reach the stabilizer"))?;
            let a = spec.alpha(i, j);
            let mat = spec.thetas[i][j].mul(&spec.ext.psi_smat(a, spec.components[i].mat(h)));
            row.push(Block {
                target: j,
                ring: spec.orbit.ring_elem(g, i),
                mat,
            });
        }
        blocks.push(row);
    }
    let m = ProductModule { spec, blocks };
    if let Some(v) = m.verify_action() {
        return Err(assembly("action", v.to_string()));
    }
    if let Some((i, h)) = m.verify_restriction() {
        return Err(assembly(
            "restriction",
            format!("component {i}, inertia element {h}"),
        ));
    }
    Ok(m)
}

/// Builds a module from explicit blocks `blocks[g][i]`. The `ProductSpec` supplies the
/// orbit, extension and connectors; its components are replaced by the
/// stabilizer actions read off the blocks and its transitions by identities.
/// The action law is checked.
pub fn from_blocks(mut spec: ProductSpec, blocks: Vec<Vec<Block>>) -> Result<ProductModule> {
    let grp = spec.orbit.group.clone();
    let l = spec.orbit.count();
    if blocks.len() != grp.order() || blocks.iter().any(|row| row.len() != l) {
        return Err(structural("block table has the wrong shape"));
    }
    check_connectors(&spec.orbit, &spec.connectors)?;
    let r = blocks
        .first()
        .and_then(|row| row.first())
        .map_or(0, |b| b.mat.rows());
    let mut components = Vec::with_capacity(l);
    for i in 0..l {
        let mats = (0..spec.orbit.inertia.len())
            .map(|h| blocks[spec.orbit.conj_into(i, h)][i].mat.clone())
            .collect();
        components.push(Cocycle::new(spec.ext.clone(), mats)?);
    }
    spec.components = components;
    spec.thetas = vec![vec![smat_identity(spec.ext.field(), spec.ext.prec(), r); l]; l];
    let m = ProductModule { spec, blocks };
    if let Some(v) = m.verify_action() {
        return Err(assembly("action", v.to_string()));
    }
    if let Some((i, h)) = m.verify_restriction() {
        return Err(assembly(
            "restriction",
            format!("component {i}, inertia element {h}"),
        ));
    }
    Ok(m)
}

impl ProductModule {
    /// One point, the whole group acting through the cocycle.
    pub fn single(c: &Cocycle) -> Result<ProductModule> {
        let orbit = OrbitData::single(c.ext().group());
        assemble(ProductSpec::with_identity_thetas(
            orbit,
            c.ext().clone(),
            vec![c.clone()],
        )?)
    }

    pub fn spec(&self) -> &ProductSpec {
        &self.spec
    }

    pub fn orbit(&self) -> &OrbitData {
        &self.spec.orbit
    }

    pub fn ext(&self) -> &Arc<LocalExtension> {
        &self.spec.ext
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.spec.orbit.group
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    pub fn count(&self) -> usize {
        self.spec.orbit.count()
    }

    pub fn block(&self, g: usize, i: usize) -> &Block {
        &self.blocks[g][i]
    }

    /// Replaces one block. Only meant for building deliberately broken data.
    pub fn override_block(&mut self, g: usize, i: usize, mat: SMat) {
        self.blocks[g][i].mat = mat;
    }

    /// `Phi(h g) = Phi(h) Phi(g)` on every component.
    pub fn verify_action(&self) -> Option<ActionViolation> {
        let grp = self.group();
        let ig = self.ext().group();
        for h in grp.elements() {
            for g in grp.elements() {
                for i in 0..self.count() {
                    let bg = &self.blocks[g][i];
                    let bh = &self.blocks[h][bg.target];
                    let bhg = &self.blocks[grp.mul(h, g)][i];
                    let fail = |entry| ActionViolation {
                        h,
                        g,
                        component: i,
                        entry,
                    };
                    if bhg.target != bh.target || bhg.ring != ig.mul(bh.ring, bg.ring) {
                        return Some(fail(None));
                    }
                    let rhs = bh.mat.mul(&self.ext().psi_smat(bh.ring, &bg.mat));
                    if let Some(d) = smat_diff(&bhg.mat, &rhs) {
                        return Some(fail(Some(d)));
                    }
                }
            }
        }
        None
    }

    /// The stabilizer of component `i` acts through the given cocycle.
    /// Returns the first (component, inertia element) where it does not.
    pub fn verify_restriction(&self) -> Option<(usize, usize)> {
        for i in 0..self.count() {
            let c = &self.spec.components[i];
            for h in 0..self.orbit().inertia.len() {
                let b = &self.blocks[self.orbit().conj_into(i, h)][i];
                if b.target != i || b.ring != h || smat_diff(&b.mat, c.mat(h)).is_some() {
                    return Some((i, h));
                }
            }
        }
        None
    }

    /// Action of the stabilizer of component `i`, as a cocycle over the inertia.
    pub fn component_cocycle(&self, i: usize) -> Result<Cocycle> {
        let mats = (0..self.orbit().inertia.len())
            .map(|h| self.blocks[self.orbit().conj_into(i, h)][i].mat.clone())
            .collect();
        Cocycle::new(self.ext().clone(), mats)
    }

    /// Dimension of the truncated total module over the base field.
    pub fn total_dim(&self) -> usize {
        self.count() * self.rank() * self.ext().prec()
    }

    /// Coordinate of `s^d e_a` on component `i`.
    pub fn coord(&self, i: usize, a: usize, d: usize) -> usize {
        (i * self.rank() + a) * self.ext().prec() + d
    }

    /// `Phi(g)` as a matrix over the base field on the truncated total module.
    pub fn phi_kmat(&self, g: usize) -> KMat {
        let n = self.ext().prec();
        let r = self.rank();
        let f = self.ext().field().clone();
        let mut out = KMat::zeros(&f, self.total_dim(), self.total_dim());
        for i in 0..self.count() {
            let b = &self.blocks[g][i];
            for d in 0..n {
                let moved = self.ext().psi(b.ring, &Series::monomial(&f, 1, d, n));
                for col in 0..r {
                    let src = self.coord(i, col, d);
                    for row in 0..r {
                        let x = b.mat.get(row, col).mul(&moved);
                        for (k, &c) in x.coeffs().iter().enumerate() {
                            if c != 0 {
                                out.set(self.coord(b.target, row, k), src, c);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Applies `Phi(g)` to a vector given as `l * r` series.
    pub fn apply(&self, g: usize, v: &[Series]) -> Vec<Series> {
        let r = self.rank();
        let f = self.ext().field().clone();
        let n = self.ext().prec();
        let mut out = vec![Series::zero(&f, n); self.count() * r];
        for i in 0..self.count() {
            let b = &self.blocks[g][i];
            let moved: Vec<Series> = (0..r)
                .map(|a| self.ext().psi(b.ring, &v[i * r + a]))
                .collect();
            for row in 0..r {
                let mut acc = Series::zero(&f, n);
                for (col, m) in moved.iter().enumerate() {
                    acc = acc.add(&b.mat.get(row, col).mul(m));
                }
                out[b.target * r + row] = acc;
            }
        }
        out
    }
}

/// Compares two modules with the same first component: `tau_j` is the block
/// of `Phi_b(g) Phi_a(g)^-1` for `g = g_0j` of `a`. Returns the per-component
/// matrices, verified against every group element.
pub fn independence_intertwiner(a: &ProductModule, b: &ProductModule) -> Result<Vec<SMat>> {
    if !a.orbit().same_shape(b.orbit()) || **a.ext() != **b.ext() || a.rank() != b.rank() {
        return Err(OrbiparError::Validation(
            "modules live on different orbits".into(),
        ));
    }
    let (ca, cb) = (a.component_cocycle(0)?, b.component_cocycle(0)?);
    if ca
        .mats()
        .iter()
        .zip(cb.mats())
        .any(|(x, y)| smat_diff(x, y).is_some())
    {
        return Err(OrbiparError::Validation(
            "precondition failed: first components carry different actions".into(),
        ));
    }
    let mut tau = Vec::with_capacity(a.count());
    for j in 0..a.count() {
        let g = a.spec().connectors[0][j];
        let inv = smat_inverse(&a.block(g, 0).mat)?;
        tau.push(b.block(g, 0).mat.mul(&inv));
    }
    if let Some(v) = verify_morphism(a, b, &tau) {
        return Err(OrbiparError::Validation(format!(
            "intertwiner check failed: {v}"
        )));
    }
    Ok(tau)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismViolation {
    pub g: usize,
    pub component: usize,
    pub entry: EntryDiff,
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "element {} on component {} at {}",
            self.g, self.component, self.entry
        )
    }
}

/// `f_j M_src(g) = M_dst(g) psi(ring)(f_i)` for every `g` and component `i`.
pub fn verify_morphism(
    src: &ProductModule,
    dst: &ProductModule,
    f: &[SMat],
) -> Option<MorphismViolation> {
    for g in src.group().elements() {
        for i in 0..src.count() {
            let (bs, bd) = (src.block(g, i), dst.block(g, i));
            let lhs = f[bs.target].mul(&bs.mat);
            let rhs = bd.mat.mul(&src.ext().psi_smat(bd.ring, &f[i]));
            if let Some(entry) = smat_diff(&lhs, &rhs) {
                return Some(MorphismViolation {
                    g,
                    component: i,
                    entry,
                });
            }
        }
    }
    None
}

/// Extends a morphism given on the first component by
/// `f_j = Theta'_0j psi(alpha_0j)(f_0) Theta_0j^-1`, then checks it.
pub fn assemble_morphism(src: &ProductModule, dst: &ProductModule, f0: &SMat) -> Result<Vec<SMat>> {
    if !src.orbit().same_shape(dst.orbit()) || src.spec().connectors != dst.spec().connectors {
        return Err(OrbiparError::Validation(
            "morphism ends use different orbit data".into(),
        ));
    }
    let mut f = Vec::with_capacity(src.count());
    for j in 0..src.count() {
        let a = src.spec().alpha(0, j);
        let tinv = smat_inverse(&src.spec().thetas[0][j])?;
        f.push(
            dst.spec().thetas[0][j]
                .mul(&src.ext().psi_smat(a, f0))
                .mul(&tinv),
        );
    }
    match verify_morphism(src, dst, &f) {
        None => Ok(f),
        Some(v) => Err(OrbiparError::Validation(format!(
            "morphism is not equivariant: {v}"
        ))),
    }
}
