//! Python bindings: fields, local extensions, parabolic data at one point,
//! and the scenario runner.

use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbipar::algebra::field::Field;
use orbipar::cli;
use orbipar::equivariant::search::Budget;
use orbipar::local_galois::{make_artin_schreier, make_kummer, LocalExtension};
use orbipar::parabolic::corpus::{random_datum, sign_twist};
use orbipar::parabolic::datum::{validate_parabolic, ParabolicDatum, PointDatum};
use orbipar::parabolic::functors::{functor_s, functor_t, roundtrip_check};
use orbipar::parabolic::morphism::find_parabolic_isomorphism;
use orbipar::parabolic::scene::CoverScene;
use orbipar::pvect_ops::calculus::{dual, tensor};
use orbipar::pvect_ops::weights::extract_weights;
use orbipar::OrbiparError;

fn py_err(e: OrbiparError) -> PyErr {
    match e {
        OrbiparError::Precision { .. } | OrbiparError::NotInvertible { .. } => {
            PyArithmeticError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Field", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, k = 1))]
    fn new(p: u32, k: u32) -> PyResult<Self> {
        Field::new(p, k).map(PyField).map_err(py_err)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add(a, b)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul(a, b)
    }

    fn __repr__(&self) -> String {
        format!("Field(q={})", self.0.q())
    }
}

#[pyclass(name = "Extension", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExtension(Arc<LocalExtension>);

#[pymethods]
impl PyExtension {
    #[staticmethod]
    fn kummer(field: &PyField, n: usize, precision: usize) -> PyResult<Self> {
        make_kummer(&field.0, n, precision)
            .map(|e| PyExtension(Arc::new(e)))
            .map_err(py_err)
    }

    #[staticmethod]
    fn artin_schreier(field: &PyField, precision: usize) -> PyResult<Self> {
        make_artin_schreier(&field.0, precision)
            .map(|e| PyExtension(Arc::new(e)))
            .map_err(py_err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.group().order()
    }

    #[getter]
    fn ram_index(&self) -> usize {
        self.0.ram_index()
    }

    #[getter]
    fn precision(&self) -> usize {
        self.0.prec()
    }

    #[getter]
    fn is_tame(&self) -> bool {
        self.0.is_tame()
    }

    /// Coefficients of the base uniformizer `t` as a series in `s`.
    fn base_uniformizer(&self) -> Vec<u32> {
        self.0.base_uniformizer().coeffs().to_vec()
    }

    /// `None` when every extension law holds, else a description of the first failure.
    fn verify(&self) -> Option<String> {
        self.0.verify().map(|f| f.to_string())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

type WeightTuple = (usize, Vec<(usize, usize)>, usize);

/// A parabolic datum supported at the single point `p`.
#[pyclass(name = "Datum", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDatum(ParabolicDatum);

fn single(p: PointDatum) -> PyDatum {
    PyDatum(ParabolicDatum::single(p))
}

#[pymethods]
impl PyDatum {
    #[staticmethod]
    fn trivial(ext: &PyExtension, rank: usize) -> Self {
        single(PointDatum::trivial("p", ext.0.clone(), rank))
    }

    #[staticmethod]
    fn sign_twist(ext: &PyExtension) -> PyResult<Self> {
        sign_twist("p", ext.0.clone()).map(single).map_err(py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (ext, weights, base_power = 0, seed = 0))]
    fn random(
        ext: &PyExtension,
        weights: Vec<usize>,
        base_power: i64,
        seed: u64,
    ) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_datum("p", ext.0.clone(), &weights, base_power, &mut rng)
            .map(single)
            .map_err(py_err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank
    }

    /// `None` if the datum is valid, else the first issue found.
    fn validate(&self) -> Option<String> {
        validate_parabolic(&self.0)
            .points
            .into_iter()
            .find_map(|p| p.issue.map(|i| format!("{}: {i}", p.label)))
    }

    /// `(n, [(a, multiplicity), ...], jordan_defect)`.
    fn weights(&self) -> PyResult<WeightTuple> {
        let w = extract_weights(&self.0.points[0]).map_err(py_err)?;
        Ok((w.n, w.weights, w.jordan_defect))
    }

    fn dual(&self) -> PyResult<Self> {
        dual(&self.0).map(PyDatum).map_err(py_err)
    }

    fn tensor(&self, other: &PyDatum) -> PyResult<Self> {
        tensor(&self.0, &other.0).map(PyDatum).map_err(py_err)
    }

    /// Whether the assembled bundle on the totally ramified cover is induced
    /// from its invariants.
    fn is_induced(&self) -> PyResult<bool> {
        let scene = scene(&self.0);
        let (_, choices) =
            functor_s(&functor_t(&self.0, &scene).map_err(py_err)?).map_err(py_err)?;
        Ok(choices.iter().all(|c| c.induced))
    }

    /// Both round trips through the equivariant side, certificates checked.
    fn roundtrip(&self) -> PyResult<bool> {
        roundtrip_check(&self.0, &scene(&self.0))
            .map(|r| r.passed())
            .map_err(py_err)
    }

    /// `True`, `False` (certified absent) or `None` when the search is inconclusive.
    #[pyo3(signature = (other, seed = 0))]
    fn isomorphic(&self, other: &PyDatum, seed: u64) -> PyResult<Option<bool>> {
        let s = find_parabolic_isomorphism(&self.0, &other.0, &Budget::default(), seed)
            .map_err(py_err)?;
        Ok(if s.found() {
            Some(true)
        } else if s.certified_absent() {
            Some(false)
        } else {
            None
        })
    }

    fn __repr__(&self) -> String {
        format!("Datum(rank={})", self.0.rank)
    }
}

fn scene(d: &ParabolicDatum) -> CoverScene {
    let p = &d.points[0];
    CoverScene::totally_ramified(&p.label, p.ext())
}

#[pyfunction]
fn demos() -> Vec<&'static str> {
    cli::DEMOS.to_vec()
}

/// Scenario JSON of a built-in demo.
#[pyfunction]
fn demo_scenario(name: &str) -> PyResult<String> {
    let sc = cli::demo(name).map_err(py_err)?;
    cli::scenario_to_string(&sc).map_err(py_err)
}

/// Runs a scenario given as JSON text; returns `(exit_code, report_json)`.
#[pyfunction]
#[pyo3(signature = (text, seed = None, precision = None))]
fn run_scenario(
    text: &str,
    seed: Option<u64>,
    precision: Option<usize>,
) -> PyResult<(i32, String)> {
    let sc = cli::parse_scenario(text).map_err(py_err)?;
    let rep = cli::run_scenario(sc, &cli::Overrides { seed, precision }).map_err(py_err)?;
    Ok((rep.exit_code(), rep.to_canonical_string()))
}

#[pymodule]
fn pyorbipar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyExtension>()?;
    m.add_class::<PyDatum>()?;
    m.add_function(wrap_pyfunction!(demos, m)?)?;
    m.add_function(wrap_pyfunction!(demo_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
