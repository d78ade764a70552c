//! Python bindings: decision matrices, the three rankings, Pareto fronts,
//! ONVGR, boxplot summaries, sensor catalogs and experiment plans.

use std::path::PathBuf;

use cotrank::catalog::{self as cat, SensorDescription};
use cotrank::experiment::{self as exp, CatalogSource, ResultRecord};
use cotrank::{Algorithm, CriterionSpec, Direction, VikorParams, WeightVector};
use pyo3::exceptions::{PyIOError, PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: cotrank::Error) -> PyErr {
    match e {
        cotrank::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for cotrank::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn parse<T: std::str::FromStr<Err = cotrank::Error>>(s: &str) -> PyResult<T> {
    s.parse().py_err()
}

/// Alternatives (rows) scored on criteria (columns), each criterion either
/// maximized ("max") or minimized ("min").
#[pyclass(module = "cotrank", frozen)]
struct DecisionMatrix(cotrank::DecisionMatrix);

#[pymethods]
impl DecisionMatrix {
    /// `criteria` is a list of (name, "max" | "min") pairs; `rows` has one
    /// list of values per alternative.
    #[new]
    fn new(alternatives: Vec<String>, criteria: Vec<(String, String)>, rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let criteria = criteria
            .into_iter()
            .map(|(name, dir)| Ok(CriterionSpec::new(name, parse::<Direction>(&dir)?, 0.0)))
            .collect::<PyResult<Vec<_>>>()?;
        cotrank::DecisionMatrix::new(alternatives, criteria, rows).py_err().map(Self)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    #[getter]
    fn alternatives(&self) -> Vec<String> {
        self.0.alternatives().to_vec()
    }

    #[getter]
    fn criteria(&self) -> Vec<(String, &'static str)> {
        self.0
            .criteria()
            .iter()
            .map(|c| (c.name.clone(), c.direction.as_str()))
            .collect()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.0.to_rows()
    }

    fn __len__(&self) -> usize {
        self.0.rows()
    }

    fn __repr__(&self) -> String {
        format!("DecisionMatrix({} alternatives x {} criteria)", self.0.rows(), self.0.cols())
    }
}

/// Alternatives ordered best first.
#[pyclass(module = "cotrank", frozen)]
struct RankedList(cotrank::RankedList);

#[pymethods]
impl RankedList {
    /// Row indices, best first.
    #[getter]
    fn order(&self) -> Vec<usize> {
        self.0.order().to_vec()
    }

    /// Identifiers, best first.
    #[getter]
    fn ids(&self) -> Vec<String> {
        self.0.ids().map(str::to_string).collect()
    }

    /// Scores in row order.
    #[getter]
    fn scores(&self) -> Vec<f64> {
        self.0.scores().to_vec()
    }

    #[getter]
    fn higher_is_better(&self) -> bool {
        self.0.polarity() == cotrank::ScorePolarity::HigherIsBetter
    }

    fn score(&self, id: &str) -> PyResult<f64> {
        self.0.score(id).ok_or_else(|| PyKeyError::new_err(id.to_string()))
    }

    fn top_k(&self, k: usize) -> PyResult<Vec<String>> {
        Ok(cotrank::select_top_k(&self.0, k).py_err()?.into_iter().map(str::to_string).collect())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// Pareto fronts of a matrix, front 1 first.
#[pyclass(module = "cotrank", frozen)]
struct ParetoFronts(cotrank::ParetoStratification);

#[pymethods]
impl ParetoFronts {
    #[getter]
    fn num_fronts(&self) -> usize {
        self.0.num_fronts()
    }

    /// Row indices per front.
    #[getter]
    fn fronts(&self) -> Vec<Vec<usize>> {
        self.0.fronts().to_vec()
    }

    /// Identifiers in the given 1-based front.
    fn front(&self, index: usize) -> PyResult<Vec<String>> {
        self.0
            .front_ids(index)
            .map(|ids| ids.into_iter().map(str::to_string).collect())
            .ok_or_else(|| PyValueError::new_err(format!("no front {index}")))
    }

    /// 1-based front index of every alternative, keyed by identifier.
    fn front_index(&self) -> std::collections::HashMap<String, usize> {
        self.0.front_index().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("ParetoFronts({} fronts)", self.0.num_fronts())
    }
}

/// Ranks `matrix` with "saw", "topsis" or "vikor". Weights default to equal.
#[pyfunction]
#[pyo3(signature = (matrix, algorithm, weights=None, vikor_v=0.5))]
fn rank(matrix: &DecisionMatrix, algorithm: &str, weights: Option<Vec<f64>>, vikor_v: f64) -> PyResult<RankedList> {
    let algorithm: Algorithm = parse(algorithm)?;
    let w = match weights {
        Some(w) => WeightVector::new(w),
        None => WeightVector::uniform(matrix.0.cols()),
    }
    .py_err()?;
    let params = VikorParams::new(vikor_v).py_err()?;
    algorithm.rank(&matrix.0, &w, params).py_err().map(RankedList)
}

#[pyfunction]
fn pareto_fronts(matrix: &DecisionMatrix) -> ParetoFronts {
    ParetoFronts(cotrank::pareto_fronts(&matrix.0))
}

/// Quadratic reference stratification, limited to small matrices.
#[pyfunction]
fn brute_force_fronts(matrix: &DecisionMatrix) -> PyResult<ParetoFronts> {
    cotrank::brute_force_fronts(&matrix.0).py_err().map(ParetoFronts)
}

/// Per-front share of each front captured by `selected` identifiers, as
/// (front_index, front_size, selected_in_front, onvgr) tuples.
#[pyfunction]
fn onvgr(selected: Vec<String>, fronts: &ParetoFronts) -> PyResult<Vec<(usize, usize, usize, f64)>> {
    let report = cotrank::onvgr_per_front(selected.iter().map(String::as_str), &fronts.0).py_err()?;
    Ok(report
        .per_front
        .iter()
        .map(|f| (f.front_index, f.front_size, f.selected_in_front, f.onvgr))
        .collect())
}

/// Boxplot statistics of a sample.
#[pyfunction]
fn summarize<'py>(py: Python<'py>, samples: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let s = cotrank::summarize(&samples).py_err()?;
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    for (k, v) in [
        ("mean", s.mean),
        ("median", s.median),
        ("q1", s.q1),
        ("q3", s.q3),
        ("whisker_low", s.whisker_low),
        ("whisker_high", s.whisker_high),
        ("min", s.min),
        ("max", s.max),
    ] {
        d.set_item(k, v)?;
    }
    d.set_item("outlier_count", s.outlier_count)?;
    Ok(d)
}

/// A list of sensor descriptions.
#[pyclass(module = "cotrank", frozen)]
struct Catalog(Vec<SensorDescription>);

#[pymethods]
impl Catalog {
    #[staticmethod]
    fn generate(count: usize, seed: u64) -> PyResult<Self> {
        cat::generate_catalog(&cotrank::CatalogSpec::new(count, seed)).py_err().map(Self)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        cat::load_catalog(path).py_err().map(Self)
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        cat::save_catalog(&self.0, path).py_err()
    }

    #[getter]
    fn ids(&self) -> Vec<String> {
        self.0.iter().map(|s| s.id.clone()).collect()
    }

    /// Values of one sensor field, in catalog order.
    fn column(&self, field: &str) -> PyResult<Vec<f64>> {
        let f: cotrank::SensorField = parse(field)?;
        Ok(self.0.iter().map(|s| f.value(s)).collect())
    }

    /// Decision matrix over the named fields; directions are fixed per field.
    fn matrix(&self, criteria: Vec<String>) -> PyResult<DecisionMatrix> {
        let specs = cat::criteria_for(&criteria).py_err()?;
        cat::catalog_to_matrix(&self.0, &specs).py_err().map(DecisionMatrix)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

fn record_dict<'py>(py: Python<'py>, r: &ResultRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("algorithm", r.algorithm.as_str())?;
    d.set_item("n_criteria", r.n_criteria)?;
    d.set_item("k_selected", r.k_selected)?;
    d.set_item("replication", r.replication)?;
    d.set_item("weight_vector", r.weight_vector.clone())?;
    d.set_item("front_index", r.front_index)?;
    d.set_item("front_size", r.front_size)?;
    d.set_item("selected_in_front", r.selected_in_front)?;
    d.set_item("onvgr", r.onvgr)?;
    Ok(d)
}

/// A seeded experiment plan. The default is the desk-scale plan.
#[pyclass(module = "cotrank")]
struct ExperimentPlan(exp::ExperimentPlan);

#[pymethods]
impl ExperimentPlan {
    #[new]
    fn new() -> Self {
        Self(exp::ExperimentPlan::default())
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        exp::ExperimentPlan::from_toml(text).py_err().map(Self)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        exp::ExperimentPlan::load(path).py_err().map(Self)
    }

    fn to_toml(&self) -> PyResult<String> {
        self.0.to_toml().py_err()
    }

    #[getter]
    fn master_seed(&self) -> u64 {
        self.0.master_seed
    }

    #[setter]
    fn set_master_seed(&mut self, seed: u64) {
        self.0.master_seed = seed;
    }

    #[getter]
    fn replications(&self) -> usize {
        self.0.replications
    }

    #[setter]
    fn set_replications(&mut self, n: usize) {
        self.0.replications = n;
    }

    /// Replaces the catalog with a generated one of `count` sensors.
    fn generate_catalog(&mut self, count: usize, seed: u64) {
        self.0.catalog = CatalogSource::Generate(cotrank::CatalogSpec::new(count, seed));
    }

    fn catalog_file(&mut self, path: PathBuf) {
        self.0.catalog = CatalogSource::File { path };
    }

    fn cells(&self) -> usize {
        self.0.cells()
    }

    /// Runs the plan and returns one dict per record. With `out_dir`, also
    /// writes results.csv and plan.resolved.toml there.
    #[pyo3(signature = (out_dir=None))]
    fn run<'py>(&self, py: Python<'py>, out_dir: Option<PathBuf>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.0.validate().py_err()?;
        let records = exp::run_experiment(&self.0).py_err()?;
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join("plan.resolved.toml"), self.to_toml()?)?;
            exp::emit_results(&records, dir.join("results.csv"), None).py_err()?;
        }
        records.iter().map(|r| record_dict(py, r)).collect()
    }
}

#[pymodule]
#[pyo3(name = "cotrank")]
fn cotrank_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DecisionMatrix>()?;
    m.add_class::<RankedList>()?;
    m.add_class::<ParetoFronts>()?;
    m.add_class::<Catalog>()?;
    m.add_class::<ExperimentPlan>()?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_fronts, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_fronts, m)?)?;
    m.add_function(wrap_pyfunction!(onvgr, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add("RESULTS_HEADER", exp::RESULTS_HEADER.join(","))?;
    Ok(())
}
