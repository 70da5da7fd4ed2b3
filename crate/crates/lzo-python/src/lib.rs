//! Python bindings for the leave-zero-out model-selection toolkit.
//!
//! Exposes the dataset model, label-invariant mix-up, the divergence
//! and bias-bound machinery, the selection strategies, and the
//! benchmark runner as a `lzopy` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use lzo::augment::{self, MixupConfig};
use lzo::bench::{self, ExperimentConfig};
use lzo::data::{self, Sample};
use lzo::divergence::{self, BoundInputs, DiscreteDistribution, JointDiscrete};
use lzo::models::{self, LearnerSpec, LossSpec};
use lzo::select::{self, ConfigGrid, SelectionReport};

fn to_py_err(e: lzo::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A dense labeled (or partially labeled) dataset.
#[pyclass(name = "Dataset", from_py_object)]
#[derive(Clone)]
struct PyDataset {
    inner: data::Dataset,
}

#[pymethods]
impl PyDataset {
    /// Build a dataset from feature rows and optional labels.
    #[new]
    #[pyo3(signature = (features, labels, k=None, name="dataset"))]
    fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<Option<usize>>,
        k: Option<usize>,
        name: &str,
    ) -> PyResult<Self> {
        if features.len() != labels.len() {
            return Err(PyValueError::new_err("features and labels must have equal length"));
        }
        let d = features.first().map(|r| r.len()).unwrap_or(0);
        let k = k.unwrap_or_else(|| {
            labels.iter().flatten().max().map(|&m| m + 1).unwrap_or(1)
        });
        let samples = features
            .into_iter()
            .zip(labels)
            .map(|(features, label)| Sample { features, label })
            .collect();
        Ok(Self { inner: data::Dataset::new(name, samples, d, k).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn load_libsvm(path: &str) -> PyResult<Self> {
        Ok(Self { inner: data::load_libsvm(path).map_err(to_py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (path, label_column=0, has_header=false))]
    fn load_csv(path: &str, label_column: usize, has_header: bool) -> PyResult<Self> {
        Ok(Self { inner: data::load_csv(path, label_column, has_header).map_err(to_py_err)? })
    }

    fn save_libsvm(&self, path: &str) -> PyResult<()> {
        data::save_libsvm(&self.inner, path).map_err(to_py_err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    fn fully_labeled(&self) -> bool {
        self.inner.fully_labeled()
    }

    fn features(&self, i: usize) -> PyResult<Vec<f64>> {
        self.inner
            .samples
            .get(i)
            .map(|s| s.features.clone())
            .ok_or_else(|| PyValueError::new_err(format!("index {i} out of range")))
    }

    fn label(&self, i: usize) -> PyResult<Option<usize>> {
        self.inner
            .samples
            .get(i)
            .map(|s| s.label)
            .ok_or_else(|| PyValueError::new_err(format!("index {i} out of range")))
    }

    fn labels(&self) -> Vec<Option<usize>> {
        self.inner.samples.iter().map(|s| s.label).collect()
    }

    fn class_counts(&self) -> Vec<usize> {
        self.inner.class_counts()
    }

    fn subset(&self, indices: Vec<usize>) -> PyResult<Self> {
        for &i in &indices {
            if i >= self.inner.n() {
                return Err(PyValueError::new_err(format!("index {i} out of range")));
            }
        }
        Ok(Self { inner: self.inner.subset(&indices).map_err(to_py_err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(name={:?}, n={}, d={}, k={})",
            self.inner.name,
            self.inner.n(),
            self.inner.d,
            self.inner.k
        )
    }
}

/// A trained hypothesis with a total predict function.
#[pyclass(name = "TrainedModel")]
struct PyTrainedModel {
    inner: models::TrainedModel,
}

#[pymethods]
impl PyTrainedModel {
    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<usize> {
        self.inner.predict(&x).map_err(to_py_err)
    }

    fn predict_many(&self, rows: Vec<Vec<f64>>) -> PyResult<Vec<usize>> {
        rows.iter().map(|x| self.inner.predict(x).map_err(to_py_err)).collect()
    }

    fn empirical_risk(&self, dataset: &PyDataset) -> PyResult<f64> {
        models::empirical_risk(&self.inner, &dataset.inner, LossSpec::ZeroOne).map_err(to_py_err)
    }

    /// Versioned JSON document with the flattened parameters.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_document())
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        let kind = match self.inner.params {
            models::ModelParams::LinearSvm { .. } => "linear_svm",
            models::ModelParams::Majority { .. } => "majority",
            models::ModelParams::NearestNeighbor { .. } => "nearest_neighbor",
        };
        format!("TrainedModel(kind={kind}, d={}, k={})", self.inner.d, self.inner.k)
    }
}

fn spec_from_kind(kind: &str, c: f64, epochs: usize) -> PyResult<LearnerSpec> {
    match kind {
        "linear_svm" => Ok(LearnerSpec::LinearSvm { c, epochs }),
        "majority" => Ok(LearnerSpec::Majority),
        "nearest_neighbor" => Ok(LearnerSpec::NearestNeighbor),
        other => Err(PyValueError::new_err(format!("unknown learner kind `{other}`"))),
    }
}

fn report_to_dict<'py>(py: Python<'py>, report: &SelectionReport) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("method", &report.method)?;
    dict.set_item("dataset", &report.dataset)?;
    dict.set_item("seed", report.seed)?;
    dict.set_item("per_config_risk", &report.per_config_risk)?;
    dict.set_item("chosen_index", report.chosen_index)?;
    dict.set_item("chosen_spec", &report.chosen_spec)?;
    dict.set_item("models_trained", report.models_trained)?;
    dict.set_item("wall_time_seconds", report.wall_time_seconds)?;
    Ok(dict)
}

fn grid_from_expr(grid: &str, epochs: usize) -> PyResult<ConfigGrid> {
    let base = bench::expand_grid(grid).map_err(to_py_err)?;
    ConfigGrid::new(
        base.specs
            .into_iter()
            .map(|spec| match spec {
                LearnerSpec::LinearSvm { c, .. } => LearnerSpec::LinearSvm { c, epochs },
                other => other,
            })
            .collect(),
    )
    .map_err(to_py_err)
}

/// Train one learner. `kind` is linear_svm, majority or nearest_neighbor.
#[pyfunction]
#[pyo3(signature = (dataset, kind="linear_svm", c=1.0, epochs=50, seed=0))]
fn train(dataset: &PyDataset, kind: &str, c: f64, epochs: usize, seed: u64) -> PyResult<PyTrainedModel> {
    let spec = spec_from_kind(kind, c, epochs)?;
    Ok(PyTrainedModel { inner: models::train(&spec, &dataset.inner, seed).map_err(to_py_err)? })
}

/// Stratified holdout split into (train, test).
#[pyfunction]
fn split_holdout(dataset: &PyDataset, test_fraction: f64, seed: u64) -> PyResult<(PyDataset, PyDataset)> {
    let (train, test) = data::split_holdout(&dataset.inner, test_fraction, seed).map_err(to_py_err)?;
    Ok((PyDataset { inner: train }, PyDataset { inner: test }))
}

/// Deterministic stratified fold index lists.
#[pyfunction]
#[pyo3(signature = (n, k, seed, labels=None))]
fn kfold_indices(n: usize, k: usize, seed: u64, labels: Option<Vec<usize>>) -> PyResult<Vec<Vec<usize>>> {
    data::kfold_indices(n, k, seed, labels.as_deref()).map_err(to_py_err)
}

/// Min-max scale fitted on `train`, applied to `train` and `others`.
#[pyfunction]
#[pyo3(signature = (train, others=vec![]))]
fn minmax_scale(train: &PyDataset, others: Vec<PyDataset>) -> PyResult<(PyDataset, Vec<PyDataset>)> {
    let refs: Vec<&data::Dataset> = others.iter().map(|o| &o.inner).collect();
    let (scaled_train, scaled_others, _) = data::minmax_scale(&train.inner, &refs).map_err(to_py_err)?;
    Ok((
        PyDataset { inner: scaled_train },
        scaled_others.into_iter().map(|inner| PyDataset { inner }).collect(),
    ))
}

/// Empirical label marginal over the labeled samples.
#[pyfunction]
fn label_marginal(dataset: &PyDataset) -> PyResult<Vec<f64>> {
    Ok(data::label_marginal(&dataset.inner).map_err(to_py_err)?.probs().to_vec())
}

/// Source indices and mixing weight of one augmented sample.
type ProvenanceTriple = (usize, usize, f64);

/// Label-invariant mix-up: returns the augmented dataset and the
/// provenance triples (j, k, lambda).
#[pyfunction]
#[pyo3(signature = (dataset, m, alpha=1.0, seed=42))]
fn label_invariant_mixup(
    dataset: &PyDataset,
    m: usize,
    alpha: f64,
    seed: u64,
) -> PyResult<(PyDataset, Vec<ProvenanceTriple>)> {
    let cfg = MixupConfig::new(alpha, m, seed).map_err(to_py_err)?;
    let set = augment::label_invariant_mixup(&dataset.inner, &cfg).map_err(to_py_err)?;
    let provenance = set.provenance.iter().map(|p| (p.j, p.k, p.lambda)).collect();
    Ok((PyDataset { inner: set.data }, provenance))
}

/// Seeded Beta(alpha, alpha) draws.
#[pyfunction]
#[pyo3(signature = (alpha, n, seed=42))]
fn beta_samples(alpha: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    augment::beta_samples(alpha, n, seed).map_err(to_py_err)
}

/// Fill missing labels with the model's predictions.
#[pyfunction]
fn pseudo_label(model: &PyTrainedModel, dataset: &PyDataset) -> PyResult<PyDataset> {
    Ok(PyDataset { inner: augment::pseudo_label(&model.inner, &dataset.inner).map_err(to_py_err)? })
}

/// Kullback-Leibler divergence (natural log; may be inf).
#[pyfunction]
fn kl(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    let p = DiscreteDistribution::new(p).map_err(to_py_err)?;
    let q = DiscreteDistribution::new(q).map_err(to_py_err)?;
    divergence::kl(&p, &q).map_err(to_py_err)
}

/// Jensen-Shannon divergence (natural log, bounded by ln 2).
#[pyfunction]
fn js(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
    let p = DiscreteDistribution::new(p).map_err(to_py_err)?;
    let q = DiscreteDistribution::new(q).map_err(to_py_err)?;
    divergence::js(&p, &q).map_err(to_py_err)
}

/// Conditional decomposition of joint JS divergence: returns a dict
/// with `d`, `label_js` and `cond_term`.
#[pyfunction]
fn js_conditional_decomposition<'py>(
    py: Python<'py>,
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = JointDiscrete::new(p).map_err(to_py_err)?;
    let q = JointDiscrete::new(q).map_err(to_py_err)?;
    let dec = divergence::js_conditional_decomposition(&p, &q).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("d", dec.d)?;
    dict.set_item("label_js", dec.label_js)?;
    dict.set_item("cond_term", dec.cond_term)?;
    Ok(dict)
}

/// Estimation-bias bound with the divergence term read as joint JS.
#[pyfunction]
fn theorem1_bound(b: f64, m: usize, v: usize, delta: f64, divergence_term: f64) -> PyResult<f64> {
    let inputs = BoundInputs::new(b, m, v, delta, divergence_term).map_err(to_py_err)?;
    divergence::theorem1_bound(&inputs).map_err(to_py_err)
}

/// Decomposed estimation-bias bound (divergence term is D).
#[pyfunction]
fn corollary1_bound(b: f64, m: usize, v: usize, delta: f64, divergence_term: f64) -> PyResult<f64> {
    let inputs = BoundInputs::new(b, m, v, delta, divergence_term).map_err(to_py_err)?;
    divergence::corollary1_bound(&inputs).map_err(to_py_err)
}

/// VC dimension of linear separators in d dimensions.
#[pyfunction]
fn linear_vc_dimension(d: usize) -> usize {
    divergence::linear_vc_dimension(d)
}

/// Product-marginal histogram heuristic for continuous datasets.
#[pyfunction]
#[pyo3(signature = (a, b, bins=8))]
fn histogram_js_estimate(a: &PyDataset, b: &PyDataset, bins: usize) -> PyResult<f64> {
    divergence::histogram_js_estimate(&a.inner, &b.inner, bins).map_err(to_py_err)
}

/// Leave-zero-out selection over an SVM grid expression.
#[pyfunction]
#[pyo3(signature = (dataset, grid="svm:C=2^-5..2^5", m_ratio=10.0, alpha=1.0, seed=42, epochs=50))]
fn lzo_select<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    grid: &str,
    m_ratio: f64,
    alpha: f64,
    seed: u64,
    epochs: usize,
) -> PyResult<(PyTrainedModel, Bound<'py, PyDict>)> {
    let grid = grid_from_expr(grid, epochs)?;
    let m = ((dataset.inner.n() as f64 * m_ratio).round() as usize).max(1);
    let cfg = MixupConfig::new(alpha, m, seed).map_err(to_py_err)?;
    let (model, report) =
        select::lzo_select(&dataset.inner, &grid, &cfg, LossSpec::ZeroOne).map_err(to_py_err)?;
    Ok((PyTrainedModel { inner: model }, report_to_dict(py, &report)?))
}

/// K-fold cross-validation selection over an SVM grid expression.
#[pyfunction]
#[pyo3(signature = (dataset, grid="svm:C=2^-5..2^5", k=10, seed=42, refit=true, epochs=50))]
fn kfold_select<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    grid: &str,
    k: usize,
    seed: u64,
    refit: bool,
    epochs: usize,
) -> PyResult<(PyTrainedModel, Bound<'py, PyDict>)> {
    let grid = grid_from_expr(grid, epochs)?;
    let (model, report) =
        select::kfold_cv_select(&dataset.inner, &grid, k, seed, LossSpec::ZeroOne, refit)
            .map_err(to_py_err)?;
    Ok((PyTrainedModel { inner: model }, report_to_dict(py, &report)?))
}

/// Single stratified hold-out selection.
#[pyfunction]
#[pyo3(signature = (dataset, grid="svm:C=2^-5..2^5", val_fraction=0.3, seed=42, refit=true, epochs=50))]
fn holdout_select<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    grid: &str,
    val_fraction: f64,
    seed: u64,
    refit: bool,
    epochs: usize,
) -> PyResult<(PyTrainedModel, Bound<'py, PyDict>)> {
    let grid = grid_from_expr(grid, epochs)?;
    let (model, report) =
        select::holdout_select(&dataset.inner, &grid, val_fraction, seed, LossSpec::ZeroOne, refit)
            .map_err(to_py_err)?;
    Ok((PyTrainedModel { inner: model }, report_to_dict(py, &report)?))
}

/// Monte-Carlo cross-validation selection.
#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (dataset, grid="svm:C=2^-5..2^5", repeats=10, val_fraction=0.3, seed=42, refit=true, epochs=50))]
fn monte_carlo_select<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    grid: &str,
    repeats: usize,
    val_fraction: f64,
    seed: u64,
    refit: bool,
    epochs: usize,
) -> PyResult<(PyTrainedModel, Bound<'py, PyDict>)> {
    let grid = grid_from_expr(grid, epochs)?;
    let (model, report) = select::monte_carlo_cv_select(
        &dataset.inner,
        &grid,
        repeats,
        val_fraction,
        seed,
        LossSpec::ZeroOne,
        refit,
    )
    .map_err(to_py_err)?;
    Ok((PyTrainedModel { inner: model }, report_to_dict(py, &report)?))
}

/// Exhaustive leave-p-out selection (guarded).
#[pyfunction]
#[pyo3(signature = (dataset, grid="svm:C=2^-5..2^5", p=1, refit=true, epochs=50))]
fn leave_p_out_select<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    grid: &str,
    p: usize,
    refit: bool,
    epochs: usize,
) -> PyResult<(PyTrainedModel, Bound<'py, PyDict>)> {
    let grid = grid_from_expr(grid, epochs)?;
    let (model, report) =
        select::leave_p_out_select(&dataset.inner, &grid, p, LossSpec::ZeroOne, refit)
            .map_err(to_py_err)?;
    Ok((PyTrainedModel { inner: model }, report_to_dict(py, &report)?))
}

/// Expand a grid expression into the candidate descriptions.
#[pyfunction]
fn expand_grid(expr: &str) -> PyResult<Vec<String>> {
    Ok(bench::expand_grid(expr)
        .map_err(to_py_err)?
        .specs
        .iter()
        .map(|s| s.describe())
        .collect())
}

/// Run a benchmark experiment from a TOML config file. Returns the
/// aggregated rows; also writes results.csv/results.json/trials.jsonl.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config_path: &str) -> PyResult<Bound<'py, PyList>> {
    let cfg = ExperimentConfig::from_file(config_path).map_err(to_py_err)?;
    let output = bench::run_experiment(&cfg).map_err(to_py_err)?;
    let rows = PyList::empty(py);
    for row in &output.rows {
        let dict = PyDict::new(py);
        dict.set_item("dataset", &row.dataset)?;
        dict.set_item("method", &row.method)?;
        dict.set_item("mean_test_accuracy", row.mean_test_accuracy)?;
        dict.set_item("std_test_accuracy", row.std_test_accuracy)?;
        dict.set_item("mean_wall_time", row.mean_wall_time)?;
        dict.set_item("std_wall_time", row.std_wall_time)?;
        dict.set_item("mean_models_trained", row.mean_models_trained)?;
        dict.set_item("trials", row.trials)?;
        rows.append(dict)?;
    }
    Ok(rows)
}

#[pymodule]
fn lzopy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyTrainedModel>()?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(split_holdout, m)?)?;
    m.add_function(wrap_pyfunction!(kfold_indices, m)?)?;
    m.add_function(wrap_pyfunction!(minmax_scale, m)?)?;
    m.add_function(wrap_pyfunction!(label_marginal, m)?)?;
    m.add_function(wrap_pyfunction!(label_invariant_mixup, m)?)?;
    m.add_function(wrap_pyfunction!(beta_samples, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_label, m)?)?;
    m.add_function(wrap_pyfunction!(kl, m)?)?;
    m.add_function(wrap_pyfunction!(js, m)?)?;
    m.add_function(wrap_pyfunction!(js_conditional_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(corollary1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(linear_vc_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(histogram_js_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(lzo_select, m)?)?;
    m.add_function(wrap_pyfunction!(kfold_select, m)?)?;
    m.add_function(wrap_pyfunction!(holdout_select, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_select, m)?)?;
    m.add_function(wrap_pyfunction!(leave_p_out_select, m)?)?;
    m.add_function(wrap_pyfunction!(expand_grid, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
