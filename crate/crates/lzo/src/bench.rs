//! Benchmark harness: repeated-trial selection on benchmark datasets
//! with accuracy/time/count aggregation and bound diagnostics.
//!
//! A run is fully determined by its config: every trial derives its
//! seeds from (master seed, trial index), trials may execute in
//! parallel, and the deterministic table file `results.csv` is byte
//! identical across reruns. Wall-clock statistics live in
//! `results.json` and `trials.jsonl` only.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{label_invariant_mixup, AugmentedSet, MixupConfig};
use crate::data::{load_csv, load_libsvm, minmax_scale, split_holdout_indices, Dataset};
use crate::divergence::{histogram_js_estimate, linear_vc_dimension, BoundInputs, BoundReport};
use crate::error::{Error, Result};
use crate::models::{empirical_risk, LearnerSpec, LossSpec, DEFAULT_SVM_EPOCHS};
use crate::seeding::derive_seed;
use crate::select::{
    holdout_select, kfold_cv_select, leave_p_out_select, lzo_select, monte_carlo_cv_select,
    ConfigGrid, SelectionReport,
};

/// Input file format for datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    #[default]
    Libsvm,
    Csv,
}

/// One selection method with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MethodSpec {
    Lzo {
        #[serde(default = "default_m_ratio")]
        m_ratio: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Kfold {
        #[serde(default = "default_k")]
        k: usize,
    },
    Holdout {
        #[serde(default = "default_val_fraction")]
        val_fraction: f64,
    },
    Mccv {
        #[serde(default = "default_repeats")]
        repeats: usize,
        #[serde(default = "default_val_fraction")]
        val_fraction: f64,
    },
    Lpo {
        #[serde(default = "default_p")]
        p: usize,
    },
}

fn default_m_ratio() -> f64 {
    10.0
}
fn default_alpha() -> f64 {
    1.0
}
fn default_k() -> usize {
    10
}
fn default_val_fraction() -> f64 {
    0.3
}
fn default_repeats() -> usize {
    10
}
fn default_p() -> usize {
    1
}

impl MethodSpec {
    /// Label used in output tables, e.g. `lzo(m=10n)` or `kfold(K=10)`.
    pub fn label(&self) -> String {
        match self {
            MethodSpec::Lzo { m_ratio, .. } => {
                if (m_ratio - m_ratio.round()).abs() < 1e-12 {
                    format!("lzo(m={}n)", *m_ratio as i64)
                } else {
                    format!("lzo(m={m_ratio}n)")
                }
            }
            MethodSpec::Kfold { k } => format!("kfold(K={k})"),
            MethodSpec::Holdout { val_fraction } => format!("holdout(f={val_fraction})"),
            MethodSpec::Mccv { repeats, val_fraction } => {
                format!("mccv(R={repeats},f={val_fraction})")
            }
            MethodSpec::Lpo { p } => format!("lpo(p={p})"),
        }
    }
}

/// Everything a benchmark run needs; a config file fully determines
/// every number in the deterministic outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data: PathBuf,
    #[serde(default)]
    pub format: DataFormat,
    #[serde(default)]
    pub label_column: usize,
    #[serde(default)]
    pub has_header: bool,
    #[serde(rename = "method", default)]
    pub methods: Vec<MethodSpec>,
    #[serde(default = "default_grid")]
    pub grid: String,
    /// Epoch budget applied to every SVM candidate in the grid.
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub jobs: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_grid() -> String {
    "svm:C=2^-5..2^5".to_string()
}
fn default_epochs() -> usize {
    DEFAULT_SVM_EPOCHS
}
fn default_trials() -> usize {
    20
}
fn default_test_fraction() -> f64 {
    0.3
}
fn default_seed() -> u64 {
    42
}
fn default_out() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    /// Parse a TOML config file (flat keys plus `[[method]]` sections).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidFraction(self.test_fraction));
        }
        if self.epochs < 1 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        let mut labels: Vec<String> = self.methods.iter().map(|m| m.label()).collect();
        labels.sort();
        labels.dedup();
        if labels.len() != self.methods.len() {
            return Err(Error::Config("duplicate method entries in config".into()));
        }
        self.expand_grid()?;
        Ok(())
    }

    /// The candidate grid with this config's epoch budget applied.
    pub fn expand_grid(&self) -> Result<ConfigGrid> {
        let grid = expand_grid(&self.grid)?;
        ConfigGrid::new(
            grid.specs
                .into_iter()
                .map(|spec| match spec {
                    LearnerSpec::LinearSvm { c, .. } => {
                        LearnerSpec::LinearSvm { c, epochs: self.epochs }
                    }
                    other => other,
                })
                .collect(),
        )
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        match self.format {
            DataFormat::Libsvm => load_libsvm(&self.data),
            DataFormat::Csv => load_csv(&self.data, self.label_column, self.has_header),
        }
    }
}

/// Expand a grid expression into an ordered candidate grid.
///
/// Accepted forms: `svm:C=2^<lo>..2^<hi>` (integer exponents, ascending)
/// or an explicit list `svm:C=v1,v2,...`.
pub fn expand_grid(expr: &str) -> Result<ConfigGrid> {
    let prefix = "svm:C=";
    let rest = expr.strip_prefix(prefix).ok_or_else(|| Error::GridParse {
        position: 0,
        message: format!("expected expression starting with `{prefix}`"),
    })?;
    let base = prefix.len();
    if rest.is_empty() {
        return Err(Error::GridParse { position: base, message: "empty value list".into() });
    }

    let mut values = Vec::new();
    if let Some((lo_part, hi_part)) = rest.split_once("..") {
        let parse_power = |token: &str, position: usize| -> Result<i32> {
            let exponent = token.strip_prefix("2^").ok_or_else(|| Error::GridParse {
                position,
                message: format!("expected `2^<exp>`, got `{token}`"),
            })?;
            exponent.parse::<i32>().map_err(|_| Error::GridParse {
                position: position + 2,
                message: format!("invalid exponent `{exponent}`"),
            })
        };
        let lo = parse_power(lo_part, base)?;
        let hi = parse_power(hi_part, base + lo_part.len() + 2)?;
        if lo > hi {
            return Err(Error::GridParse {
                position: base,
                message: format!("range is descending: 2^{lo} > 2^{hi}"),
            });
        }
        for e in lo..=hi {
            values.push(2f64.powi(e));
        }
    } else {
        let mut position = base;
        for token in rest.split(',') {
            let value: f64 = token.trim().parse().map_err(|_| Error::GridParse {
                position,
                message: format!("invalid C value `{token}`"),
            })?;
            if !(value > 0.0) {
                return Err(Error::GridParse {
                    position,
                    message: format!("C must be > 0, got {value}"),
                });
            }
            values.push(value);
            position += token.len() + 1;
        }
    }

    ConfigGrid::new(
        values
            .into_iter()
            .map(|c| LearnerSpec::LinearSvm { c, epochs: DEFAULT_SVM_EPOCHS })
            .collect(),
    )
}

/// Aggregated outcome of one (dataset, method) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub method: String,
    pub mean_test_accuracy: f64,
    pub std_test_accuracy: f64,
    pub mean_wall_time: f64,
    pub std_wall_time: f64,
    pub mean_models_trained: f64,
    pub trials: usize,
}

/// Raw audit record for one method inside one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialMethodRecord {
    pub method: String,
    pub test_accuracy: f64,
    pub report: SelectionReport,
}

/// Raw audit record for one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub methods: Vec<TrialMethodRecord>,
}

/// Everything a run produced, before and after aggregation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub trial_records: Vec<TrialRecord>,
    pub skipped_trials: usize,
}

const TAG_TRIAL_SPLIT: u64 = 0x6265_6e63;

fn run_one_trial(
    data: &Dataset,
    cfg: &ExperimentConfig,
    grid: &ConfigGrid,
    trial: usize,
) -> Result<TrialRecord> {
    let trial_seed = derive_seed(cfg.seed, trial as u64);
    let (train_idx, test_idx) =
        split_holdout_indices(data, cfg.test_fraction, derive_seed(trial_seed, TAG_TRIAL_SPLIT))?;
    let train_raw = data.subset(&train_idx)?;
    let test_raw = data.subset(&test_idx)?;
    let (train_data, mut scaled_others, _) = minmax_scale(&train_raw, &[&test_raw])?;
    let test_data = scaled_others.pop().expect("one scaled test set");
    let test_labeled = test_data.labeled_subset()?;

    let mut methods = Vec::with_capacity(cfg.methods.len());
    for (mi, method) in cfg.methods.iter().enumerate() {
        let method_seed = derive_seed(trial_seed, 1 + mi as u64);
        let (model, report) = match method {
            MethodSpec::Lzo { m_ratio, alpha } => {
                let m = ((train_data.n() as f64 * m_ratio).round() as usize).max(1);
                let mixup = MixupConfig::new(*alpha, m, method_seed)?;
                lzo_select(&train_data, grid, &mixup, LossSpec::ZeroOne)?
            }
            MethodSpec::Kfold { k } => {
                kfold_cv_select(&train_data, grid, *k, method_seed, LossSpec::ZeroOne, true)?
            }
            MethodSpec::Holdout { val_fraction } => {
                holdout_select(&train_data, grid, *val_fraction, method_seed, LossSpec::ZeroOne, true)?
            }
            MethodSpec::Mccv { repeats, val_fraction } => monte_carlo_cv_select(
                &train_data,
                grid,
                *repeats,
                *val_fraction,
                method_seed,
                LossSpec::ZeroOne,
                true,
            )?,
            MethodSpec::Lpo { p } => {
                leave_p_out_select(&train_data, grid, *p, LossSpec::ZeroOne, true)?
            }
        };
        let risk = empirical_risk(&model, &test_labeled, LossSpec::ZeroOne)?;
        methods.push(TrialMethodRecord {
            method: method.label(),
            test_accuracy: 1.0 - risk,
            report,
        });
    }

    Ok(TrialRecord { trial, seed: trial_seed, train_indices: train_idx, test_indices: test_idx, methods })
}

fn population_std(values: &[f64], mean: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64).sqrt()
}

fn aggregate(
    dataset: &str,
    methods: &[MethodSpec],
    trial_records: &[TrialRecord],
) -> Vec<ResultRow> {
    methods
        .iter()
        .map(|method| {
            let label = method.label();
            let accuracies: Vec<f64> = trial_records
                .iter()
                .flat_map(|t| t.methods.iter().filter(|m| m.method == label))
                .map(|m| m.test_accuracy)
                .collect();
            let times: Vec<f64> = trial_records
                .iter()
                .flat_map(|t| t.methods.iter().filter(|m| m.method == label))
                .map(|m| m.report.wall_time_seconds)
                .collect();
            let counts: Vec<f64> = trial_records
                .iter()
                .flat_map(|t| t.methods.iter().filter(|m| m.method == label))
                .map(|m| m.report.models_trained as f64)
                .collect();
            let n = accuracies.len().max(1) as f64;
            let mean_acc = accuracies.iter().sum::<f64>() / n;
            let mean_time = times.iter().sum::<f64>() / n;
            let mean_count = counts.iter().sum::<f64>() / n;
            ResultRow {
                dataset: dataset.to_string(),
                method: label,
                mean_test_accuracy: mean_acc,
                std_test_accuracy: population_std(&accuracies, mean_acc),
                mean_wall_time: mean_time,
                std_wall_time: population_std(&times, mean_time),
                mean_models_trained: mean_count,
                trials: accuracies.len(),
            }
        })
        .collect()
}

/// Run the full experiment: per trial a stratified test split, min-max
/// scaling fit on the train side, every configured method on the train
/// side, accuracy of each returned model on the untouched test side.
/// Writes `results.csv`, `results.json` and `trials.jsonl` under
/// `cfg.out` and returns the aggregated rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let data = cfg.load_dataset()?;
    let grid = cfg.expand_grid()?;

    let run = || -> Vec<(usize, Result<TrialRecord>)> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| (t, run_one_trial(&data, cfg, &grid, t)))
            .collect()
    };
    let outcomes = if cfg.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(run)
    } else {
        run()
    };

    let mut trial_records = Vec::with_capacity(cfg.trials);
    let mut skipped_trials = 0usize;
    for (t, outcome) in outcomes {
        match outcome {
            Ok(record) => trial_records.push(record),
            Err(e) => {
                skipped_trials += 1;
                log::warn!("trial {t} skipped: {e}");
            }
        }
    }
    if trial_records.is_empty() {
        return Err(Error::Config("every trial failed".into()));
    }

    let rows = aggregate(&data.name, &cfg.methods, &trial_records);
    let output = ExperimentOutput { rows, trial_records, skipped_trials };
    write_outputs(cfg, &output)?;
    Ok(output)
}

/// Render the deterministic table file. Wall-clock columns are
/// deliberately excluded so reruns are byte identical.
pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(
        "dataset,method,mean_test_accuracy,std_test_accuracy,mean_models_trained,trials\n",
    );
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.dataset,
            row.method,
            row.mean_test_accuracy,
            row.std_test_accuracy,
            row.mean_models_trained,
            row.trials
        )
        .expect("string write");
    }
    out
}

fn write_outputs(cfg: &ExperimentConfig, output: &ExperimentOutput) -> Result<()> {
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("results.csv"), results_csv(&output.rows))?;

    // timing statistics are reported at millisecond resolution
    let rounded_rows: Vec<ResultRow> = output
        .rows
        .iter()
        .map(|r| ResultRow {
            mean_wall_time: (r.mean_wall_time * 1000.0).round() / 1000.0,
            std_wall_time: (r.std_wall_time * 1000.0).round() / 1000.0,
            ..r.clone()
        })
        .collect();
    let json = serde_json::json!({
        "rows": rounded_rows,
        "skipped_trials": output.skipped_trials,
    });
    fs::write(
        cfg.out.join("results.json"),
        serde_json::to_string_pretty(&json).map_err(|e| Error::Config(e.to_string()))?,
    )?;

    let mut lines = String::new();
    for record in &output.trial_records {
        let line =
            serde_json::to_string(record).map_err(|e| Error::Config(e.to_string()))?;
        lines.push_str(&line);
        lines.push('\n');
    }
    fs::write(cfg.out.join("trials.jsonl"), lines)?;
    Ok(())
}

/// Bound diagnostic document; the divergence term is the histogram
/// heuristic, flagged as such.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDocument {
    #[serde(flatten)]
    pub report: BoundReport,
    pub heuristic_divergence: bool,
    pub bins: usize,
}

impl BoundDocument {
    /// Parse and validate a serialized document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BoundDocument =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        BoundInputs::new(
            self.report.b,
            self.report.m,
            self.report.v,
            self.report.delta,
            self.report.divergence_term,
        )?;
        if self.bins < 2 {
            return Err(Error::Config("bins must be >= 2".into()));
        }
        if !(self.report.bound >= 0.0) {
            return Err(Error::Config("bound must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Evaluate the estimation-bias bound for an augmented validation set,
/// using the product-marginal histogram heuristic for the divergence
/// term (hence `heuristic_divergence: true` in the document).
pub fn emit_bound_report(
    data: &Dataset,
    validation: &AugmentedSet,
    model_dim: usize,
    m: usize,
    delta: f64,
    bins: usize,
) -> Result<BoundDocument> {
    let divergence = histogram_js_estimate(data, &validation.data, bins)?;
    let inputs = BoundInputs::new(
        LossSpec::ZeroOne.interval(),
        m,
        linear_vc_dimension(model_dim),
        delta,
        divergence,
    )?;
    let document = BoundDocument {
        report: BoundReport::theorem1(&inputs)?,
        heuristic_divergence: true,
        bins,
    };
    document.validate()?;
    Ok(document)
}

/// Build the auxiliary set used by the `bound` and `augment` commands.
pub fn augment_for_ratio(data: &Dataset, m_ratio: f64, alpha: f64, seed: u64) -> Result<AugmentedSet> {
    let m = ((data.n() as f64 * m_ratio).round() as usize).max(1);
    let mixup = MixupConfig::new(alpha, m, seed)?;
    label_invariant_mixup(data, &mixup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Sample;

    #[test]
    fn grid_expands_the_standard_range() {
        let grid = expand_grid("svm:C=2^-5..2^5").unwrap();
        assert_eq!(grid.len(), 11);
        match (&grid.specs[0], &grid.specs[10]) {
            (LearnerSpec::LinearSvm { c: first, .. }, LearnerSpec::LinearSvm { c: last, .. }) => {
                assert_eq!(*first, 0.03125);
                assert_eq!(*last, 32.0);
            }
            _ => panic!("grid is not svm"),
        }
    }

    #[test]
    fn grid_accepts_explicit_lists() {
        let grid = expand_grid("svm:C=1").unwrap();
        assert_eq!(grid.len(), 1);
        let grid = expand_grid("svm:C=0.5,2,8").unwrap();
        assert_eq!(grid.len(), 3);
    }

    #[test]
    fn grid_rejects_descending_and_garbage() {
        let err = expand_grid("svm:C=2^3..2^1").unwrap_err();
        assert!(err.to_string().contains("descending"), "{err}");
        let err = expand_grid("rbf:C=1").unwrap_err();
        match err {
            Error::GridParse { position, .. } => assert_eq!(position, 0),
            other => panic!("unexpected: {other}"),
        }
        let err = expand_grid("svm:C=1,x").unwrap_err();
        match err {
            Error::GridParse { position, .. } => assert_eq!(position, 8),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn config_parses_toml_with_method_sections() {
        let text = r#"
data = "data/iris.libsvm"
grid = "svm:C=2^-2..2^2"
trials = 3
seed = 7

[[method]]
kind = "lzo"
m_ratio = 10.0

[[method]]
kind = "kfold"
k = 10
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.trials, 3);
        assert_eq!(cfg.methods.len(), 2);
        assert_eq!(cfg.methods[0].label(), "lzo(m=10n)");
        assert_eq!(cfg.methods[1].label(), "kfold(K=10)");
        cfg.validate().unwrap();
    }

    #[test]
    fn config_rejects_empty_methods() {
        let cfg = ExperimentConfig::from_toml("data = \"x\"").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_rejects_duplicate_methods() {
        let text = r#"
data = "x"

[[method]]
kind = "kfold"
k = 10

[[method]]
kind = "kfold"
k = 10
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    fn small_dataset() -> Dataset {
        let mut samples = Vec::new();
        for i in 0..12 {
            samples.push(Sample {
                features: vec![i as f64 * 0.1, 1.0 - i as f64 * 0.05],
                label: Some(if i < 6 { 0 } else { 1 }),
            });
        }
        Dataset::new("small", samples, 2, 2).unwrap()
    }

    #[test]
    fn bound_document_round_trips_and_validates() {
        let data = small_dataset();
        let validation = augment_for_ratio(&data, 2.0, 1.0, 3).unwrap();
        let doc = emit_bound_report(&data, &validation, data.d, validation.data.n(), 0.05, 4)
            .unwrap();
        assert!(doc.heuristic_divergence);
        assert_eq!(doc.report.v, 3);
        assert_eq!(doc.report.b, 1.0);
        let text = serde_json::to_string(&doc).unwrap();
        let back = BoundDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn bound_decreases_with_more_validation_samples() {
        let data = small_dataset();
        let small = augment_for_ratio(&data, 1.0, 1.0, 3).unwrap();
        let large = augment_for_ratio(&data, 10.0, 1.0, 3).unwrap();
        let doc_small =
            emit_bound_report(&data, &small, data.d, small.data.n(), 0.05, 4).unwrap();
        // fixed divergence: reuse the small-set heuristic value
        let inputs = BoundInputs::new(1.0, large.data.n(), 3, 0.05, doc_small.report.divergence_term)
            .unwrap();
        let bound_large = crate::divergence::theorem1_bound(&inputs).unwrap();
        assert!(bound_large < doc_small.report.bound);
    }

    #[test]
    fn identical_distributions_make_the_bound_mostly_vc() {
        let data = small_dataset();
        // validation sampled identically: just clone the data
        let validation = AugmentedSet { data: data.clone(), provenance: Vec::new() };
        let doc = emit_bound_report(&data, &validation, data.d, data.n(), 0.1, 4).unwrap();
        assert!(doc.report.divergence_term.abs() < 1e-12);
        let vc_only = BoundInputs::new(1.0, data.n(), 3, 0.1, 0.0).unwrap();
        let expected = crate::divergence::theorem1_bound(&vc_only).unwrap();
        assert!((doc.report.bound - expected).abs() < 1e-12);
    }

    #[test]
    fn results_csv_has_no_timing_columns() {
        let rows = vec![ResultRow {
            dataset: "toy".into(),
            method: "lzo(m=10n)".into(),
            mean_test_accuracy: 0.9,
            std_test_accuracy: 0.01,
            mean_wall_time: 0.5,
            std_wall_time: 0.1,
            mean_models_trained: 11.0,
            trials: 20,
        }];
        let text = results_csv(&rows);
        assert!(!text.contains("wall"), "{text}");
        assert!(text.contains("toy,lzo(m=10n),0.9,0.01,11,20"), "{text}");
    }
}
