//! Dataset model, ingestion, splitting, and label statistics.
//!
//! Datasets are dense and immutable after construction; loaders and
//! splitters are pure functions of (input, seed).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One observation: `d` real features and an optional class id.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    /// Class id in `0..k`, or `None` for an unlabeled sample.
    pub label: Option<usize>,
}

/// A dense labeled (or partially labeled) dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub samples: Vec<Sample>,
    /// Feature dimension shared by all samples.
    pub d: usize,
    /// Number of classes; labels lie in `0..k`.
    pub k: usize,
}

impl Dataset {
    /// Build a dataset, checking the shape invariants.
    pub fn new(name: impl Into<String>, samples: Vec<Sample>, d: usize, k: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if d == 0 {
            return Err(Error::InvalidParameter("feature dimension must be >= 1".into()));
        }
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: s.features.len() });
            }
            if s.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "sample {i} has a non-finite feature value"
                )));
            }
            if let Some(label) = s.label {
                if label >= k {
                    return Err(Error::InvalidParameter(format!(
                        "sample {i} has label {label} but k = {k}"
                    )));
                }
            }
        }
        Ok(Self { name: name.into(), samples, d, k })
    }

    /// Number of samples.
    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// True when every sample carries a label.
    pub fn fully_labeled(&self) -> bool {
        self.samples.iter().all(|s| s.label.is_some())
    }

    /// Indices of the labeled samples, in dataset order.
    pub fn labeled_indices(&self) -> Vec<usize> {
        self.samples
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.label.map(|_| i))
            .collect()
    }

    /// Per-class counts over the labeled samples.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.k];
        for s in &self.samples {
            if let Some(label) = s.label {
                counts[label] += 1;
            }
        }
        counts
    }

    /// New dataset holding clones of the samples at `indices`.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let samples = indices.iter().map(|&i| self.samples[i].clone()).collect();
        Dataset::new(self.name.clone(), samples, self.d, self.k)
    }

    /// The labeled samples only.
    pub fn labeled_subset(&self) -> Result<Dataset> {
        self.subset(&self.labeled_indices())
    }
}

/// Empirical distribution of labels over the labeled samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMarginal {
    probs: Vec<f64>,
}

impl LabelMarginal {
    /// Wrap a probability vector; must sum to 1 within 1e-12.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidParameter("negative probability".into()));
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "label marginal sums to {sum}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Empirical label marginal of `data` (labeled samples only).
pub fn label_marginal(data: &Dataset) -> Result<LabelMarginal> {
    let counts = data.class_counts();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::NoLabeledSamples);
    }
    LabelMarginal::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

// ─── LIBSVM format ───────────────────────────────────────────────────

/// Load a LIBSVM text file: `<label> <idx>:<val> ...` with 1-based
/// ascending indices. `d` is the maximum index seen; absent indices are
/// 0.0; labels are remapped to `0..k` in first-appearance order.
pub fn load_libsvm(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    let file = File::open(path)?;
    parse_libsvm(BufReader::new(file), &name)
}

/// Parse LIBSVM text from any buffered reader.
pub fn parse_libsvm(reader: impl BufRead, name: &str) -> Result<Dataset> {
    let mut rows: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
    let mut max_index = 0usize;

    for (line_idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_num = line_idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label = parts
            .next()
            .ok_or_else(|| Error::Parse { line: line_num, message: "missing label".into() })?
            .to_string();

        let mut pairs: Vec<(usize, f64)> = Vec::new();
        let mut prev_index = 0usize;
        for token in parts {
            let (idx_str, val_str) = token.split_once(':').ok_or_else(|| Error::Parse {
                line: line_num,
                message: format!("expected index:value, got `{token}`"),
            })?;
            let index: usize = idx_str.parse().map_err(|_| Error::Parse {
                line: line_num,
                message: format!("invalid index `{idx_str}`"),
            })?;
            if index == 0 {
                return Err(Error::Parse { line: line_num, message: "indices are 1-based".into() });
            }
            if index <= prev_index {
                return Err(Error::Parse {
                    line: line_num,
                    message: format!("indices must be ascending: {index} follows {prev_index}"),
                });
            }
            let value: f64 = val_str.parse().map_err(|_| Error::Parse {
                line: line_num,
                message: format!("invalid value `{val_str}`"),
            })?;
            prev_index = index;
            max_index = max_index.max(index);
            pairs.push((index, value));
        }
        rows.push((label, pairs));
    }

    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let d = max_index.max(1);

    let mut label_ids: HashMap<String, usize> = HashMap::new();
    let mut samples = Vec::with_capacity(rows.len());
    for (label, pairs) in rows {
        let next_id = label_ids.len();
        let id = *label_ids.entry(label).or_insert(next_id);
        let mut features = vec![0.0; d];
        for (index, value) in pairs {
            features[index - 1] = value;
        }
        samples.push(Sample { features, label: Some(id) });
    }
    let k = label_ids.len();
    Dataset::new(name, samples, d, k)
}

/// Write `data` as dense LIBSVM text (every index written, labels as
/// class ids). Feature values use shortest round-trip decimal text.
pub fn write_libsvm(data: &Dataset, mut w: impl Write) -> Result<()> {
    for (i, s) in data.samples.iter().enumerate() {
        let label = s.label.ok_or(Error::UnlabeledSample(i))?;
        let mut line = String::new();
        write!(line, "{label}").expect("string write");
        for (j, v) in s.features.iter().enumerate() {
            write!(line, " {}:{}", j + 1, v).expect("string write");
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Save `data` in LIBSVM format at `path`.
pub fn save_libsvm(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut file = File::create(path)?;
    write_libsvm(data, &mut file)
}

// ─── CSV format ──────────────────────────────────────────────────────

/// Load a CSV table: all columns numeric except the label column, which
/// may be any text. A literal `?` in the label cell marks an unlabeled
/// sample. `d` is the column count minus one.
pub fn load_csv(path: impl AsRef<Path>, label_column: usize, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    let file = File::open(path)?;
    parse_csv(file, label_column, has_header, &name)
}

/// Parse CSV from any reader.
pub fn parse_csv(reader: impl Read, label_column: usize, has_header: bool, name: &str) -> Result<Dataset> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut width: Option<usize> = None;
    let mut label_ids: HashMap<String, usize> = HashMap::new();
    let mut samples: Vec<Sample> = Vec::new();

    for record in csv_reader.records() {
        let record = record.map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
        let line_num = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(samples.len() + 1);
        let cols = record.len();
        match width {
            None => {
                if cols < 2 {
                    return Err(Error::Parse {
                        line: line_num,
                        message: "need at least one feature column".into(),
                    });
                }
                if label_column >= cols {
                    return Err(Error::Parse {
                        line: line_num,
                        message: format!("label column {label_column} out of range (0..{cols})"),
                    });
                }
                width = Some(cols);
            }
            Some(w) if w != cols => {
                return Err(Error::Parse { line: line_num, message: "ragged row".into() });
            }
            _ => {}
        }

        let mut features = Vec::with_capacity(cols - 1);
        let mut label: Option<usize> = None;
        for (c, cell) in record.iter().enumerate() {
            if c == label_column {
                if cell != "?" {
                    let next_id = label_ids.len();
                    label = Some(*label_ids.entry(cell.to_string()).or_insert(next_id));
                }
            } else {
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    line: line_num,
                    message: format!("non-numeric feature cell `{cell}`"),
                })?;
                features.push(v);
            }
        }
        samples.push(Sample { features, label });
    }

    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let d = width.unwrap() - 1;
    let k = label_ids.len();
    Dataset::new(name, samples, d, k.max(1))
}

/// Write `data` as CSV with the label in column 0 (`?` when missing).
pub fn write_csv(data: &Dataset, mut w: impl Write, header: bool) -> Result<()> {
    if header {
        let mut line = String::from("label");
        for j in 0..data.d {
            write!(line, ",x{}", j + 1).expect("string write");
        }
        writeln!(w, "{line}")?;
    }
    for s in &data.samples {
        let mut line = match s.label {
            Some(label) => label.to_string(),
            None => "?".to_string(),
        };
        for v in &s.features {
            write!(line, ",{v}").expect("string write");
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

// ─── Scaling ─────────────────────────────────────────────────────────

/// Per-feature affine map fitted on a training set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingParams {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl ScalingParams {
    /// Fit the per-feature min/max of `train`.
    pub fn fit(train: &Dataset) -> Result<Self> {
        if train.samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = train.d;
        let mut mins = vec![f64::INFINITY; d];
        let mut maxs = vec![f64::NEG_INFINITY; d];
        for s in &train.samples {
            for (j, &v) in s.features.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        Ok(Self { mins, maxs })
    }

    /// Map one vector; constant features go to 0.0, no clipping.
    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.mins.len() {
            return Err(Error::DimensionMismatch { expected: self.mins.len(), actual: x.len() });
        }
        Ok(x.iter()
            .enumerate()
            .map(|(j, &v)| {
                let range = self.maxs[j] - self.mins[j];
                if range == 0.0 {
                    0.0
                } else {
                    (v - self.mins[j]) / range
                }
            })
            .collect())
    }

    /// Map every sample of `data`.
    pub fn apply(&self, data: &Dataset) -> Result<Dataset> {
        let samples = data
            .samples
            .iter()
            .map(|s| {
                Ok(Sample { features: self.transform(&s.features)?, label: s.label })
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(data.name.clone(), samples, data.d, data.k)
    }
}

/// Fit min-max scaling on `train` (mapping its per-feature range to
/// [0,1]) and apply the same map to `train` and every dataset in
/// `others`. Values outside the training range extrapolate (no clipping).
pub fn minmax_scale(train: &Dataset, others: &[&Dataset]) -> Result<(Dataset, Vec<Dataset>, ScalingParams)> {
    let params = ScalingParams::fit(train)?;
    for other in others {
        if other.d != train.d {
            return Err(Error::DimensionMismatch { expected: train.d, actual: other.d });
        }
    }
    let scaled_train = params.apply(train)?;
    let scaled_others = others.iter().map(|o| params.apply(o)).collect::<Result<Vec<_>>>()?;
    Ok((scaled_train, scaled_others, params))
}

// ─── Splitting ───────────────────────────────────────────────────────

/// Largest-remainder apportionment: integer counts per stratum summing
/// to `total`, each within 1 of its real-valued quota. Ties go to the
/// lower stratum index.
fn largest_remainder(quotas: &[f64], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = quotas.iter().map(|&q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut leftover = total.saturating_sub(assigned);
    let mut order: Vec<usize> = (0..quotas.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in &order {
        if leftover == 0 {
            break;
        }
        counts[i] += 1;
        leftover -= 1;
    }
    counts
}

/// Stratified index split. Strata are the classes (unlabeled samples,
/// if any, form one extra stratum). Per-stratum test counts follow
/// `round(n_c * fraction)` with largest-remainder correction so the
/// total is exactly `round(n * fraction)`.
pub fn split_holdout_indices(
    data: &Dataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidFraction(test_fraction));
    }
    let n = data.n();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples to split".into()));
    }

    // Strata: class 0..k, then the unlabeled pool at index k.
    let mut strata: Vec<Vec<usize>> = vec![Vec::new(); data.k + 1];
    for (i, s) in data.samples.iter().enumerate() {
        match s.label {
            Some(label) => strata[label].push(i),
            None => strata[data.k].push(i),
        }
    }

    let total_test = (n as f64 * test_fraction).round() as usize;
    if total_test == 0 || total_test == n {
        return Err(Error::InvalidParameter(format!(
            "test fraction {test_fraction} leaves an empty split for n = {n}"
        )));
    }
    let quotas: Vec<f64> = strata.iter().map(|s| s.len() as f64 * test_fraction).collect();
    let test_counts = largest_remainder(&quotas, total_test);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (c, members) in strata.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let take = test_counts[c];
        if c < data.k && take == members.len() {
            return Err(Error::MissingClass(c));
        }
        let mut shuffled = members.clone();
        shuffled.shuffle(&mut rng);
        test.extend_from_slice(&shuffled[..take]);
        train.extend_from_slice(&shuffled[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Stratified holdout split into (train, test) datasets.
pub fn split_holdout(data: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let (train_idx, test_idx) = split_holdout_indices(data, test_fraction, seed)?;
    Ok((data.subset(&train_idx)?, data.subset(&test_idx)?))
}

/// Disjoint folds covering `0..n`, sizes differing by at most one,
/// stratified when `labels` is given (one class id per item).
pub fn kfold_indices(
    n: usize,
    k_folds: usize,
    seed: u64,
    labels: Option<&[usize]>,
) -> Result<Vec<Vec<usize>>> {
    if k_folds < 2 || k_folds > n {
        return Err(Error::InvalidFoldCount { k: k_folds, n });
    }
    if let Some(labels) = labels {
        if labels.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: labels.len() });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k_folds];

    match labels {
        None => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for (pos, idx) in order.into_iter().enumerate() {
                folds[pos % k_folds].push(idx);
            }
        }
        Some(labels) => {
            let num_classes = labels.iter().max().map(|&m| m + 1).unwrap_or(0);
            let mut strata: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
            for (i, &label) in labels.iter().enumerate() {
                strata[label].push(i);
            }
            // Deal classes contiguously with a running offset so the
            // global fold sizes stay within one of each other.
            let mut cursor = 0usize;
            for members in strata.iter_mut() {
                members.shuffle(&mut rng);
                for &idx in members.iter() {
                    folds[cursor % k_folds].push(idx);
                    cursor += 1;
                }
            }
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(labels: &[Option<usize>], k: usize) -> Dataset {
        let samples = labels
            .iter()
            .enumerate()
            .map(|(i, &label)| Sample { features: vec![i as f64, -(i as f64)], label })
            .collect();
        Dataset::new("toy", samples, 2, k).unwrap()
    }

    #[test]
    fn libsvm_line_parses_dense() {
        let text = "1 1:0.5 3:-1.2\n2 1:1 2:2 3:3\n";
        let data = parse_libsvm(text.as_bytes(), "t").unwrap();
        assert_eq!(data.d, 3);
        assert_eq!(data.samples[0].features, vec![0.5, 0.0, -1.2]);
        assert_eq!(data.samples[0].label, Some(0));
    }

    #[test]
    fn libsvm_labels_remap_in_first_appearance_order() {
        let text = "+1 1:1\n-1 1:2\n+1 1:3\n";
        let data = parse_libsvm(text.as_bytes(), "t").unwrap();
        assert_eq!(data.k, 2);
        let labels: Vec<_> = data.samples.iter().map(|s| s.label.unwrap()).collect();
        assert_eq!(labels, vec![0, 1, 0]);
    }

    #[test]
    fn libsvm_empty_file_errors() {
        let err = parse_libsvm("".as_bytes(), "t").unwrap_err();
        assert!(matches!(err, Error::EmptyDataset), "{err}");
    }

    #[test]
    fn libsvm_nonascending_indices_error_with_line() {
        let err = parse_libsvm("1 1:1\n1 3:1 2:1\n".as_bytes(), "t").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("ascending"), "{message}");
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn libsvm_malformed_token_reports_line() {
        let err = parse_libsvm("1 nonsense\n".as_bytes(), "t").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn non_finite_features_are_rejected() {
        assert!(parse_libsvm("1 1:nan\n".as_bytes(), "t").is_err());
        assert!(parse_libsvm("1 1:inf\n".as_bytes(), "t").is_err());
        assert!(parse_csv("a,nan\n".as_bytes(), 0, false, "t").is_err());
    }

    #[test]
    fn libsvm_round_trip_is_exact() {
        let text = "1 1:0.5 3:-1.2\n2 1:0.1 2:0.30000000000000004 3:3\n1 2:7e-12\n";
        let data = parse_libsvm(text.as_bytes(), "t").unwrap();
        let mut buf = Vec::new();
        write_libsvm(&data, &mut buf).unwrap();
        let reloaded = parse_libsvm(&buf[..], "t").unwrap();
        assert_eq!(reloaded.samples, data.samples);
        assert_eq!(reloaded.d, data.d);
        assert_eq!(reloaded.k, data.k);
        // The writer is also stable under a second pass.
        let mut buf2 = Vec::new();
        write_libsvm(&reloaded, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn csv_counts_and_labels() {
        let text = "a,1,2\na,3,4\nb,5,6\n";
        let data = parse_csv(text.as_bytes(), 0, false, "t").unwrap();
        assert_eq!(data.n(), 3);
        assert_eq!(data.d, 2);
        assert_eq!(data.k, 2);
        assert_eq!(data.samples[2].label, Some(1));
        assert_eq!(data.samples[2].features, vec![5.0, 6.0]);
    }

    #[test]
    fn csv_question_mark_is_unlabeled() {
        let text = "a,1,2\n?,1,2\n";
        let data = parse_csv(text.as_bytes(), 0, false, "t").unwrap();
        assert_eq!(data.samples[1].label, None);
        assert!(!data.fully_labeled());
    }

    #[test]
    fn csv_ragged_row_errors() {
        let text = "a,1,2\na,1\n";
        let err = parse_csv(text.as_bytes(), 0, false, "t").unwrap_err();
        match err {
            Error::Parse { message, .. } => assert!(message.contains("ragged"), "{message}"),
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn csv_non_numeric_feature_errors() {
        let err = parse_csv("a,1,oops\n".as_bytes(), 0, false, "t").unwrap_err();
        assert!(err.to_string().contains("non-numeric"), "{err}");
    }

    #[test]
    fn csv_label_column_out_of_range() {
        let err = parse_csv("1,2\n".as_bytes(), 5, false, "t").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn minmax_maps_to_unit_interval() {
        let samples = vec![
            Sample { features: vec![0.0], label: Some(0) },
            Sample { features: vec![5.0], label: Some(0) },
            Sample { features: vec![10.0], label: Some(1) },
        ];
        let data = Dataset::new("t", samples, 1, 2).unwrap();
        let (scaled, _, params) = minmax_scale(&data, &[]).unwrap();
        let vals: Vec<f64> = scaled.samples.iter().map(|s| s.features[0]).collect();
        assert_eq!(vals, vec![0.0, 0.5, 1.0]);
        // extrapolation without clipping
        assert_eq!(params.transform(&[20.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn minmax_constant_feature_goes_to_zero() {
        let samples = vec![
            Sample { features: vec![3.0], label: Some(0) },
            Sample { features: vec![3.0], label: Some(0) },
            Sample { features: vec![3.0], label: Some(0) },
        ];
        let data = Dataset::new("t", samples, 1, 1).unwrap();
        let (scaled, _, _) = minmax_scale(&data, &[]).unwrap();
        assert!(scaled.samples.iter().all(|s| s.features[0] == 0.0));
    }

    #[test]
    fn minmax_dimension_mismatch_errors() {
        let train = toy(&[Some(0), Some(1)], 2);
        let other = Dataset::new(
            "o",
            vec![Sample { features: vec![1.0], label: Some(0) }],
            1,
            2,
        )
        .unwrap();
        assert!(minmax_scale(&train, &[&other]).is_err());
    }

    #[test]
    fn holdout_balanced_ten_gets_three_test() {
        let labels: Vec<Option<usize>> = (0..10).map(|i| Some(i % 2)).collect();
        let data = toy(&labels, 2);
        let (train, test) = split_holdout(&data, 0.3, 7).unwrap();
        assert_eq!(test.n(), 3);
        assert_eq!(train.n(), 7);
        let counts = test.class_counts();
        assert_eq!(counts.iter().sum::<usize>(), 3);
        assert!(counts.iter().all(|&c| c == 1 || c == 2));
    }

    #[test]
    fn holdout_is_deterministic() {
        let labels: Vec<Option<usize>> = (0..20).map(|i| Some(i % 3)).collect();
        let data = toy(&labels, 3);
        let a = split_holdout_indices(&data, 0.3, 11).unwrap();
        let b = split_holdout_indices(&data, 0.3, 11).unwrap();
        assert_eq!(a, b);
        let c = split_holdout_indices(&data, 0.3, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn holdout_rejects_degenerate_fraction() {
        let data = toy(&[Some(0), Some(1)], 2);
        assert!(split_holdout(&data, 1.0, 0).is_err());
        assert!(split_holdout(&data, 0.0, 0).is_err());
    }

    #[test]
    fn holdout_errors_when_class_would_vanish_from_train() {
        // class 1 has a single sample; a large fraction sends it to test
        let data = toy(&[Some(0), Some(0), Some(0), Some(1)], 2);
        let err = split_holdout(&data, 0.75, 0).unwrap_err();
        assert!(matches!(err, Error::MissingClass(1)), "{err}");
    }

    #[test]
    fn holdout_is_a_partition() {
        let labels: Vec<Option<usize>> = (0..37).map(|i| Some(i % 4)).collect();
        let data = toy(&labels, 4);
        let (train, test) = split_holdout_indices(&data, 0.3, 5).unwrap();
        let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
    }

    #[test]
    fn label_marginal_counts() {
        let data = toy(&[Some(0), Some(0), Some(1)], 2);
        let marginal = label_marginal(&data).unwrap();
        assert_eq!(marginal.probs(), &[2.0 / 3.0, 1.0 / 3.0]);
    }

    #[test]
    fn label_marginal_degenerate_class() {
        let data = toy(&[Some(0), Some(0)], 2);
        let marginal = label_marginal(&data).unwrap();
        assert_eq!(marginal.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn label_marginal_requires_labels() {
        let data = toy(&[None, None], 2);
        assert!(matches!(label_marginal(&data), Err(Error::NoLabeledSamples)));
    }

    #[test]
    fn kfold_singletons_when_k_equals_n() {
        let folds = kfold_indices(10, 10, 3, None).unwrap();
        assert!(folds.iter().all(|f| f.len() == 1));
    }

    #[test]
    fn kfold_sizes_differ_by_at_most_one() {
        let folds = kfold_indices(10, 3, 3, None).unwrap();
        let mut sizes: Vec<usize> = folds.iter().map(|f| f.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 4]);
    }

    #[test]
    fn kfold_rejects_bad_counts() {
        assert!(kfold_indices(5, 6, 0, None).is_err());
        assert!(kfold_indices(5, 1, 0, None).is_err());
    }

    #[test]
    fn kfold_stratified_partition_and_proportions() {
        let labels: Vec<usize> = (0..30).map(|i| if i < 18 { 0 } else { 1 }).collect();
        let folds = kfold_indices(30, 5, 9, Some(&labels)).unwrap();
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..30).collect::<Vec<_>>());
        for fold in &folds {
            let c0 = fold.iter().filter(|&&i| labels[i] == 0).count();
            // global proportion is 18/30 = 0.6
            let expected = fold.len() as f64 * 0.6;
            assert!((c0 as f64 - expected).abs() < 1.0, "fold skew: {c0} vs {expected}");
        }
    }
}
