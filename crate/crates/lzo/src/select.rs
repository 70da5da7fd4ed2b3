//! Model-selection strategies: leave-zero-out selection against an
//! augmented validation set, and the classical hold-out resampling
//! baselines (k-fold, single hold-out, Monte-Carlo, leave-p-out).
//!
//! Every selector reports the exact number of models it trained (an
//! instrumented count, not a formula) and its wall time measured
//! around the whole call, augmentation included.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::augment::{label_invariant_mixup, pseudo_label, MixupConfig};
use crate::data::{kfold_indices, split_holdout_indices, Dataset};
use crate::error::{Error, Result};
use crate::models::{empirical_risk, train, LearnerSpec, LossSpec, TrainedModel};
use crate::seeding::derive_seed;

/// Ordered candidate configurations; order fixes tie-breaking.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigGrid {
    pub specs: Vec<LearnerSpec>,
}

impl ConfigGrid {
    pub fn new(specs: Vec<LearnerSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for spec in &specs {
            spec.validate()?;
        }
        Ok(Self { specs })
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }
}

/// Outcome of one selection run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub method: String,
    pub dataset: String,
    pub seed: u64,
    pub per_config_risk: Vec<f64>,
    pub chosen_index: usize,
    pub chosen_spec: String,
    pub models_trained: usize,
    pub wall_time_seconds: f64,
}

/// First index achieving the minimum risk.
fn argmin_first(risks: &[f64]) -> usize {
    let mut best = 0;
    for (i, &r) in risks.iter().enumerate().skip(1) {
        if r < risks[best] {
            best = i;
        }
    }
    best
}

// Stream tags keeping the different seed consumers apart.
const TAG_TRAIN: u64 = 0x7472_6169;
const TAG_AUGMENT: u64 = 0x6175_676d;
const TAG_SPLIT: u64 = 0x7370_6c69;
const TAG_REFIT: u64 = 0x7265_6669;

/// Indices `0..n` that are not in `held_out`.
fn complement(n: usize, held_out: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; n];
    for &idx in held_out {
        mask[idx] = true;
    }
    (0..n).filter(|&idx| !mask[idx]).collect()
}

/// Leave-zero-out selection: train each candidate once on the full
/// data and validate on a mixed-up auxiliary set. There is no refit
/// step: every candidate already used all the data.
///
/// Fully labeled data shares one auxiliary set across candidates. When
/// unlabeled samples are present, each candidate pseudo-labels them
/// with its own model and the auxiliary set is rebuilt per candidate
/// from the completed pool.
pub fn lzo_select(
    data: &Dataset,
    grid: &ConfigGrid,
    mixup: &MixupConfig,
    loss: LossSpec,
) -> Result<(TrainedModel, SelectionReport)> {
    let start = Instant::now();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let fully_labeled = data.fully_labeled();
    let train_master = derive_seed(mixup.seed, TAG_TRAIN);
    let augment_master = derive_seed(mixup.seed, TAG_AUGMENT);

    let shared_validation = if fully_labeled {
        Some(label_invariant_mixup(data, mixup)?)
    } else {
        None
    };
    let labeled_pool = if fully_labeled { None } else { Some(data.labeled_subset()?) };

    let results: Vec<(TrainedModel, f64)> = grid
        .specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| -> Result<(TrainedModel, f64)> {
            let train_input = labeled_pool.as_ref().unwrap_or(data);
            let model = train(spec, train_input, derive_seed(train_master, i as u64))?;
            let risk = match &shared_validation {
                Some(validation) => empirical_risk(&model, &validation.data, loss)?,
                None => {
                    let pool = pseudo_label(&model, data)?;
                    let cfg = MixupConfig {
                        seed: derive_seed(augment_master, i as u64),
                        ..*mixup
                    };
                    let validation = label_invariant_mixup(&pool, &cfg)?;
                    empirical_risk(&model, &validation.data, loss)?
                }
            };
            Ok((model, risk))
        })
        .collect::<Result<_>>()?;

    let risks: Vec<f64> = results.iter().map(|(_, r)| *r).collect();
    let models_trained = results.len();
    let chosen_index = argmin_first(&risks);
    let chosen = results.into_iter().nth(chosen_index).expect("chosen index in range").0;

    let report = SelectionReport {
        method: "lzo".to_string(),
        dataset: data.name.clone(),
        seed: mixup.seed,
        per_config_risk: risks,
        chosen_index,
        chosen_spec: grid.specs[chosen_index].describe(),
        models_trained,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((chosen, report))
}

/// K-fold cross-validation. Only labeled samples are folded; unlabeled
/// samples join every training fold (and are dropped by the supervised
/// trainers). With `refit` the chosen configuration is retrained on the
/// full labeled data, adding one to the model count; without it the
/// chosen configuration's last-fold model is returned as-is.
pub fn kfold_cv_select(
    data: &Dataset,
    grid: &ConfigGrid,
    k_folds: usize,
    seed: u64,
    loss: LossSpec,
    refit: bool,
) -> Result<(TrainedModel, SelectionReport)> {
    let start = Instant::now();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let labeled = data.labeled_indices();
    let labels: Vec<usize> = labeled.iter().map(|&i| data.samples[i].label.unwrap()).collect();
    let folds = kfold_indices(labeled.len(), k_folds, derive_seed(seed, TAG_SPLIT), Some(&labels))?;

    let c = grid.len();
    let units: Vec<(usize, usize)> =
        (0..k_folds).flat_map(|f| (0..c).map(move |i| (f, i))).collect();

    let outcomes: Vec<(f64, Option<TrainedModel>)> = units
        .par_iter()
        .map(|&(fold, i)| -> Result<(f64, Option<TrainedModel>)> {
            let val_idx: Vec<usize> = folds[fold].iter().map(|&p| labeled[p]).collect();
            let train_data = data.subset(&complement(data.n(), &val_idx))?.labeled_subset()?;
            let val_data = data.subset(&val_idx)?;
            let unit = (fold * c + i) as u64;
            let model = train(&grid.specs[i], &train_data, derive_seed(seed, TAG_TRAIN ^ unit))?;
            let risk = empirical_risk(&model, &val_data, loss)?;
            let keep = if fold == k_folds - 1 { Some(model) } else { None };
            Ok((risk, keep))
        })
        .collect::<Result<_>>()?;

    let mut per_config_risk = vec![0.0; c];
    let mut last_fold_models: Vec<Option<TrainedModel>> = (0..c).map(|_| None).collect();
    for (&(fold, i), (risk, keep)) in units.iter().zip(outcomes) {
        per_config_risk[i] += risk / k_folds as f64;
        if fold == k_folds - 1 {
            last_fold_models[i] = keep;
        }
    }
    let mut models_trained = units.len();
    let chosen_index = argmin_first(&per_config_risk);

    let chosen = if refit {
        models_trained += 1;
        train(
            &grid.specs[chosen_index],
            &data.labeled_subset()?,
            derive_seed(seed, TAG_REFIT),
        )?
    } else {
        last_fold_models[chosen_index].take().expect("last-fold model retained")
    };

    let report = SelectionReport {
        method: "kfold".to_string(),
        dataset: data.name.clone(),
        seed,
        per_config_risk,
        chosen_index,
        chosen_spec: grid.specs[chosen_index].describe(),
        models_trained,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((chosen, report))
}

/// Shared core of hold-out and Monte-Carlo selection: one stratified
/// split per entry of `split_seeds`, risks averaged across splits.
fn holdout_rounds(
    data: &Dataset,
    grid: &ConfigGrid,
    val_fraction: f64,
    split_seeds: &[u64],
    loss: LossSpec,
) -> Result<(Vec<f64>, Vec<Option<TrainedModel>>, usize)> {
    let labeled_pool = data.labeled_subset()?;
    let c = grid.len();
    let rounds = split_seeds.len();
    let units: Vec<(usize, usize)> =
        (0..rounds).flat_map(|r| (0..c).map(move |i| (r, i))).collect();

    let outcomes: Vec<(f64, Option<TrainedModel>)> = units
        .par_iter()
        .map(|&(round, i)| -> Result<(f64, Option<TrainedModel>)> {
            let split_seed = split_seeds[round];
            let (train_idx, val_idx) = split_holdout_indices(&labeled_pool, val_fraction, split_seed)?;
            let train_data = labeled_pool.subset(&train_idx)?;
            let val_data = labeled_pool.subset(&val_idx)?;
            let model = train(&grid.specs[i], &train_data, derive_seed(split_seed, TAG_TRAIN ^ i as u64))?;
            let risk = empirical_risk(&model, &val_data, loss)?;
            let keep = if round == rounds - 1 { Some(model) } else { None };
            Ok((risk, keep))
        })
        .collect::<Result<_>>()?;

    let mut per_config_risk = vec![0.0; c];
    let mut last_models: Vec<Option<TrainedModel>> = (0..c).map(|_| None).collect();
    for (&(round, i), (risk, keep)) in units.iter().zip(outcomes) {
        per_config_risk[i] += risk / rounds as f64;
        if round == rounds - 1 {
            last_models[i] = keep;
        }
    }
    Ok((per_config_risk, last_models, units.len()))
}

fn finish_holdout_style(
    method: &str,
    data: &Dataset,
    grid: &ConfigGrid,
    seed: u64,
    refit: bool,
    start: Instant,
    rounds_output: (Vec<f64>, Vec<Option<TrainedModel>>, usize),
) -> Result<(TrainedModel, SelectionReport)> {
    let (per_config_risk, mut last_models, mut models_trained) = rounds_output;
    let chosen_index = argmin_first(&per_config_risk);
    let chosen = if refit {
        models_trained += 1;
        train(&grid.specs[chosen_index], &data.labeled_subset()?, derive_seed(seed, TAG_REFIT))?
    } else {
        last_models[chosen_index].take().expect("last-round model retained")
    };
    let report = SelectionReport {
        method: method.to_string(),
        dataset: data.name.clone(),
        seed,
        per_config_risk,
        chosen_index,
        chosen_spec: grid.specs[chosen_index].describe(),
        models_trained,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((chosen, report))
}

/// Single stratified hold-out split.
pub fn holdout_select(
    data: &Dataset,
    grid: &ConfigGrid,
    val_fraction: f64,
    seed: u64,
    loss: LossSpec,
    refit: bool,
) -> Result<(TrainedModel, SelectionReport)> {
    let start = Instant::now();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let split_seeds = [derive_seed(seed, TAG_SPLIT)];
    let rounds = holdout_rounds(data, grid, val_fraction, &split_seeds, loss)?;
    finish_holdout_style("holdout", data, grid, seed, refit, start, rounds)
}

/// Monte-Carlo cross-validation: mean held-out risk over `repeats`
/// independent stratified splits. With one repeat this reproduces
/// `holdout_select` exactly (same seed derivation).
pub fn monte_carlo_cv_select(
    data: &Dataset,
    grid: &ConfigGrid,
    repeats: usize,
    val_fraction: f64,
    seed: u64,
    loss: LossSpec,
    refit: bool,
) -> Result<(TrainedModel, SelectionReport)> {
    let start = Instant::now();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if repeats < 1 {
        return Err(Error::InvalidParameter("repeats must be >= 1".into()));
    }
    let split_seeds: Vec<u64> = (0..repeats)
        .map(|r| derive_seed(seed, TAG_SPLIT.wrapping_add(r as u64)))
        .collect();
    let rounds = holdout_rounds(data, grid, val_fraction, &split_seeds, loss)?;
    if log::log_enabled!(log::Level::Debug) {
        log::debug!("mccv per-config mean risks over {repeats} splits: {:?}", rounds.0);
    }
    finish_holdout_style("mccv", data, grid, seed, refit, start, rounds)
}

fn binomial(n: usize, p: usize) -> u128 {
    let mut result: u128 = 1;
    for i in 0..p {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

fn combinations(pool: &[usize], p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(p);
    fn recurse(pool: &[usize], p: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == p {
            out.push(current.clone());
            return;
        }
        let needed = p - current.len();
        for i in start..=pool.len().saturating_sub(needed) {
            current.push(pool[i]);
            recurse(pool, p, i + 1, current, out);
            current.pop();
        }
    }
    recurse(pool, p, 0, &mut current, &mut out);
    out
}

/// Guard for leave-p-out enumeration size.
pub const LPO_SUBSET_LIMIT: u128 = 100_000;

/// Exhaustive leave-p-out: every size-`p` subset of the labeled data is
/// held out once. Guarded to `1 <= p <= 3` and at most
/// [`LPO_SUBSET_LIMIT`] subsets. Enumeration is exhaustive, so there is
/// no seed; stochastic trainers use a fixed internal derivation.
pub fn leave_p_out_select(
    data: &Dataset,
    grid: &ConfigGrid,
    p: usize,
    loss: LossSpec,
    refit: bool,
) -> Result<(TrainedModel, SelectionReport)> {
    let start = Instant::now();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(1..=3).contains(&p) {
        return Err(Error::InvalidParameter(format!("leave-p-out requires 1 <= p <= 3, got {p}")));
    }
    let labeled = data.labeled_indices();
    if p >= labeled.len() {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be below the labeled count {}",
            labeled.len()
        )));
    }
    let count = binomial(labeled.len(), p);
    if count > LPO_SUBSET_LIMIT {
        return Err(Error::SubsetGuard { count, limit: LPO_SUBSET_LIMIT });
    }

    let subsets = combinations(&labeled, p);
    let c = grid.len();
    let units: Vec<(usize, usize)> =
        (0..subsets.len()).flat_map(|s| (0..c).map(move |i| (s, i))).collect();

    let outcomes: Vec<(f64, Option<TrainedModel>)> = units
        .par_iter()
        .map(|&(s, i)| -> Result<(f64, Option<TrainedModel>)> {
            let val_idx = &subsets[s];
            let train_data = data.subset(&complement(data.n(), val_idx))?.labeled_subset()?;
            let val_data = data.subset(val_idx)?;
            let unit = (s * c + i) as u64;
            let model = train(&grid.specs[i], &train_data, derive_seed(0, TAG_TRAIN ^ unit))?;
            let risk = empirical_risk(&model, &val_data, loss)?;
            let keep = if s == 0 { Some(model) } else { None };
            Ok((risk, keep))
        })
        .collect::<Result<_>>()?;

    let mut per_config_risk = vec![0.0; c];
    let mut first_subset_models: Vec<Option<TrainedModel>> = (0..c).map(|_| None).collect();
    for (&(s, i), (risk, keep)) in units.iter().zip(outcomes) {
        per_config_risk[i] += risk / subsets.len() as f64;
        if s == 0 {
            first_subset_models[i] = keep;
        }
    }
    let mut models_trained = units.len();
    let chosen_index = argmin_first(&per_config_risk);

    // Without refit the chosen configuration's model from the first
    // held-out subset is returned as-is; no training goes uncounted.
    let chosen = if refit {
        models_trained += 1;
        train(&grid.specs[chosen_index], &data.labeled_subset()?, derive_seed(0, TAG_REFIT))?
    } else {
        first_subset_models[chosen_index].take().expect("first-subset model retained")
    };

    let report = SelectionReport {
        method: "lpo".to_string(),
        dataset: data.name.clone(),
        seed: 0,
        per_config_risk,
        chosen_index,
        chosen_spec: grid.specs[chosen_index].describe(),
        models_trained,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((chosen, report))
}
