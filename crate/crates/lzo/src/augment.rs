//! Auxiliary validation sets via label-invariant mix-up.
//!
//! Augmented samples are convex combinations of two same-class source
//! samples with a Beta(alpha, alpha) weight. Per-class counts follow
//! the source label marginal with largest-remainder rounding, which
//! drives the label-marginal divergence between source and augmented
//! sets to zero. Unlabeled sources can first be pseudo-labeled by a
//! trained model.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Sample};
use crate::error::{Error, Result};
use crate::models::TrainedModel;
use crate::seeding::stream_rng;

/// Parameters of the mix-up generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixupConfig {
    /// Beta shape; alpha = 1 draws the weight uniformly.
    pub alpha: f64,
    /// Number of augmented samples to generate.
    pub m: usize,
    pub seed: u64,
}

impl MixupConfig {
    pub fn new(alpha: f64, m: usize, seed: u64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
        }
        if m < 1 {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        Ok(Self { alpha, m, seed })
    }
}

/// Where one augmented sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Index of the first source sample in the input dataset.
    pub j: usize,
    /// Index of the second source sample.
    pub k: usize,
    /// Mixing weight applied to source `j`.
    pub lambda: f64,
}

/// An augmented validation set plus per-sample provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedSet {
    pub data: Dataset,
    pub provenance: Vec<Provenance>,
}

impl AugmentedSet {
    /// Write the provenance sidecar as JSON lines `{j, k, lambda}`.
    pub fn write_provenance_jsonl(&self, mut w: impl Write) -> Result<()> {
        for record in &self.provenance {
            let line = serde_json::to_string(record)
                .map_err(|e| Error::Config(format!("provenance serialization failed: {e}")))?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// One Gamma(shape, 1) draw by Marsaglia-Tsang; shapes below 1 use the
/// `Gamma(shape+1) * U^(1/shape)` boost.
fn gamma_sample(shape: f64, rng: &mut impl Rng) -> f64 {
    if shape < 1.0 {
        let u: f64 = 1.0 - rng.random::<f64>(); // in (0, 1]
        return gamma_sample(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v_cbrt = 1.0 + c * x;
        if v_cbrt <= 0.0 {
            continue;
        }
        let v = v_cbrt * v_cbrt * v_cbrt;
        let u: f64 = 1.0 - rng.random::<f64>();
        let x_sq = x * x;
        if u < 1.0 - 0.0331 * x_sq * x_sq
            || u.ln() < 0.5 * x_sq + d * (1.0 - v + v.ln())
        {
            return d * v;
        }
    }
}

/// One Beta(alpha, alpha) draw as `G1 / (G1 + G2)` with two
/// Gamma(alpha, 1) draws.
pub fn beta_sample(alpha: f64, rng: &mut impl Rng) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    let g1 = gamma_sample(alpha, rng);
    let g2 = gamma_sample(alpha, rng);
    Ok(g1 / (g1 + g2))
}

/// `n` Beta(alpha, alpha) draws from one seeded stream.
pub fn beta_samples(alpha: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| beta_sample(alpha, &mut rng)).collect()
}

/// Coordinatewise convex combination `lambda*x_j + (1-lambda)*x_k`.
///
/// Endpoints and equal coordinates are returned exactly, so identical
/// sources always reproduce themselves bit for bit.
pub fn mixup_pair(x_j: &[f64], x_k: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if x_j.len() != x_k.len() {
        return Err(Error::DimensionMismatch { expected: x_j.len(), actual: x_k.len() });
    }
    if lambda == 1.0 {
        return Ok(x_j.to_vec());
    }
    if lambda == 0.0 {
        return Ok(x_k.to_vec());
    }
    Ok(x_j
        .iter()
        .zip(x_k)
        .map(|(&a, &b)| if a == b { a } else { lambda * a + (1.0 - lambda) * b })
        .collect())
}

/// Generate exactly `cfg.m` augmented samples from the labeled part of
/// `data`. Per-class counts are `round(m * n_c / n_labeled)` with
/// largest-remainder correction; within a class the source pair is
/// drawn uniformly (distinct unless the class is a singleton) and the
/// label is inherited. Deterministic in `(data, cfg)`; draw `i` uses
/// the stream derived from `(cfg.seed, i)`.
pub fn label_invariant_mixup(data: &Dataset, cfg: &MixupConfig) -> Result<AugmentedSet> {
    MixupConfig::new(cfg.alpha, cfg.m, cfg.seed)?;
    let counts = data.class_counts();
    let labeled_total: usize = counts.iter().sum();
    if labeled_total == 0 {
        return Err(Error::NoLabeledSamples);
    }
    for (class, &count) in counts.iter().enumerate() {
        if count == 0 {
            log::warn!(
                "class {class} has no labeled members; its augmented mass is redistributed"
            );
        }
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); data.k];
    for (i, s) in data.samples.iter().enumerate() {
        if let Some(label) = s.label {
            members[label].push(i);
        }
    }

    let quotas: Vec<f64> = counts
        .iter()
        .map(|&c| cfg.m as f64 * c as f64 / labeled_total as f64)
        .collect();
    let per_class = apportion(&quotas, cfg.m, &counts);

    let mut samples = Vec::with_capacity(cfg.m);
    let mut provenance = Vec::with_capacity(cfg.m);
    let mut draw = 0u64;
    for (class, &target) in per_class.iter().enumerate() {
        let pool = &members[class];
        for _ in 0..target {
            let mut rng = stream_rng(cfg.seed, draw);
            draw += 1;
            let lambda = beta_sample(cfg.alpha, &mut rng)?;
            let j = pool[rng.random_range(0..pool.len())];
            let k = if pool.len() == 1 {
                j
            } else {
                // uniform over the pool minus j
                let mut pick = rng.random_range(0..pool.len() - 1);
                if pool[pick] == j {
                    pick = pool.len() - 1;
                }
                pool[pick]
            };
            let features = mixup_pair(&data.samples[j].features, &data.samples[k].features, lambda)?;
            samples.push(Sample { features, label: Some(class) });
            provenance.push(Provenance { j, k, lambda });
        }
    }

    let name = format!("{}-augmented", data.name);
    Ok(AugmentedSet {
        data: Dataset::new(name, samples, data.d, data.k)?,
        provenance,
    })
}

/// Largest-remainder apportionment restricted to classes that have
/// members; classes without labeled members get zero.
fn apportion(quotas: &[f64], total: usize, counts: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = quotas.iter().map(|&q| q.floor() as usize).collect();
    for (slot, &count) in out.iter_mut().zip(counts) {
        if count == 0 {
            *slot = 0;
        }
    }
    let assigned: usize = out.iter().sum();
    let mut leftover = total.saturating_sub(assigned);
    let mut order: Vec<usize> = (0..quotas.len()).filter(|&i| counts[i] > 0).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    // round-robin over the eligible classes in remainder order
    while leftover > 0 {
        for &i in &order {
            if leftover == 0 {
                break;
            }
            out[i] += 1;
            leftover -= 1;
        }
    }
    out
}

/// Fill in missing labels with `model`'s predictions; labeled samples
/// pass through untouched.
pub fn pseudo_label(model: &TrainedModel, data: &Dataset) -> Result<Dataset> {
    if model.d != data.d {
        return Err(Error::DimensionMismatch { expected: data.d, actual: model.d });
    }
    let samples = data
        .samples
        .iter()
        .map(|s| {
            let label = match s.label {
                Some(label) => label,
                None => model.predict(&s.features)?,
            };
            Ok(Sample { features: s.features.clone(), label: Some(label) })
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(data.name.clone(), samples, data.d, data.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::label_marginal;
    use crate::divergence::{js, DiscreteDistribution};
    use crate::models::{train, LearnerSpec};
    use crate::seeding::stream_rng;

    fn class_blob(label: usize, base: f64, count: usize) -> Vec<Sample> {
        (0..count)
            .map(|i| Sample {
                features: vec![base + i as f64 * 0.01, base - i as f64 * 0.01],
                label: Some(label),
            })
            .collect()
    }

    #[test]
    fn beta_one_is_uniform_in_mean() {
        let mut rng = stream_rng(1, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| beta_sample(1.0, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn beta_stays_in_unit_interval_for_any_alpha() {
        for alpha in [0.2, 0.5, 1.0, 2.5, 10.0] {
            let mut rng = stream_rng(2, 0);
            for _ in 0..2_000 {
                let v = beta_sample(alpha, &mut rng).unwrap();
                assert!((0.0..=1.0).contains(&v), "alpha {alpha} gave {v}");
            }
        }
    }

    #[test]
    fn beta_is_symmetric_in_mean_for_any_alpha() {
        for alpha in [0.3, 2.0, 7.0] {
            let mut rng = stream_rng(3, 0);
            let n = 100_000;
            let mean: f64 =
                (0..n).map(|_| beta_sample(alpha, &mut rng).unwrap()).sum::<f64>() / n as f64;
            assert!((mean - 0.5).abs() < 0.01, "alpha {alpha} mean {mean}");
        }
    }

    #[test]
    fn beta_rejects_nonpositive_alpha() {
        let mut rng = stream_rng(4, 0);
        assert!(beta_sample(0.0, &mut rng).is_err());
        assert!(beta_sample(-1.0, &mut rng).is_err());
    }

    #[test]
    fn mixup_pair_identities() {
        let x = vec![1.0, 2.0, 3.0];
        assert_eq!(mixup_pair(&x, &x, 0.37).unwrap(), x);
        let y = vec![4.0, 5.0, 6.0];
        assert_eq!(mixup_pair(&x, &y, 1.0).unwrap(), x);
        assert_eq!(
            mixup_pair(&[0.0, 0.0], &[2.0, 4.0], 0.25).unwrap(),
            vec![1.5, 3.0]
        );
        assert!(mixup_pair(&x, &[1.0], 0.5).is_err());
    }

    #[test]
    fn mixup_respects_label_proportions() {
        let mut samples = class_blob(0, 0.0, 100);
        samples.extend(class_blob(1, 10.0, 50));
        let data = Dataset::new("t", samples, 2, 2).unwrap();
        let cfg = MixupConfig::new(1.0, 150, 5).unwrap();
        let set = label_invariant_mixup(&data, &cfg).unwrap();
        assert_eq!(set.data.n(), 150);
        assert_eq!(set.data.class_counts(), vec![100, 50]);
    }

    #[test]
    fn mixup_singleton_class_reproduces_the_singleton() {
        let mut samples = class_blob(0, 0.0, 5);
        samples.push(Sample { features: vec![9.0, -9.0], label: Some(1) });
        let data = Dataset::new("t", samples, 2, 2).unwrap();
        let cfg = MixupConfig::new(1.0, 12, 3).unwrap();
        let set = label_invariant_mixup(&data, &cfg).unwrap();
        for (sample, record) in set.data.samples.iter().zip(&set.provenance) {
            if sample.label == Some(1) {
                assert_eq!(record.j, record.k);
                assert_eq!(sample.features, vec![9.0, -9.0]);
            }
        }
    }

    #[test]
    fn mixup_is_deterministic_including_provenance() {
        let mut samples = class_blob(0, 0.0, 8);
        samples.extend(class_blob(1, 4.0, 6));
        let data = Dataset::new("t", samples, 2, 2).unwrap();
        let cfg = MixupConfig::new(0.7, 40, 9).unwrap();
        let a = label_invariant_mixup(&data, &cfg).unwrap();
        let b = label_invariant_mixup(&data, &cfg).unwrap();
        assert_eq!(a, b);
        let c = label_invariant_mixup(&data, &MixupConfig::new(0.7, 40, 10).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn mixup_label_invariance_and_convexity() {
        let mut samples = class_blob(0, 0.0, 7);
        samples.extend(class_blob(1, 2.0, 9));
        let data = Dataset::new("t", samples, 2, 2).unwrap();
        let cfg = MixupConfig::new(0.5, 200, 21).unwrap();
        let set = label_invariant_mixup(&data, &cfg).unwrap();
        for (sample, record) in set.data.samples.iter().zip(&set.provenance) {
            let src_j = &data.samples[record.j];
            let src_k = &data.samples[record.k];
            assert_eq!(sample.label, src_j.label);
            assert_eq!(sample.label, src_k.label);
            for ((&v, &a), &b) in sample.features.iter().zip(&src_j.features).zip(&src_k.features)
            {
                assert!(v >= a.min(b) - 1e-12 && v <= a.max(b) + 1e-12);
            }
        }
    }

    #[test]
    fn mixup_marginal_tracks_source_marginal() {
        let mut samples = class_blob(0, 0.0, 90);
        samples.extend(class_blob(1, 3.0, 45));
        samples.extend(class_blob(2, 6.0, 15));
        let data = Dataset::new("t", samples, 2, 3).unwrap();
        let n = data.n();
        let cfg = MixupConfig::new(1.0, 10 * n, 13).unwrap();
        let set = label_invariant_mixup(&data, &cfg).unwrap();
        let p = label_marginal(&data).unwrap();
        let q = label_marginal(&set.data).unwrap();
        let js_val = js(
            &DiscreteDistribution::new(p.probs().to_vec()).unwrap(),
            &DiscreteDistribution::new(q.probs().to_vec()).unwrap(),
        )
        .unwrap();
        assert!(js_val < 1e-4, "marginal js {js_val}");
    }

    #[test]
    fn pseudo_label_fills_only_missing_labels() {
        let labeled = Dataset::new(
            "t",
            vec![
                Sample { features: vec![0.0], label: Some(0) },
                Sample { features: vec![1.0], label: Some(0) },
                Sample { features: vec![2.0], label: Some(1) },
            ],
            1,
            2,
        )
        .unwrap();
        let model = train(&LearnerSpec::Majority, &labeled, 0).unwrap();

        // fully labeled input is untouched
        let out = pseudo_label(&model, &labeled).unwrap();
        assert_eq!(out, labeled);

        let mixed = Dataset::new(
            "t",
            vec![
                Sample { features: vec![0.0], label: Some(1) },
                Sample { features: vec![5.0], label: None },
            ],
            1,
            2,
        )
        .unwrap();
        let out = pseudo_label(&model, &mixed).unwrap();
        assert_eq!(out.samples[0].label, Some(1));
        assert_eq!(out.samples[1].label, Some(0)); // majority class
        assert!(out.fully_labeled());
    }

    #[test]
    fn provenance_sidecar_is_json_lines() {
        let data = Dataset::new("t", class_blob(0, 0.0, 4), 2, 1).unwrap();
        let cfg = MixupConfig::new(1.0, 3, 0).unwrap();
        let set = label_invariant_mixup(&data, &cfg).unwrap();
        let mut buf = Vec::new();
        set.write_provenance_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        for line in text.lines() {
            let record: Provenance = serde_json::from_str(line).unwrap();
            assert!(record.lambda >= 0.0 && record.lambda <= 1.0);
        }
    }
}
