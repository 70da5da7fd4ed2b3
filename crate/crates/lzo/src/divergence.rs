//! Exact KL/JS divergence on finite distributions, the conditional
//! decomposition of joint JS, and the estimation-bias bounds.
//!
//! All logarithms are natural. Exact divergences are offered only for
//! discrete objects; continuous data go through the clearly-labeled
//! histogram heuristic at the bottom of this module.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Sample};
use crate::error::{Error, Result};

/// A probability vector over a finite support.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Wrap a probability vector; entries must be nonnegative and sum
    /// to 1 within 1e-12.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter("probabilities must be finite and >= 0".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(Self { probs })
    }

    /// Normalize arbitrary nonnegative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return Err(Error::InvalidParameter("weights must have positive finite sum".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidParameter("weights must be >= 0".into()));
        }
        Self::new(weights.iter().map(|&w| w / sum).collect())
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Kullback-Leibler divergence `sum_i p_i ln(p_i/q_i)`.
///
/// Terms with `p_i = 0` contribute nothing; any `p_i > 0` with
/// `q_i = 0` makes the divergence infinite.
pub fn kl(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.support_size() != q.support_size() {
        return Err(Error::SupportMismatch(p.support_size(), q.support_size()));
    }
    let mut total = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total)
}

/// Jensen-Shannon divergence `(KL(P||M) + KL(Q||M)) / 2` with
/// `M = (P+Q)/2`. Always finite, bounded by `ln 2`.
pub fn js(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.support_size() != q.support_size() {
        return Err(Error::SupportMismatch(p.support_size(), q.support_size()));
    }
    let mixture = DiscreteDistribution {
        probs: p.probs.iter().zip(&q.probs).map(|(&a, &b)| 0.5 * (a + b)).collect(),
    };
    Ok(0.5 * (kl(p, &mixture)? + kl(q, &mixture)?))
}

/// A joint distribution over classes x finite feature support,
/// stored as a `k x S` table summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDiscrete {
    table: Vec<Vec<f64>>,
}

impl JointDiscrete {
    /// Wrap a `k x S` table; the grand total must be 1 within 1e-12.
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        if table.is_empty() || table[0].is_empty() {
            return Err(Error::ShapeMismatch("joint table must be non-empty".into()));
        }
        let s = table[0].len();
        if table.iter().any(|row| row.len() != s) {
            return Err(Error::ShapeMismatch("joint table rows have unequal length".into()));
        }
        if table.iter().flatten().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter("joint entries must be finite and >= 0".into()));
        }
        let total: f64 = table.iter().flatten().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("joint sums to {total}, not 1")));
        }
        Ok(Self { table })
    }

    /// Normalize arbitrary nonnegative weights into a joint table.
    pub fn from_weights(weights: &[Vec<f64>]) -> Result<Self> {
        let total: f64 = weights.iter().flatten().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidParameter("weights must have positive finite sum".into()));
        }
        Self::new(
            weights
                .iter()
                .map(|row| row.iter().map(|&w| w / total).collect())
                .collect(),
        )
    }

    pub fn classes(&self) -> usize {
        self.table.len()
    }

    pub fn support_size(&self) -> usize {
        self.table[0].len()
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// Marginal over classes (row sums).
    pub fn label_marginal(&self) -> DiscreteDistribution {
        DiscreteDistribution {
            probs: self.table.iter().map(|row| row.iter().sum()).collect(),
        }
    }

    /// Conditional over features given class `y`, or `None` when the
    /// class has zero mass.
    pub fn conditional(&self, y: usize) -> Option<DiscreteDistribution> {
        let mass: f64 = self.table[y].iter().sum();
        if mass <= 0.0 {
            return None;
        }
        Some(DiscreteDistribution {
            probs: self.table[y].iter().map(|&v| v / mass).collect(),
        })
    }

    /// The joint flattened into one distribution over `k * S` cells.
    pub fn flatten(&self) -> DiscreteDistribution {
        DiscreteDistribution { probs: self.table.iter().flatten().copied().collect() }
    }

    /// The equal mixture `(P+Q)/2` of two joints.
    pub fn mixture(p: &JointDiscrete, q: &JointDiscrete) -> Result<JointDiscrete> {
        if p.classes() != q.classes() || p.support_size() != q.support_size() {
            return Err(Error::ShapeMismatch("joint shapes differ".into()));
        }
        Ok(JointDiscrete {
            table: p
                .table
                .iter()
                .zip(&q.table)
                .map(|(pr, qr)| pr.iter().zip(qr).map(|(&a, &b)| 0.5 * (a + b)).collect())
                .collect(),
        })
    }

    /// Draw `n` labeled samples, mapping feature-support column `s` to
    /// the vector `support_points[s]`.
    pub fn sample_dataset(
        &self,
        support_points: &[Vec<f64>],
        n: usize,
        name: &str,
        rng: &mut impl Rng,
    ) -> Result<Dataset> {
        if support_points.len() != self.support_size() {
            return Err(Error::SupportMismatch(support_points.len(), self.support_size()));
        }
        let cells: Vec<(usize, usize, f64)> = self
            .table
            .iter()
            .enumerate()
            .flat_map(|(y, row)| row.iter().enumerate().map(move |(s, &p)| (y, s, p)))
            .collect();
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let mut u: f64 = rng.random();
            let mut chosen = cells.len() - 1;
            for (i, &(_, _, p)) in cells.iter().enumerate() {
                if u < p {
                    chosen = i;
                    break;
                }
                u -= p;
            }
            let (y, s, _) = cells[chosen];
            samples.push(Sample { features: support_points[s].clone(), label: Some(y) });
        }
        Dataset::new(name, samples, support_points[0].len(), self.classes())
    }
}

/// The terms of the conditional decomposition of joint JS divergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsDecomposition {
    /// `sqrt(cond_term) + sqrt(label_js)`.
    pub d: f64,
    /// JS divergence between the two label marginals.
    pub label_js: f64,
    /// Both conditional expectations of feature-given-label JS.
    pub cond_term: f64,
}

/// Decompose the divergence between two joints into a label-marginal
/// term and a conditional term:
/// `cond_term = E_{y~P(y)} JS(P(x|y), Q(x|y)) + E_{y~Q(y)} JS(P(x|y), Q(x|y))`,
/// `d = sqrt(cond_term) + sqrt(label_js)`. Classes with zero mass under
/// a weighting marginal contribute nothing to that expectation.
pub fn js_conditional_decomposition(p: &JointDiscrete, q: &JointDiscrete) -> Result<JsDecomposition> {
    if p.classes() != q.classes() || p.support_size() != q.support_size() {
        return Err(Error::ShapeMismatch("joint shapes differ".into()));
    }
    let p_y = p.label_marginal();
    let q_y = q.label_marginal();
    let label_js = js(&p_y, &q_y)?;

    let mut cond_term = 0.0;
    for y in 0..p.classes() {
        let weight = p_y.probs()[y] + q_y.probs()[y];
        if weight == 0.0 {
            continue;
        }
        let (Some(p_cond), Some(q_cond)) = (p.conditional(y), q.conditional(y)) else {
            // One side has no mass on this class: its conditional is
            // undefined, so the class is skipped in both expectations.
            continue;
        };
        cond_term += weight * js(&p_cond, &q_cond)?;
    }
    Ok(JsDecomposition { d: cond_term.sqrt() + label_js.sqrt(), label_js, cond_term })
}

/// Inputs to the estimation-bias bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Loss interval `max(loss) - min(loss)`.
    pub b: f64,
    /// Validation sample count.
    pub m: usize,
    /// VC dimension of the hypothesis class.
    pub v: usize,
    /// Confidence parameter in (0,1).
    pub delta: f64,
    /// JS divergence (theorem form) or decomposed D (corollary form).
    pub divergence_term: f64,
}

impl BoundInputs {
    pub fn new(b: f64, m: usize, v: usize, delta: f64, divergence_term: f64) -> Result<Self> {
        let inputs = Self { b, m, v, delta, divergence_term };
        inputs.validate()?;
        Ok(inputs)
    }

    fn validate(&self) -> Result<()> {
        if !(self.b >= 0.0) {
            return Err(Error::InvalidParameter("loss interval B must be >= 0".into()));
        }
        if self.m < 1 {
            return Err(Error::InvalidParameter("validation count m must be >= 1".into()));
        }
        if self.v < 1 {
            return Err(Error::InvalidParameter("VC dimension v must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter("delta must lie in (0,1)".into()));
        }
        if !(self.divergence_term >= 0.0) {
            return Err(Error::InvalidParameter("divergence term must be >= 0".into()));
        }
        Ok(())
    }

    fn vc_term(&self) -> Result<f64> {
        let m = self.m as f64;
        let v = self.v as f64;
        let ratio = 2.0 * std::f64::consts::E * m / v;
        if ratio <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "need 2em/v > 1, got {ratio} (m = {}, v = {})",
                self.m, self.v
            )));
        }
        Ok(((4.0 / m) * (v * ratio.ln() + (4.0 / self.delta).ln())).sqrt())
    }
}

/// Estimation-bias bound with the divergence term read as joint JS:
/// `(B/sqrt(2)) * sqrt(js) + sqrt((4/m)(v ln(2em/v) + ln(4/delta)))`.
pub fn theorem1_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let vc = inputs.vc_term()?;
    Ok(inputs.b / std::f64::consts::SQRT_2 * inputs.divergence_term.sqrt() + vc)
}

/// Decomposed estimation-bias bound with the divergence term read as
/// the already-rooted `D`: `(B/sqrt(2)) * D + vc_term`.
pub fn corollary1_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let vc = inputs.vc_term()?;
    Ok(inputs.b / std::f64::consts::SQRT_2 * inputs.divergence_term + vc)
}

/// VC dimension of linear separators in `d` dimensions.
pub fn linear_vc_dimension(d: usize) -> usize {
    d + 1
}

/// Which bound a serialized diagnostic record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Theorem1,
    Corollary1,
}

/// Serializable bound diagnostic record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "B")]
    pub b: f64,
    pub m: usize,
    pub v: usize,
    pub delta: f64,
    pub divergence_term: f64,
    pub bound: f64,
    pub kind: BoundKind,
}

impl BoundReport {
    pub fn theorem1(inputs: &BoundInputs) -> Result<Self> {
        Ok(Self {
            b: inputs.b,
            m: inputs.m,
            v: inputs.v,
            delta: inputs.delta,
            divergence_term: inputs.divergence_term,
            bound: theorem1_bound(inputs)?,
            kind: BoundKind::Theorem1,
        })
    }

    pub fn corollary1(inputs: &BoundInputs) -> Result<Self> {
        Ok(Self {
            b: inputs.b,
            m: inputs.m,
            v: inputs.v,
            delta: inputs.delta,
            divergence_term: inputs.divergence_term,
            bound: corollary1_bound(inputs)?,
            kind: BoundKind::Corollary1,
        })
    }
}

/// Product-marginal histogram heuristic for the divergence between two
/// continuous datasets: per-feature equal-width histograms over the
/// pooled range, averaged marginal JS across features.
///
/// This is a diagnostic proxy, not a consistent estimator of joint JS;
/// outputs that reach reports are flagged as heuristic.
pub fn histogram_js_estimate(a: &Dataset, b: &Dataset, bins: usize) -> Result<f64> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch { expected: a.d, actual: b.d });
    }
    if bins < 2 {
        return Err(Error::InvalidParameter("need at least 2 bins".into()));
    }
    let mut total = 0.0;
    for j in 0..a.d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in a.samples.iter().chain(&b.samples) {
            lo = lo.min(s.features[j]);
            hi = hi.max(s.features[j]);
        }
        let width = hi - lo;
        let histogram = |data: &Dataset| -> DiscreteDistribution {
            let mut counts = vec![0.0f64; bins];
            for s in &data.samples {
                let bin = if width == 0.0 {
                    0
                } else {
                    (((s.features[j] - lo) / width) * bins as f64).floor() as usize
                };
                counts[bin.min(bins - 1)] += 1.0;
            }
            DiscreteDistribution::from_weights(&counts).expect("counts are a valid weighting")
        };
        total += js(&histogram(a), &histogram(b))?;
    }
    Ok(total / a.d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Sample;

    fn dist(probs: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(probs.to_vec()).unwrap()
    }

    #[test]
    fn kl_of_identical_is_zero() {
        let p = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(kl(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn kl_disjoint_support_is_infinite() {
        let p = dist(&[1.0, 0.0]);
        let q = dist(&[0.0, 1.0]);
        assert_eq!(kl(&p, &q).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kl_matches_direct_summation_oracle() {
        // frozen from term-by-term evaluation of the definition
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.75, 0.25]);
        let expected = 0.14384103622589042;
        assert!((kl(&p, &q).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn js_of_identical_is_zero() {
        let p = dist(&[0.1, 0.2, 0.7]);
        assert_eq!(js(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn js_saturates_at_ln2_on_disjoint_supports() {
        let p = dist(&[1.0, 0.0]);
        let q = dist(&[0.0, 1.0]);
        assert!((js(&p, &q).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn js_matches_direct_summation_oracle_and_is_symmetric() {
        let p = dist(&[0.5, 0.5]);
        let q = dist(&[0.75, 0.25]);
        let expected = 0.033822075568605205;
        let forward = js(&p, &q).unwrap();
        assert!((forward - expected).abs() < 1e-15);
        assert_eq!(forward, js(&q, &p).unwrap());
    }

    #[test]
    fn js_rejects_support_mismatch() {
        let p = dist(&[1.0]);
        let q = dist(&[0.5, 0.5]);
        assert!(js(&p, &q).is_err());
    }

    #[test]
    fn decomposition_of_identical_joints_is_zero() {
        let p = JointDiscrete::new(vec![vec![0.1, 0.2], vec![0.3, 0.4]]).unwrap();
        let dec = js_conditional_decomposition(&p, &p).unwrap();
        assert_eq!(dec.d, 0.0);
        assert_eq!(dec.label_js, 0.0);
        assert_eq!(dec.cond_term, 0.0);
    }

    #[test]
    fn decomposition_splits_marginal_and_conditional() {
        // same label marginals, same conditionals => both terms vanish
        let p = JointDiscrete::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let q = JointDiscrete::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let dec = js_conditional_decomposition(&p, &q).unwrap();
        assert_eq!(dec.label_js, 0.0);
        assert_eq!(dec.cond_term, 0.0);

        // shifted label marginal only
        let q = JointDiscrete::new(vec![vec![0.35, 0.35], vec![0.15, 0.15]]).unwrap();
        let dec = js_conditional_decomposition(&p, &q).unwrap();
        assert!(dec.label_js > 0.0);
        assert!(dec.cond_term.abs() < 1e-15);
    }

    #[test]
    fn theorem1_with_zero_divergence_is_the_vc_term() {
        // frozen from an independent arithmetic evaluation
        let inputs = BoundInputs::new(1.0, 150, 3, 0.05, 0.0).unwrap();
        let expected = 0.7518428416034503;
        assert!((theorem1_bound(&inputs).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn theorem1_shrinks_with_more_validation_samples() {
        let small = BoundInputs::new(1.0, 100, 3, 0.05, 0.0).unwrap();
        let large = BoundInputs::new(1.0, 400, 3, 0.05, 0.0).unwrap();
        assert!(theorem1_bound(&large).unwrap() < theorem1_bound(&small).unwrap());
    }

    #[test]
    fn theorem1_monotone_in_its_inputs() {
        let base = BoundInputs::new(1.0, 200, 3, 0.05, 0.1).unwrap();
        let bound = theorem1_bound(&base).unwrap();
        let more_b = BoundInputs { b: 2.0, ..base };
        let more_js = BoundInputs { divergence_term: 0.2, ..base };
        let more_v = BoundInputs { v: 5, ..base };
        let more_delta = BoundInputs { delta: 0.5, ..base };
        assert!(theorem1_bound(&more_b).unwrap() > bound);
        assert!(theorem1_bound(&more_js).unwrap() > bound);
        assert!(theorem1_bound(&more_v).unwrap() > bound);
        assert!(theorem1_bound(&more_delta).unwrap() < bound);
    }

    #[test]
    fn theorem1_limit_is_the_divergence_term() {
        let js_value = 0.09;
        let inputs = BoundInputs::new(1.0, 1_000_000_000_000, 3, 0.05, js_value).unwrap();
        let limit = js_value.sqrt() / std::f64::consts::SQRT_2;
        assert!((theorem1_bound(&inputs).unwrap() - limit).abs() < 1e-4);
    }

    #[test]
    fn corollary1_with_zero_d_equals_theorem1_with_zero_js() {
        let inputs = BoundInputs::new(1.0, 150, 3, 0.05, 0.0).unwrap();
        assert_eq!(corollary1_bound(&inputs).unwrap(), theorem1_bound(&inputs).unwrap());
    }

    #[test]
    fn corollary1_decreases_as_delta_grows() {
        let tight = BoundInputs::new(1.0, 150, 3, 0.05, 0.3).unwrap();
        let loose = BoundInputs::new(1.0, 150, 3, 0.9, 0.3).unwrap();
        assert!(corollary1_bound(&loose).unwrap() < corollary1_bound(&tight).unwrap());
    }

    #[test]
    fn bound_inputs_validate() {
        assert!(BoundInputs::new(-1.0, 10, 1, 0.1, 0.0).is_err());
        assert!(BoundInputs::new(1.0, 0, 1, 0.1, 0.0).is_err());
        assert!(BoundInputs::new(1.0, 10, 0, 0.1, 0.0).is_err());
        assert!(BoundInputs::new(1.0, 10, 1, 1.0, 0.0).is_err());
        assert!(BoundInputs::new(1.0, 10, 1, 0.1, -0.5).is_err());
        // 2em/v <= 1 rejected at evaluation time
        let inputs = BoundInputs::new(1.0, 1, 10, 0.1, 0.0).unwrap();
        assert!(theorem1_bound(&inputs).is_err());
    }

    #[test]
    fn vc_dimension_of_linear_separators() {
        assert_eq!(linear_vc_dimension(1), 2);
        assert_eq!(linear_vc_dimension(2), 3);
        assert_eq!(linear_vc_dimension(241), 242);
    }

    fn one_dim_dataset(values: &[f64]) -> Dataset {
        let samples = values
            .iter()
            .map(|&v| Sample { features: vec![v], label: Some(0) })
            .collect();
        Dataset::new("h", samples, 1, 1).unwrap()
    }

    #[test]
    fn histogram_estimate_is_zero_for_identical_data() {
        let a = one_dim_dataset(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(histogram_js_estimate(&a, &a, 4).unwrap(), 0.0);
    }

    #[test]
    fn histogram_estimate_saturates_on_disjoint_ranges() {
        let a = one_dim_dataset(&[0.0, 0.1, 0.2]);
        let b = one_dim_dataset(&[10.0, 10.1, 10.2]);
        let est = histogram_js_estimate(&a, &b, 8).unwrap();
        assert!((est - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn histogram_estimate_stays_in_range() {
        let a = one_dim_dataset(&[0.3, 0.6, 0.9, 1.5]);
        let b = one_dim_dataset(&[0.2, 0.8, 1.1, 1.4]);
        let est = histogram_js_estimate(&a, &b, 4).unwrap();
        assert!((0.0..=std::f64::consts::LN_2 + 1e-12).contains(&est));
    }

    #[test]
    fn bound_report_round_trips_through_json() {
        let inputs = BoundInputs::new(1.0, 150, 3, 0.05, 0.02).unwrap();
        let report = BoundReport::theorem1(&inputs).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"kind\":\"theorem1\""), "{text}");
        let back: BoundReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }
}
