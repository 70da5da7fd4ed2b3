//! Leave-zero-out model selection.
//!
//! Instead of holding data out, every candidate configuration trains
//! once on the full dataset and is validated on a cheap auxiliary set
//! generated by label-invariant mix-up. The crate also ships the
//! classical cross-validation baselines for comparison, exact
//! Jensen-Shannon divergence machinery with the estimation-bias bounds
//! that justify the approach, and a reproducible benchmark harness.
//!
//! Modules:
//! - [`data`]: dataset model, LIBSVM/CSV ingestion, scaling, splits;
//! - [`augment`]: label-invariant mix-up and pseudo-labeling;
//! - [`divergence`]: exact KL/JS, the conditional decomposition, bounds;
//! - [`models`]: linear SVM (primal SGD), majority, 1-NN, risk evaluation;
//! - [`select`]: leave-zero-out selection and the CV baselines;
//! - [`bench`]: the repeated-trial experiment harness behind the CLI.

pub mod augment;
pub mod bench;
pub mod data;
pub mod divergence;
pub mod error;
pub mod models;
pub mod select;
mod seeding;

pub use augment::{beta_sample, label_invariant_mixup, mixup_pair, pseudo_label, AugmentedSet, MixupConfig, Provenance};
pub use data::{
    kfold_indices, label_marginal, load_csv, load_libsvm, minmax_scale, parse_csv, parse_libsvm,
    save_libsvm, split_holdout, split_holdout_indices, write_csv, write_libsvm, Dataset,
    LabelMarginal, Sample, ScalingParams,
};
pub use divergence::{
    corollary1_bound, histogram_js_estimate, js, js_conditional_decomposition, kl,
    linear_vc_dimension, theorem1_bound, BoundInputs, BoundKind, BoundReport,
    DiscreteDistribution, JointDiscrete, JsDecomposition,
};
pub use error::{Error, Result};
pub use models::{
    empirical_risk, exact_expected_risk, train, LearnerSpec, LossSpec, ModelDocument,
    ModelParams, TrainedModel,
};
pub use select::{
    holdout_select, kfold_cv_select, leave_p_out_select, lzo_select, monte_carlo_cv_select,
    ConfigGrid, SelectionReport,
};
pub use bench::{
    emit_bound_report, expand_grid, run_experiment, BoundDocument, DataFormat, ExperimentConfig,
    ExperimentOutput, MethodSpec, ResultRow,
};
