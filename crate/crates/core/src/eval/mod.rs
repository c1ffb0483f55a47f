//! Cross-validation, the ELM shuffle-split protocol, PCA sweeps and metrics.
//!
//! Every protocol first sorts rows by `(recording_id, window_index)`, so
//! results depend on the dataset contents and the seed but not on row order.
//! Folds, tries and sweep points run in parallel and are reduced in index
//! order.

mod folds;
mod metrics;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use folds::{stratified_kfold, stratified_split};
pub use metrics::{compute_metrics, ClassMetrics, ConfusionMatrix, MetricsReport};

use crate::classify::{ClassifierConfig, ElmConfig};
use crate::dataset::FeatureDataset;
use crate::error::{Error, Result};
use crate::features::FeatureSubsetSpec;
use crate::pipeline::{FittedPipeline, PcaDims, PipelineConfig};
use crate::seed::derive_seed;

struct SplitOutcome {
    train: ConfusionMatrix,
    test: ConfusionMatrix,
    output_dim: usize,
}

fn pick(x: &[Vec<f64>], idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter().map(|&i| x[i].clone()).collect()
}

fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    let mut mask = vec![true; n];
    idx.iter().for_each(|&i| mask[i] = false);
    (0..n).filter(|&i| mask[i]).collect()
}

#[allow(clippy::too_many_arguments)]
fn fit_and_score(
    x: &[Vec<f64>],
    y: &[usize],
    n_classes: usize,
    train: &[usize],
    test: &[usize],
    classifier: &ClassifierConfig,
    pipeline: &PipelineConfig,
    score_train: bool,
) -> Result<SplitOutcome> {
    let xtr = pick(x, train);
    let ytr: Vec<usize> = train.iter().map(|&i| y[i]).collect();
    let fitted = FittedPipeline::fit(&xtr, pipeline)?;
    let xtr = fitted.transform(&xtr)?;
    let model = classifier.train(&xtr, &ytr, n_classes)?;

    let train_cm = if score_train {
        ConfusionMatrix::from_predictions(&ytr, &model.predict_all(&xtr)?, n_classes)?
    } else {
        ConfusionMatrix::new(n_classes)
    };
    let xte = fitted.transform(&pick(x, test))?;
    let yte: Vec<usize> = test.iter().map(|&i| y[i]).collect();
    let test_cm = ConfusionMatrix::from_predictions(&yte, &model.predict_all(&xte)?, n_classes)?;
    Ok(SplitOutcome {
        train: train_cm,
        test: test_cm,
        output_dim: fitted.output_dim(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub classifier: String,
    pub subset: String,
    pub folds: usize,
    pub seed: u64,
    /// Pooled over all held-out folds.
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
    pub fold_accuracies: Vec<f64>,
    /// Classifier input dimension of each fold after selection and PCA.
    pub fold_dims: Vec<usize>,
}

/// Stratified `k`-fold cross-validation with the pipeline fitted on each
/// training split only.
pub fn cross_validate(
    data: &FeatureDataset,
    subset: &FeatureSubsetSpec,
    classifier: &ClassifierConfig,
    pipeline: &PipelineConfig,
    k: usize,
    seed: u64,
) -> Result<CvOutcome> {
    if k < 2 {
        return Err(Error::Config(format!("cross-validation needs k >= 2, got {k}")));
    }
    let data = data.canonical();
    let x = data.matrix(subset)?;
    let y = data.targets();
    let folds = stratified_kfold(&y, k, derive_seed(seed, "folds", 0))?;
    let outcomes = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let train = complement(x.len(), test);
            let clf = classifier.with_seed(derive_seed(seed, "model", f as u64));
            fit_and_score(&x, &y, data.n_classes(), &train, test, &clf, pipeline, false)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut confusion = ConfusionMatrix::new(data.n_classes());
    let mut fold_accuracies = Vec::with_capacity(k);
    let mut fold_dims = Vec::with_capacity(k);
    for o in &outcomes {
        confusion.add(&o.test)?;
        fold_accuracies.push(o.test.trace() as f64 / o.test.total() as f64);
        fold_dims.push(o.output_dim);
    }
    Ok(CvOutcome {
        classifier: classifier.name(),
        subset: subset.name().to_string(),
        folds: k,
        seed,
        metrics: compute_metrics(&confusion)?,
        confusion,
        fold_accuracies,
        fold_dims,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatedCv {
    pub runs: Vec<CvOutcome>,
    pub mean_accuracy: f64,
}

/// `repeats` independent cross-validations with seeds derived from `seed`.
#[allow(clippy::too_many_arguments)]
pub fn repeated_cross_validate(
    data: &FeatureDataset,
    subset: &FeatureSubsetSpec,
    classifier: &ClassifierConfig,
    pipeline: &PipelineConfig,
    k: usize,
    repeats: usize,
    seed: u64,
) -> Result<RepeatedCv> {
    if repeats == 0 {
        return Err(Error::Config("at least one repeat is required".into()));
    }
    let runs = (0..repeats)
        .into_par_iter()
        .map(|r| cross_validate(data, subset, classifier, pipeline, k, derive_seed(seed, "repeat", r as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mean_accuracy = runs.iter().map(|r| r.metrics.accuracy).sum::<f64>() / repeats as f64;
    Ok(RepeatedCv { runs, mean_accuracy })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TryAccuracy {
    pub train: f64,
    pub test: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElmProtocolOutcome {
    pub classifier: String,
    pub subset: String,
    pub n_hidden: usize,
    pub train_rows: usize,
    pub tries: Vec<TryAccuracy>,
    pub mean_train: f64,
    pub mean_test: f64,
}

/// Repeated stratified shuffle split; every try draws a fresh split and a
/// fresh hidden layer.
pub fn elm_protocol(
    data: &FeatureDataset,
    subset: &FeatureSubsetSpec,
    elm: &ElmConfig,
    pipeline: &PipelineConfig,
    n_tries: usize,
    train_fraction: f64,
    seed: u64,
) -> Result<ElmProtocolOutcome> {
    if n_tries == 0 {
        return Err(Error::Config("at least one try is required".into()));
    }
    let data = data.canonical();
    let x = data.matrix(subset)?;
    let y = data.targets();
    let classifier = ClassifierConfig::Elm { config: elm.clone() };
    let results = (0..n_tries)
        .into_par_iter()
        .map(|t| {
            let (train, test) = stratified_split(&y, train_fraction, derive_seed(seed, "split", t as u64))?;
            let clf = classifier.with_seed(derive_seed(seed, "model", t as u64));
            let o = fit_and_score(&x, &y, data.n_classes(), &train, &test, &clf, pipeline, true)?;
            Ok((
                train.len(),
                TryAccuracy {
                    train: o.train.trace() as f64 / o.train.total() as f64,
                    test: o.test.trace() as f64 / o.test.total() as f64,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let tries: Vec<TryAccuracy> = results.iter().map(|r| r.1).collect();
    Ok(ElmProtocolOutcome {
        classifier: classifier.name(),
        subset: subset.name().to_string(),
        n_hidden: elm.n_hidden,
        train_rows: results[0].0,
        mean_train: tries.iter().map(|t| t.train).sum::<f64>() / n_tries as f64,
        mean_test: tries.iter().map(|t| t.test).sum::<f64>() / n_tries as f64,
        tries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub requested: PcaDims,
    /// Smallest component count used across folds.
    pub components: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaSweep {
    pub classifier: String,
    pub subset: String,
    pub baseline_accuracy: f64,
    pub baseline_dim: usize,
    /// Sorted by decreasing component count.
    pub rows: Vec<SweepRow>,
}

impl PcaSweep {
    /// Smallest component count whose accuracy is within `points`
    /// percentage points of the no-PCA baseline.
    pub fn smallest_within(&self, points: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| (self.baseline_accuracy - r.accuracy) * 100.0 <= points + 1e-12)
            .min_by_key(|r| r.components)
    }
}

/// One cross-validation per requested PCA size plus a no-PCA baseline, all
/// sharing the same folds.
#[allow(clippy::too_many_arguments)]
pub fn pca_accuracy_sweep(
    data: &FeatureDataset,
    subset: &FeatureSubsetSpec,
    classifier: &ClassifierConfig,
    pipeline: &PipelineConfig,
    dims: &[PcaDims],
    k: usize,
    seed: u64,
) -> Result<PcaSweep> {
    if dims.is_empty() {
        return Err(Error::Config("PCA sweep needs at least one size".into()));
    }
    let baseline_cfg = PipelineConfig {
        pca: None,
        ..pipeline.clone()
    };
    let baseline = cross_validate(data, subset, classifier, &baseline_cfg, k, seed)?;
    let mut rows = dims
        .par_iter()
        .map(|&d| {
            let cfg = PipelineConfig {
                pca: Some(d),
                ..pipeline.clone()
            };
            let cv = cross_validate(data, subset, classifier, &cfg, k, seed)?;
            Ok(SweepRow {
                requested: d,
                components: cv.fold_dims.iter().copied().min().unwrap_or(0),
                accuracy: cv.metrics.accuracy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| std::cmp::Reverse(r.components));
    Ok(PcaSweep {
        classifier: classifier.name(),
        subset: subset.name().to_string(),
        baseline_accuracy: baseline.metrics.accuracy,
        baseline_dim: baseline.fold_dims.iter().copied().min().unwrap_or(0),
        rows,
    })
}
