use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use myoact_core::classify::{ClassifierConfig, ElmConfig, TrainedModel};
use myoact_core::dataset::{extract_dataset, FeatureDataset, METADATA_COLUMNS};
use myoact_core::eval::{
    cross_validate, elm_protocol, pca_accuracy_sweep, repeated_cross_validate, CvOutcome, ElmProtocolOutcome,
    PcaSweep, SweepRow,
};
use myoact_core::features::{ExtractionWarning, FeatureSubsetSpec};
use myoact_core::ingest::{generate_synthetic_dataset, load_dataset, write_recording, DatasetManifest, ManifestEntry};
use myoact_core::pipeline::{FittedPipeline, PipelineConfig};
use serde::{Deserialize, Serialize};

use crate::config::{Run, Seeds};
use crate::output::{slug, write_csv, write_json};

pub fn synth(run: &Run) -> Result<()> {
    if run.manifest.is_some() {
        bail!("dataset.manifest is set; `synth` only generates the synthetic dataset");
    }
    let spec = &run.config.dataset.synth;
    let labels = spec.label_set()?;
    let recordings = generate_synthetic_dataset(spec, run.seeds.synth)?;
    let dir = run.data_dir();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut entries = Vec::with_capacity(recordings.len());
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for r in &recordings {
        let file = format!("{}.csv", r.id);
        write_recording(&dir.join(&file), r)?;
        entries.push(ManifestEntry {
            path: file,
            action: r.action.name.clone(),
            subject: "synthetic".into(),
        });
        *counts.entry(r.action.index).or_default() += 1;
    }
    DatasetManifest {
        labels: labels.names().to_vec(),
        entries,
    }
    .write(&dir.join("manifest.json"))?;

    let windows = run.config.windowing.window_count(spec.samples);
    for (idx, n) in counts {
        println!(
            "{}: {n} recordings, {} windows",
            labels.names()[idx],
            n * windows
        );
    }
    println!("wrote {}", dir.join("manifest.json").display());
    Ok(())
}

pub fn extract(run: &Run) -> Result<()> {
    let manifest = run.manifest_path();
    if !manifest.is_file() {
        bail!("manifest {} not found; run `synth` first or set dataset.manifest", manifest.display());
    }
    let (labels, recordings) = load_dataset(&manifest, &run.load_options())?;
    let (data, warnings) = extract_dataset(&labels, &recordings, &run.config.windowing, &run.config.features)?;
    let dir = run.features_dir();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    data.write_csv(&run.features_csv())?;
    write_json(&dir.join("warnings.json"), &warnings)?;
    for w in &warnings {
        log::warn!("{} window {}: {:?} {}", w.recording_id, w.window_index, w.family, w.detail);
    }
    println!(
        "{} rows x {} columns ({} features), {} warnings",
        data.len(),
        data.layout.len() + METADATA_COLUMNS.len(),
        data.layout.len(),
        warnings.len()
    );
    println!("wrote {}", run.features_csv().display());
    Ok(())
}

fn load_features(run: &Run) -> Result<FeatureDataset> {
    let path = run.features_csv();
    if !path.is_file() {
        bail!("feature matrix {} not found; run `extract` first", path.display());
    }
    Ok(FeatureDataset::read_csv(&path)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub classifier: ClassifierConfig,
    pub subset: FeatureSubsetSpec,
    pub labels: Vec<String>,
    pub columns: Vec<String>,
    pub pipeline: FittedPipeline,
    pub model: TrainedModel,
    pub seed: u64,
}

pub fn train(run: &Run) -> Result<()> {
    let data = load_features(run)?.canonical();
    let dir = run.models_dir();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let y = data.targets();
    for (ci, classifier) in run.config.evaluate.classifiers.iter().enumerate() {
        for subset in &run.config.evaluate.subsets {
            let x = data.matrix(subset)?;
            let pipeline = FittedPipeline::fit(&x, &run.config.pipeline)?;
            let seed = myoact_core::seed::derive_seed(run.seeds.master, "train", ci as u64);
            let clf = classifier.with_seed(seed);
            let model = clf.train(&pipeline.transform(&x)?, &y, data.n_classes())?;
            let file = ModelFile {
                classifier: clf,
                subset: subset.clone(),
                labels: data.labels.names().to_vec(),
                columns: data.layout.indices(subset).iter().map(|&i| data.layout.names[i].clone()).collect(),
                pipeline,
                model,
                seed,
            };
            let path = dir.join(format!("{}__{}.json", slug(&classifier.name()), slug(subset.name())));
            write_json(&path, &file)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub seeds: Seeds,
    pub folds: usize,
    pub repeats: usize,
    pub labels: Vec<String>,
    pub rows: usize,
    pub results: Vec<EvaluationRow>,
    pub elm: Vec<ElmProtocolOutcome>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvaluationRow {
    /// Mean accuracy over repeats; equals `cv.metrics.accuracy` for one repeat.
    pub mean_accuracy: f64,
    pub cv: CvOutcome,
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

pub fn evaluate(run: &Run) -> Result<()> {
    let data = load_features(run)?;
    let ev = &run.config.evaluate;
    if ev.repeats == 0 {
        bail!("evaluate.repeats must be at least 1");
    }
    let mut results = Vec::new();
    for classifier in &ev.classifiers {
        for subset in &ev.subsets {
            let row = if ev.repeats == 1 {
                let cv = cross_validate(&data, subset, classifier, &run.config.pipeline, ev.folds, run.seeds.cv)?;
                EvaluationRow {
                    mean_accuracy: cv.metrics.accuracy,
                    cv,
                }
            } else {
                let rep = repeated_cross_validate(
                    &data,
                    subset,
                    classifier,
                    &run.config.pipeline,
                    ev.folds,
                    ev.repeats,
                    run.seeds.cv,
                )?;
                EvaluationRow {
                    mean_accuracy: rep.mean_accuracy,
                    cv: rep.runs.into_iter().next().expect("one repeat"),
                }
            };
            log::info!("{} / {}: accuracy {:.4}", row.cv.classifier, row.cv.subset, row.mean_accuracy);
            results.push(row);
        }
    }

    let elm_cfg = &run.config.elm;
    let mut elm = Vec::new();
    for &activation in &elm_cfg.activations {
        let cfg = ElmConfig {
            n_hidden: elm_cfg.n_hidden,
            activation,
            seed: 0,
        };
        elm.push(elm_protocol(
            &data,
            &elm_cfg.subset,
            &cfg,
            &run.config.pipeline,
            elm_cfg.tries,
            elm_cfg.train_fraction,
            run.seeds.elm,
        )?);
    }

    let labels = data.labels.names().to_vec();
    let dir = run.reports_dir();
    fs::create_dir_all(dir.join("confusion")).with_context(|| format!("creating {}", dir.display()))?;

    let mut summary = vec![vec![
        "classifier",
        "subset",
        "accuracy",
        "balanced_accuracy",
        "cohens_kappa",
        "sensitivity",
        "specificity",
        "precision",
        "f_measure",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>()];
    let mut per_class = vec![vec![
        "classifier",
        "subset",
        "action",
        "sensitivity",
        "specificity",
        "precision",
        "f_measure",
        "misclassification_rate",
    ]
    .into_iter()
    .map(String::from)
    .collect::<Vec<_>>()];
    for r in &results {
        let m = &r.cv.metrics;
        summary.push(vec![
            r.cv.classifier.clone(),
            r.cv.subset.clone(),
            format!("{}", r.mean_accuracy),
            format!("{}", m.balanced_accuracy),
            format!("{}", m.cohens_kappa),
            format!("{}", mean(m.per_class.iter().map(|c| c.sensitivity))),
            format!("{}", mean(m.per_class.iter().map(|c| c.specificity))),
            format!("{}", mean(m.per_class.iter().map(|c| c.precision))),
            format!("{}", mean(m.per_class.iter().map(|c| c.f_measure))),
        ]);
        for c in &m.per_class {
            per_class.push(vec![
                r.cv.classifier.clone(),
                r.cv.subset.clone(),
                labels[c.class].clone(),
                format!("{}", c.sensitivity),
                format!("{}", c.specificity),
                format!("{}", c.precision),
                format!("{}", c.f_measure),
                format!("{}", c.misclassification_rate),
            ]);
        }
        let mut grid = vec![std::iter::once("true\\predicted".to_string())
            .chain(labels.iter().cloned())
            .collect::<Vec<_>>()];
        for (i, row) in r.cv.confusion.counts.iter().enumerate() {
            grid.push(
                std::iter::once(labels[i].clone())
                    .chain(row.iter().map(u64::to_string))
                    .collect(),
            );
        }
        write_csv(
            &dir.join("confusion")
                .join(format!("{}__{}.csv", slug(&r.cv.classifier), slug(&r.cv.subset))),
            &grid,
        )?;
    }
    write_csv(&dir.join("evaluation.csv"), &summary)?;
    write_csv(&dir.join("per_class.csv"), &per_class)?;

    if !elm.is_empty() {
        let mut rows = vec![vec!["activation", "n_hidden", "tries", "train_rows", "mean_train", "mean_test"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()];
        for (o, a) in elm.iter().zip(&elm_cfg.activations) {
            rows.push(vec![
                a.to_string(),
                o.n_hidden.to_string(),
                o.tries.len().to_string(),
                o.train_rows.to_string(),
                format!("{}", o.mean_train),
                format!("{}", o.mean_test),
            ]);
        }
        write_csv(&dir.join("elm.csv"), &rows)?;
    }

    let report = EvaluationReport {
        seeds: run.seeds,
        folds: ev.folds,
        repeats: ev.repeats,
        labels,
        rows: data.len(),
        results,
        elm,
    };
    write_json(&dir.join("evaluation.json"), &report)?;
    for r in &report.results {
        println!(
            "{:<6} {:<20} accuracy {:.4}  kappa {:.4}",
            r.cv.classifier, r.cv.subset, r.mean_accuracy, r.cv.metrics.cohens_kappa
        );
    }
    for o in &report.elm {
        println!("{:<12} train {:.4}  test {:.4}", o.classifier, o.mean_train, o.mean_test);
    }
    println!("wrote {}", dir.join("evaluation.json").display());
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub seeds: Seeds,
    pub folds: usize,
    pub tolerance_points: f64,
    pub sweep: PcaSweep,
    pub smallest_within_tolerance: Option<SweepRow>,
}

pub fn sweep_pca(run: &Run) -> Result<()> {
    let data = load_features(run)?;
    let cfg = &run.config.sweep;
    let pipeline = PipelineConfig {
        pca: None,
        ..run.config.pipeline.clone()
    };
    let sweep = pca_accuracy_sweep(
        &data,
        &cfg.subset,
        &cfg.classifier,
        &pipeline,
        &cfg.dims,
        run.config.evaluate.folds,
        run.seeds.cv,
    )?;
    let knee = sweep.smallest_within(cfg.tolerance_points).cloned();

    let dir = run.reports_dir();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut rows = vec![vec!["k".to_string(), "components".into(), "accuracy".into()]];
    for r in &sweep.rows {
        rows.push(vec![r.requested.to_string(), r.components.to_string(), format!("{}", r.accuracy)]);
    }
    write_csv(&dir.join("pca_sweep.csv"), &rows)?;
    for r in &sweep.rows {
        println!("k={:<5} components {:<4} accuracy {:.4}", r.requested.to_string(), r.components, r.accuracy);
    }
    println!(
        "no PCA ({} columns): accuracy {:.4}",
        sweep.baseline_dim, sweep.baseline_accuracy
    );
    match &knee {
        Some(r) => println!(
            "smallest k within {} points: {} (accuracy {:.4})",
            cfg.tolerance_points, r.components, r.accuracy
        ),
        None => println!("no k within {} points of the baseline", cfg.tolerance_points),
    }
    let report = SweepReport {
        seeds: run.seeds,
        folds: run.config.evaluate.folds,
        tolerance_points: cfg.tolerance_points,
        sweep,
        smallest_within_tolerance: knee,
    };
    write_json(&dir.join("pca_sweep.json"), &report)?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<T>> {
    if !path.is_file() {
        return Ok(None);
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Some(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?))
}

pub fn report(run: &Run) -> Result<()> {
    let dir = run.reports_dir();
    let evaluation: Option<EvaluationReport> = read_json(&dir.join("evaluation.json"))?;
    let sweep: Option<SweepReport> = read_json(&dir.join("pca_sweep.json"))?;
    let warnings: Option<Vec<ExtractionWarning>> = read_json(&run.features_dir().join("warnings.json"))?;
    if evaluation.is_none() && sweep.is_none() {
        bail!("no reports under {}; run `evaluate` or `sweep-pca` first", dir.display());
    }

    let mut md = String::from("# Evaluation summary\n\n");
    if let Some(w) = &warnings {
        md += &format!("Extraction warnings: {}\n\n", w.len());
    }
    if let Some(e) = &evaluation {
        md += &format!(
            "Master seed {}, {}-fold cross-validation, {} repeat(s), {} segments.\n\n",
            e.seeds.master, e.folds, e.repeats, e.rows
        );
        md += "| Classifier | Features | Accuracy | Balanced accuracy | Kappa |\n|---|---|---|---|---|\n";
        for r in &e.results {
            md += &format!(
                "| {} | {} | {:.4} | {:.4} | {:.4} |\n",
                r.cv.classifier, r.cv.subset, r.mean_accuracy, r.cv.metrics.balanced_accuracy, r.cv.metrics.cohens_kappa
            );
        }
        md += "\n";
        if let Some(best) = e
            .results
            .iter()
            .max_by(|a, b| a.mean_accuracy.total_cmp(&b.mean_accuracy).then(std::cmp::Ordering::Greater))
        {
            md += &format!(
                "Per-action metrics for the best configuration ({} on {}):\n\n",
                best.cv.classifier, best.cv.subset
            );
            md += "| Action | Sensitivity | Specificity | Precision | F-measure |\n|---|---|---|---|---|\n";
            for c in &best.cv.metrics.per_class {
                md += &format!(
                    "| {} | {:.3} | {:.3} | {:.3} | {:.3} |\n",
                    e.labels[c.class], c.sensitivity, c.specificity, c.precision, c.f_measure
                );
            }
            md += "\n";
        }
        if !e.elm.is_empty() {
            md += "| ELM activation | Mean train accuracy | Mean test accuracy |\n|---|---|---|\n";
            for o in &e.elm {
                md += &format!("| {} | {:.4} | {:.4} |\n", o.classifier, o.mean_train, o.mean_test);
            }
            md += "\n";
        }
    }
    if let Some(s) = &sweep {
        md += &format!(
            "PCA sweep ({} on {}), no-PCA accuracy {:.4} with {} columns:\n\n",
            s.sweep.classifier, s.sweep.subset, s.sweep.baseline_accuracy, s.sweep.baseline_dim
        );
        md += "| k | Components | Accuracy |\n|---|---|---|\n";
        for r in &s.sweep.rows {
            md += &format!("| {} | {} | {:.4} |\n", r.requested, r.components, r.accuracy);
        }
        md += "\n";
        if let Some(k) = &s.smallest_within_tolerance {
            md += &format!(
                "Smallest component count within {} points of the baseline: {}.\n",
                s.tolerance_points, k.components
            );
        }
    }
    let path = dir.join("summary.md");
    fs::write(&path, &md).with_context(|| format!("writing {}", path.display()))?;
    print!("{md}");
    Ok(())
}
