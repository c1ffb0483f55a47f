//! Feature matrices with provenance, and their CSV + sidecar JSON form.
//!
//! The CSV has one named column per feature followed by `label`,
//! `recording_id` and `window_index`. The sidecar records the label set and
//! the feature configuration the matrix was extracted with.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{
    extract_features, select_subset, ExtractionWarning, FeatureConfig, FeatureLayout, FeatureSubsetSpec, FeatureVector,
};
use crate::ingest::{LabelSet, Recording};
use crate::preprocess::{preprocess_recording, WindowingConfig};

pub const METADATA_COLUMNS: [&str; 3] = ["label", "recording_id", "window_index"];

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureDataset {
    pub labels: LabelSet,
    pub feature_config: FeatureConfig,
    pub layout: FeatureLayout,
    pub rows: Vec<FeatureVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSidecar {
    pub labels: LabelSet,
    pub channels: usize,
    pub feature_config: FeatureConfig,
    pub columns: Vec<String>,
    pub rows: usize,
}

/// Sidecar path next to a feature CSV: `features.csv` → `features.layout.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("layout.json")
}

impl FeatureDataset {
    pub fn new(labels: LabelSet, feature_config: FeatureConfig, channels: usize, rows: Vec<FeatureVector>) -> Result<Self> {
        let layout = FeatureLayout::new(channels, &feature_config);
        for r in &rows {
            if r.values.len() != layout.len() {
                return Err(Error::Dim {
                    expected: layout.len(),
                    found: r.values.len(),
                });
            }
            if labels.label(r.label.index).as_ref() != Some(&r.label) {
                return Err(Error::Config(format!("row label {:?} not in the label set", r.label.name)));
            }
        }
        Ok(Self {
            labels,
            feature_config,
            layout,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn targets(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.label.index).collect()
    }

    /// Rows restricted to the columns of `subset`, in layout order.
    pub fn matrix(&self, subset: &FeatureSubsetSpec) -> Result<Vec<Vec<f64>>> {
        self.rows
            .iter()
            .map(|r| select_subset(&r.values, &self.layout, subset))
            .collect()
    }

    /// Copy with rows sorted by `(recording_id, window_index)`.
    pub fn canonical(&self) -> Self {
        let mut out = self.clone();
        out.rows
            .sort_by(|a, b| a.recording_id.cmp(&b.recording_id).then(a.window_index.cmp(&b.window_index)));
        out
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for r in &self.rows {
            counts[r.label.index] += 1;
        }
        counts
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        let header: Vec<&str> = self
            .layout
            .names
            .iter()
            .map(String::as_str)
            .chain(METADATA_COLUMNS)
            .collect();
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.values.iter().map(|v| format!("{v}")).collect();
            rec.push(r.label.name.clone());
            rec.push(r.recording_id.clone());
            rec.push(r.window_index.to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;

        let sidecar = DatasetSidecar {
            labels: self.labels.clone(),
            channels: self.layout.channels,
            feature_config: self.feature_config.clone(),
            columns: header.iter().map(|s| s.to_string()).collect(),
            rows: self.rows.len(),
        };
        let side = sidecar_path(path);
        let mut text = serde_json::to_string_pretty(&sidecar)?;
        text.push('\n');
        fs::write(&side, text).map_err(|e| Error::io(&side, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let side = sidecar_path(path);
        let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
        let sidecar: DatasetSidecar = serde_json::from_str(&text)?;
        let layout = FeatureLayout::new(sidecar.channels, &sidecar.feature_config);
        let width = layout.len() + METADATA_COLUMNS.len();

        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_path(path)
            .map_err(|e| csv_io(path, e))?;
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let expected: Vec<String> = layout
            .names
            .iter()
            .cloned()
            .chain(METADATA_COLUMNS.iter().map(|s| s.to_string()))
            .collect();
        if header != expected {
            return Err(Error::Config(format!(
                "{}: header does not match the layout in {}",
                path.display(),
                side.display()
            )));
        }

        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            if rec.len() != width {
                return Err(Error::Format {
                    row: line,
                    expected: width,
                    found: rec.len(),
                });
            }
            let values = (0..layout.len())
                .map(|c| {
                    rec[c].trim().parse::<f64>().map_err(|_| Error::Parse {
                        row: line,
                        column: c + 1,
                        value: rec[c].to_string(),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            let n = layout.len();
            let label = sidecar
                .labels
                .get(&rec[n])
                .ok_or_else(|| Error::Config(format!("row {line}: unknown label {:?}", &rec[n])))?;
            let window_index = rec[n + 2].parse::<usize>().map_err(|_| Error::Parse {
                row: line,
                column: n + 3,
                value: rec[n + 2].to_string(),
            })?;
            rows.push(FeatureVector {
                values,
                label,
                recording_id: rec[n + 1].to_string(),
                window_index,
            });
        }
        Self::new(sidecar.labels, sidecar.feature_config, sidecar.channels, rows)
    }
}

/// Envelope, segment and featurize every recording. Rows follow recording
/// order, then window order.
pub fn extract_dataset(
    labels: &LabelSet,
    recordings: &[Recording],
    windowing: &WindowingConfig,
    cfg: &FeatureConfig,
) -> Result<(FeatureDataset, Vec<ExtractionWarning>)> {
    let channels = recordings
        .first()
        .map(Recording::channel_count)
        .ok_or_else(|| Error::InsufficientData("no recordings to extract".into()))?;
    if let Some(r) = recordings.iter().find(|r| r.channel_count() != channels) {
        return Err(Error::Dim {
            expected: channels,
            found: r.channel_count(),
        });
    }
    cfg.validate(channels, windowing.window_length)?;
    let per_recording = recordings
        .par_iter()
        .map(|r| {
            preprocess_recording(r, windowing)?
                .iter()
                .map(|f| extract_features(f, cfg))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for e in per_recording.into_iter().flatten() {
        rows.push(e.vector);
        warnings.extend(e.warnings);
    }
    Ok((FeatureDataset::new(labels.clone(), cfg.clone(), channels, rows)?, warnings))
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    }
}
