//! Per-frame feature extraction across five families.
//!
//! With eight channels and the default [`FeatureConfig`] the vector has 303
//! entries laid out as ICS (56), PSD (80), LMFS (136), TDS (21), HOSA (10).
//! Extractor failures on a single channel or pair are zero-filled and
//! reported as [`ExtractionWarning`]s rather than failing the frame.

mod hos;
mod ics;
mod layout;
mod log_moments;
mod spectral;
mod time_domain;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use hos::{fourth_order_cross_cumulant, second_order_cumulant};
pub use ics::{covariance_index, max_similarity_index, max_similarity_lag};
pub use layout::{channel_pairs, select_subset, FeatureFamily, FeatureLayout, FeatureSubsetSpec};
pub use log_moments::{
    log_moment_features, log_moments_from, magnitude_spectrum, spectral_moments, LOG_MOMENT_COUNT,
    MOMENT_PAIRS,
};
pub use spectral::{ar_spectrum, band_powers, burg_ar, burg_psd, ArModel};
pub use time_domain::{time_domain_features, TdFeatures, TdThreshold, TD_FEATURE_COUNT, TD_FEATURE_NAMES};

use crate::error::{Error, Result};
use crate::ingest::ActionLabel;
use crate::preprocess::SegmentFrame;

/// How the time-domain set is computed from a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TdMode {
    /// Once, on the across-channel mean envelope (21 features).
    #[default]
    Aggregate,
    /// On every channel (21 × C features).
    PerChannel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeatureConfig {
    pub burg_order: usize,
    /// Frequency grid size for the Burg spectrum.
    pub psd_points: usize,
    pub n_bands: usize,
    pub td_threshold: TdThreshold,
    pub td_mode: TdMode,
    /// 1-based channel indices of each fourth-order cumulant group.
    pub hosa_groups: Vec<[usize; 4]>,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            burg_order: 4,
            psd_points: 100,
            n_bands: 10,
            td_threshold: TdThreshold::default(),
            td_mode: TdMode::Aggregate,
            hosa_groups: vec![[1, 2, 3, 4], [5, 6, 7, 8]],
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self, channels: usize, window_length: usize) -> Result<()> {
        if channels < 2 {
            return Err(Error::Config(format!("{channels} channel(s); need at least 2")));
        }
        if window_length < 4 {
            return Err(Error::TooShort {
                len: window_length,
                required: 4,
            });
        }
        if self.burg_order >= window_length {
            return Err(Error::Order {
                order: self.burg_order,
                len: window_length,
            });
        }
        if self.psd_points < 2 || self.n_bands == 0 || self.n_bands > self.psd_points {
            return Err(Error::Config(format!(
                "cannot split {} spectrum points into {} bands",
                self.psd_points, self.n_bands
            )));
        }
        for g in &self.hosa_groups {
            if g.iter().any(|&c| c == 0 || c > channels) {
                return Err(Error::Config(format!(
                    "HOSA group {g:?} references channels outside 1..={channels}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub label: ActionLabel,
    pub recording_id: String,
    pub window_index: usize,
}

impl FeatureVector {
    pub fn family<'a>(&'a self, layout: &FeatureLayout, family: FeatureFamily) -> &'a [f64] {
        &self.values[layout.range(family)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionWarning {
    pub recording_id: String,
    pub window_index: usize,
    pub family: FeatureFamily,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub vector: FeatureVector,
    pub warnings: Vec<ExtractionWarning>,
}

/// Band powers of every channel's Burg spectrum, channel-major. A channel
/// whose model cannot be fitted contributes zeros and its error.
pub fn psd_features(
    channels: &[Vec<f64>],
    order: usize,
    psd_points: usize,
    n_bands: usize,
) -> (Vec<f64>, Vec<(usize, Error)>) {
    let mut out = Vec::with_capacity(channels.len() * n_bands);
    let mut errors = Vec::new();
    for (c, ch) in channels.iter().enumerate() {
        match burg_psd(ch, order, psd_points).and_then(|p| band_powers(&p, n_bands)) {
            Ok(b) => out.extend(b),
            Err(e) => {
                out.extend(std::iter::repeat(0.0).take(n_bands));
                errors.push((c, e));
            }
        }
    }
    (out, errors)
}

fn across_channel_mean(data: &[Vec<f64>]) -> Vec<f64> {
    let w = data[0].len();
    let c = data.len() as f64;
    (0..w).map(|n| data.iter().map(|ch| ch[n]).sum::<f64>() / c).collect()
}

pub fn extract_features(frame: &SegmentFrame, cfg: &FeatureConfig) -> Result<Extraction> {
    let channels = frame.channel_count();
    let w = frame.window_length();
    cfg.validate(channels, w)?;
    if frame.data.iter().any(|ch| ch.len() != w) {
        return Err(Error::Config(format!(
            "frame {}#{} has ragged channels",
            frame.recording_id, frame.window_index
        )));
    }
    if frame.data.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "frame {}#{}",
            frame.recording_id, frame.window_index
        )));
    }

    let layout = FeatureLayout::new(channels, cfg);
    let mut values = Vec::with_capacity(layout.len());
    let mut warnings = Vec::new();
    let mut warn = |family: FeatureFamily, detail: String| {
        warnings.push(ExtractionWarning {
            recording_id: frame.recording_id.clone(),
            window_index: frame.window_index,
            family,
            detail,
        });
    };

    let pairs = channel_pairs(channels);
    let spectra: Vec<ics::CorrelationSpectrum> =
        frame.data.iter().map(|ch| ics::CorrelationSpectrum::new(ch)).collect();
    for &(i, j) in &pairs {
        match spectra[i - 1].max_similarity(&spectra[j - 1]) {
            Ok((v, _)) => values.push(v),
            Err(e) => {
                warn(FeatureFamily::Ics, format!("max similarity ({i}, {j}): {e}"));
                values.push(0.0);
            }
        }
    }
    for &(i, j) in &pairs {
        values.push(covariance_index(&frame.data[i - 1], &frame.data[j - 1])?);
    }

    let (psd, errors) = psd_features(&frame.data, cfg.burg_order, cfg.psd_points, cfg.n_bands);
    values.extend(psd);
    for (c, e) in errors {
        warn(FeatureFamily::Psd, format!("channel {}: {e}", c + 1));
    }

    for (c, ch) in frame.data.iter().enumerate() {
        match log_moment_features(ch) {
            Ok(f) => values.extend(f),
            Err(e) => {
                warn(FeatureFamily::Lmfs, format!("channel {}: {e}", c + 1));
                values.extend([0.0; LOG_MOMENT_COUNT]);
            }
        }
    }

    let td_inputs: Vec<Vec<f64>> = match cfg.td_mode {
        TdMode::Aggregate => vec![across_channel_mean(&frame.data)],
        TdMode::PerChannel => frame.data.clone(),
    };
    for x in &td_inputs {
        let td = time_domain_features(x, &cfg.td_threshold)?;
        if td.degenerate_shape {
            warn(
                FeatureFamily::Tds,
                "constant segment: kurtosis and skewness set to 0".into(),
            );
        }
        values.extend(td.values);
    }

    for ch in &frame.data {
        values.push(second_order_cumulant(ch)?);
    }
    for g in &cfg.hosa_groups {
        let group = [
            frame.data[g[0] - 1].as_slice(),
            frame.data[g[1] - 1].as_slice(),
            frame.data[g[2] - 1].as_slice(),
            frame.data[g[3] - 1].as_slice(),
        ];
        values.push(fourth_order_cross_cumulant(group)?);
    }

    debug_assert_eq!(values.len(), layout.len());
    for (i, v) in values.iter_mut().enumerate() {
        if !v.is_finite() {
            let family = FeatureFamily::ALL
                .into_iter()
                .find(|&f| layout.range(f).contains(&i))
                .expect("index inside layout");
            warn(family, format!("non-finite {} replaced by 0", layout.names[i]));
            *v = 0.0;
        }
    }

    Ok(Extraction {
        vector: FeatureVector {
            values,
            label: frame.action.clone(),
            recording_id: frame.recording_id.clone(),
            window_index: frame.window_index,
        },
        warnings,
    })
}

/// Extract every frame in parallel; output order follows input order.
pub fn extract_all(frames: &[SegmentFrame], cfg: &FeatureConfig) -> Result<Vec<Extraction>> {
    frames.par_iter().map(|f| extract_features(f, cfg)).collect()
}
