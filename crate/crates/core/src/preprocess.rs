//! Envelope extraction and overlapping segmentation.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::ingest::{ActionLabel, Recording};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowingConfig {
    pub window_length: usize,
    pub overlap: f64,
}

impl Default for WindowingConfig {
    fn default() -> Self {
        Self {
            window_length: 1000,
            overlap: 0.25,
        }
    }
}

impl WindowingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_length == 0 {
            return Err(Error::Config("window_length must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(Error::Config(format!(
                "overlap {} outside [0, 1)",
                self.overlap
            )));
        }
        if self.stride() == 0 {
            return Err(Error::Config("window stride rounds to zero".into()));
        }
        Ok(())
    }

    pub fn stride(&self) -> usize {
        (self.window_length as f64 * (1.0 - self.overlap)).round() as usize
    }

    /// Number of full windows that fit in `len` samples.
    pub fn window_count(&self, len: usize) -> usize {
        if len < self.window_length {
            0
        } else {
            (len - self.window_length) / self.stride() + 1
        }
    }
}

/// One C×W block of envelope samples taken from the same sample range of
/// every channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentFrame {
    pub data: Vec<Vec<f64>>,
    pub recording_id: String,
    pub window_index: usize,
    pub action: ActionLabel,
}

impl SegmentFrame {
    pub fn channel_count(&self) -> usize {
        self.data.len()
    }

    pub fn window_length(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }
}

/// Magnitude of the analytic signal. The transform runs over the next power
/// of two with zero padding; the output is truncated back to the input length.
pub fn upper_envelope(signal: &[f64]) -> Result<Vec<f64>> {
    if signal.len() < 2 {
        return Err(Error::TooShort {
            len: signal.len(),
            required: 2,
        });
    }
    if signal.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("envelope input".into()));
    }
    let n = signal.len().next_power_of_two();
    let mut spec = fft::forward_real(signal, n);
    let half = n / 2;
    for (k, bin) in spec.iter_mut().enumerate() {
        if k == 0 || k == half {
            continue;
        } else if k < half {
            *bin *= 2.0;
        } else {
            *bin = Complex64::new(0.0, 0.0);
        }
    }
    fft::inverse(&mut spec);
    Ok(spec[..signal.len()].iter().map(|c| c.norm()).collect())
}

/// Split a signal into windows of `window_length` samples advancing by the
/// configured stride. A trailing partial window is dropped.
pub fn segment(signal: &[f64], cfg: &WindowingConfig) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    if signal.len() < cfg.window_length {
        return Err(Error::TooShort {
            len: signal.len(),
            required: cfg.window_length,
        });
    }
    let stride = cfg.stride();
    Ok((0..cfg.window_count(signal.len()))
        .map(|k| signal[k * stride..k * stride + cfg.window_length].to_vec())
        .collect())
}

/// Envelope every channel over the whole recording, then window all channels
/// on the same sample ranges.
pub fn preprocess_recording(r: &Recording, cfg: &WindowingConfig) -> Result<Vec<SegmentFrame>> {
    r.validate()?;
    cfg.validate()?;
    if r.sample_count() < cfg.window_length {
        return Err(Error::TooShort {
            len: r.sample_count(),
            required: cfg.window_length,
        });
    }
    let per_channel: Vec<Vec<Vec<f64>>> = r
        .channels
        .iter()
        .map(|ch| segment(&upper_envelope(ch)?, cfg))
        .collect::<Result<_>>()?;
    let count = per_channel[0].len();
    let mut columns: Vec<std::vec::IntoIter<Vec<f64>>> =
        per_channel.into_iter().map(Vec::into_iter).collect();
    Ok((0..count)
        .map(|k| SegmentFrame {
            data: columns.iter_mut().map(|c| c.next().expect("equal counts")).collect(),
            recording_id: r.id.clone(),
            window_index: k,
            action: r.action.clone(),
        })
        .collect())
}
