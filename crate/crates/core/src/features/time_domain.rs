//! The 21-feature time-domain set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TD_FEATURE_COUNT: usize = 21;

pub const TD_FEATURE_NAMES: [&str; TD_FEATURE_COUNT] = [
    "Amplitude", "RMS", "VAR", "WL", "MAV", "SSI", "ZC", "SSC", "WAMP", "IEMG", "LOG", "MYOP",
    "DASDV", "EMAV", "EWL", "MMAV", "MMAV2", "MFL", "AAC", "Kurtosis", "Skewness",
];

/// Threshold used by ZC, SSC, WAMP and MYOP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TdThreshold {
    /// Multiple of the segment's population standard deviation.
    RelativeToStd(f64),
    Absolute(f64),
}

impl Default for TdThreshold {
    fn default() -> Self {
        TdThreshold::RelativeToStd(0.05)
    }
}

impl TdThreshold {
    pub fn resolve(&self, x: &[f64]) -> f64 {
        match *self {
            TdThreshold::Absolute(t) => t,
            TdThreshold::RelativeToStd(r) => {
                let n = x.len() as f64;
                let mean = x.iter().sum::<f64>() / n;
                r * (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
            }
        }
    }
}

/// Time-domain features plus a flag raised when kurtosis and skewness were
/// undefined (constant segment) and reported as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TdFeatures {
    pub values: [f64; TD_FEATURE_COUNT],
    pub degenerate_shape: bool,
}

// Position-dependent exponent for EMAV/EWL (1-based sample index).
fn enhanced_exponent(i: usize, n: usize) -> f64 {
    let (i, n) = (i as f64, n as f64);
    if i >= 0.2 * n && i <= 0.8 * n {
        0.75
    } else {
        0.5
    }
}

pub fn time_domain_features(x: &[f64], threshold: &TdThreshold) -> Result<TdFeatures> {
    if x.len() < 4 {
        return Err(Error::TooShort {
            len: x.len(),
            required: 4,
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("time-domain input".into()));
    }
    let n = x.len();
    let nf = n as f64;
    let thr = threshold.resolve(x);

    let amplitude = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let ssi: f64 = x.iter().map(|v| v * v).sum();
    let rms = (ssi / nf).sqrt();
    let var = ssi / (nf - 1.0);
    let iemg: f64 = x.iter().map(|v| v.abs()).sum();
    let mav = iemg / nf;

    let diffs: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let wl: f64 = diffs.iter().map(|d| d.abs()).sum();
    let diff_sq: f64 = diffs.iter().map(|d| d * d).sum();
    let dasdv = (diff_sq / (nf - 1.0)).sqrt();
    let aac = wl / nf;
    let mfl = if diff_sq > 0.0 { diff_sq.sqrt().log10() } else { 0.0 };

    let zc = x
        .windows(2)
        .filter(|w| w[0] * w[1] < 0.0 && (w[0] - w[1]).abs() > thr)
        .count() as f64;
    let ssc = x
        .windows(3)
        .filter(|w| (w[1] - w[0]) * (w[1] - w[2]) > thr)
        .count() as f64;
    let wamp = diffs.iter().filter(|d| d.abs() > thr).count() as f64;
    let myop = x.iter().filter(|v| v.abs() > thr).count() as f64 / nf;

    let log = if x.contains(&0.0) {
        0.0
    } else {
        (x.iter().map(|v| v.abs().ln()).sum::<f64>() / nf).exp()
    };

    let emav = x
        .iter()
        .enumerate()
        .map(|(i, v)| v.abs().powf(enhanced_exponent(i + 1, n)))
        .sum::<f64>()
        / nf;
    let ewl: f64 = diffs
        .iter()
        .enumerate()
        .map(|(i, d)| d.abs().powf(enhanced_exponent(i + 2, n)))
        .sum();

    let mmav = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let p = (i + 1) as f64;
            let w = if p >= 0.25 * nf && p <= 0.75 * nf { 1.0 } else { 0.5 };
            w * v.abs()
        })
        .sum::<f64>()
        / nf;
    let mmav2 = x
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let p = (i + 1) as f64;
            let w = if p < 0.25 * nf {
                4.0 * p / nf
            } else if p <= 0.75 * nf {
                1.0
            } else {
                4.0 * (nf - p) / nf
            };
            w * v.abs()
        })
        .sum::<f64>()
        / nf;

    let mean = x.iter().sum::<f64>() / nf;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / nf;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
    let degenerate_shape = m2 <= f64::MIN_POSITIVE;
    let (kurtosis, skewness) = if degenerate_shape {
        (0.0, 0.0)
    } else {
        (m4 / (m2 * m2), m3 / m2.powf(1.5))
    };

    Ok(TdFeatures {
        values: [
            amplitude, rms, var, wl, mav, ssi, zc, ssc, wamp, iemg, log, myop, dasdv, emav, ewl,
            mmav, mmav2, mfl, aac, kurtosis, skewness,
        ],
        degenerate_shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_input() {
        let f = time_domain_features(&[0.0; 64], &TdThreshold::default()).unwrap();
        assert!(f.values.iter().all(|v| *v == 0.0), "{:?}", f.values);
        assert!(f.degenerate_shape);
    }

    #[test]
    fn alternating_sequence_closed_forms() {
        let x: Vec<f64> = (0..1000).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let f = time_domain_features(&x, &TdThreshold::Absolute(0.0)).unwrap().values;
        let get = |name: &str| f[TD_FEATURE_NAMES.iter().position(|n| *n == name).unwrap()];
        assert_eq!(get("ZC"), 999.0);
        assert_eq!(get("WL"), 1998.0);
        assert_eq!(get("RMS"), 1.0);
        assert_eq!(get("MAV"), 1.0);
        assert_eq!(get("Amplitude"), 1.0);
        assert_eq!(get("SSC"), 998.0);
        assert_eq!(get("LOG"), 1.0);
        assert_eq!(get("Skewness"), 0.0);
        assert_eq!(get("Kurtosis"), 1.0);
    }

    #[test]
    fn too_short_is_rejected() {
        assert!(matches!(
            time_domain_features(&[1.0, 2.0, 3.0], &TdThreshold::default()),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn relative_threshold_scales_with_spread() {
        let x = [1.0, -1.0, 1.0, -1.0];
        assert!((TdThreshold::RelativeToStd(0.5).resolve(&x) - 0.5).abs() < 1e-15);
        assert_eq!(TdThreshold::Absolute(0.3).resolve(&x), 0.3);
    }
}
