//! Burg autoregressive spectral estimation and band powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Autoregressive model in the convention `x[n] + Σ a_m x[n-m] = e[n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArModel {
    /// `a_1..a_p`.
    pub coefficients: Vec<f64>,
    pub reflection_coefficients: Vec<f64>,
    /// Prediction-error variance after each order `0..=p`.
    pub error_variances: Vec<f64>,
}

impl ArModel {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Final prediction-error variance.
    pub fn sigma2(&self) -> f64 {
        *self.error_variances.last().expect("order 0 variance always present")
    }
}

/// Fit an AR model of the given order with Burg's recursion on the
/// mean-removed signal.
pub fn burg_ar(x: &[f64], order: usize) -> Result<ArModel> {
    if order >= x.len() {
        return Err(Error::Order { order, len: x.len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Burg input".into()));
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::ConstantSignal);
    }
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut fwd: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let mut bwd = fwd.clone();

    let mut a = vec![1.0];
    let mut sigma2 = fwd.iter().map(|v| v * v).sum::<f64>() / n as f64;
    let mut variances = vec![sigma2];
    let mut reflections = Vec::with_capacity(order);

    for m in 1..=order {
        let mut num = 0.0;
        let mut den = 0.0;
        for t in m..n {
            num += fwd[t] * bwd[t - 1];
            den += fwd[t] * fwd[t] + bwd[t - 1] * bwd[t - 1];
        }
        let k = if den > 0.0 { (-2.0 * num / den).clamp(-1.0, 1.0) } else { 0.0 };

        a.push(0.0);
        let prev = a.clone();
        for i in 1..=m {
            a[i] = prev[i] + k * prev[m - i];
        }
        for t in (m..n).rev() {
            let f = fwd[t];
            fwd[t] = f + k * bwd[t - 1];
            bwd[t] = bwd[t - 1] + k * f;
        }
        sigma2 *= 1.0 - k * k;
        variances.push(sigma2);
        reflections.push(k);
    }

    Ok(ArModel {
        coefficients: a[1..].to_vec(),
        reflection_coefficients: reflections,
        error_variances: variances,
    })
}

/// Spectral density `σ² / |1 + Σ a_m e^{-imw}|²` of an AR model on
/// `n_freq` evenly spaced frequencies spanning `[0, π]`.
pub fn ar_spectrum(model: &ArModel, n_freq: usize) -> Vec<f64> {
    let sigma2 = model.sigma2();
    (0..n_freq)
        .map(|k| {
            let w = if n_freq > 1 {
                std::f64::consts::PI * k as f64 / (n_freq - 1) as f64
            } else {
                0.0
            };
            let (mut re, mut im) = (1.0, 0.0);
            for (m, a) in model.coefficients.iter().enumerate() {
                let phase = w * (m + 1) as f64;
                re += a * phase.cos();
                im -= a * phase.sin();
            }
            if sigma2 == 0.0 {
                0.0
            } else {
                sigma2 / (re * re + im * im)
            }
        })
        .collect()
}

pub fn burg_psd(x: &[f64], order: usize, n_freq: usize) -> Result<Vec<f64>> {
    if n_freq < 2 {
        return Err(Error::Config(format!("n_freq {n_freq} must be at least 2")));
    }
    Ok(ar_spectrum(&burg_ar(x, order)?, n_freq))
}

/// Sum the spectrum over `n_bands` contiguous index ranges of near-equal size;
/// the first `len % n_bands` bands take one extra bin.
pub fn band_powers(psd: &[f64], n_bands: usize) -> Result<Vec<f64>> {
    if n_bands == 0 || n_bands > psd.len() {
        return Err(Error::Config(format!(
            "cannot split {} bins into {n_bands} bands",
            psd.len()
        )));
    }
    let base = psd.len() / n_bands;
    let extra = psd.len() % n_bands;
    let mut out = Vec::with_capacity(n_bands);
    let mut start = 0;
    for b in 0..n_bands {
        let width = base + usize::from(b < extra);
        out.push(psd[start..start + width].iter().sum());
        start += width;
    }
    Ok(out)
}
