//! Log moments of the Fourier magnitude spectrum.

use crate::error::{Error, Result};
use crate::fft;

pub const LOG_MOMENT_COUNT: usize = 17;

const LOG_FLOOR: f64 = 1e-12;

/// Moment-product pairs `(i, j)`, `1 <= i < j <= 5`, in lexicographic order.
pub const MOMENT_PAIRS: [(usize, usize); 10] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

fn guarded_ln(v: f64) -> f64 {
    v.abs().max(LOG_FLOOR).ln()
}

/// One-sided DFT magnitudes `|X[k]|` for `k = 1..=W/2` (DC excluded).
pub fn magnitude_spectrum(x: &[f64]) -> Vec<f64> {
    let spec = fft::forward_real(x, x.len());
    spec[1..=x.len() / 2].iter().map(|c| c.norm()).collect()
}

/// `g(i) = sqrt(Σ_k k^i ψ(k))` for `i = 0..=6`, with `k` starting at 1.
pub fn spectral_moments(psi: &[f64]) -> [f64; 7] {
    let mut g = [0.0; 7];
    for (i, gi) in g.iter_mut().enumerate() {
        *gi = psi
            .iter()
            .enumerate()
            .map(|(k, p)| ((k + 1) as f64).powi(i as i32) * p)
            .sum::<f64>()
            .sqrt();
    }
    g
}

/// The 17 log-moment descriptors of a moment vector `g(0..=6)`.
pub fn log_moments_from(g: &[f64; 7]) -> [f64; LOG_MOMENT_COUNT] {
    let ln = guarded_ln;
    let mut f = [0.0; LOG_MOMENT_COUNT];
    f[0] = ln(g[0]);
    f[1] = ln(g[2]);
    f[2] = ln(g[4]);
    f[3] = ln(g[0]) - 0.5 * ln(g[0] - g[2]) - 0.5 * ln(g[0] - g[4]);
    f[4] = ln(g[2]) - 0.5 * ln(g[0] * g[4]);
    f[5] = ln(g[0]) - 0.5 * ln(g[1] * g[3]);
    f[6] = ln(g[0]) - 0.5 * ln(g[2] * g[6]);
    for (n, &(i, j)) in MOMENT_PAIRS.iter().enumerate() {
        f[7 + n] = 0.5 * ln(g[i] * g[j]);
    }
    f
}

pub fn log_moment_features(x: &[f64]) -> Result<[f64; LOG_MOMENT_COUNT]> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            len: x.len(),
            required: 2,
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("log-moment input".into()));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroEnergy);
    }
    Ok(log_moments_from(&spectral_moments(&magnitude_spectrum(x))))
}
