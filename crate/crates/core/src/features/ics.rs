//! Inter-channel statistics.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dim {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooShort {
            len: a.len(),
            required: 2,
        });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("inter-channel input".into()));
    }
    Ok(())
}

/// Precomputed spectrum of one channel for repeated correlation against others.
pub(crate) struct CorrelationSpectrum {
    spectrum: Vec<Complex64>,
    energy: f64,
    len: usize,
}

impl CorrelationSpectrum {
    pub(crate) fn new(x: &[f64]) -> Self {
        let padded = (2 * x.len()).saturating_sub(1).next_power_of_two();
        Self {
            spectrum: fft::forward_real(x, padded),
            energy: x.iter().map(|v| v * v).sum(),
            len: x.len(),
        }
    }

    /// Peak of the energy-normalized linear cross-correlation
    /// `Σ_n a[n] b[n + lag]` over lags in `(-W, W)`, with its lag.
    pub(crate) fn max_similarity(&self, other: &Self) -> Result<(f64, isize)> {
        if self.energy == 0.0 || other.energy == 0.0 {
            return Err(Error::ZeroEnergy);
        }
        let mut prod: Vec<Complex64> = self
            .spectrum
            .iter()
            .zip(&other.spectrum)
            .map(|(a, b)| a.conj() * b)
            .collect();
        fft::inverse(&mut prod);
        let p = prod.len();
        let w = self.len as isize;
        let (mut best, mut best_lag) = (f64::NEG_INFINITY, 0isize);
        for lag in -(w - 1)..w {
            let idx = if lag >= 0 { lag as usize } else { (p as isize + lag) as usize };
            let v = prod[idx].re;
            if v > best {
                best = v;
                best_lag = lag;
            }
        }
        let norm = (self.energy * other.energy).sqrt();
        Ok(((best / norm).clamp(-1.0, 1.0), best_lag))
    }
}

/// Maximum of the normalized cross-correlation between two equal-length
/// segments, together with the lag of `b` relative to `a` where it occurs.
pub fn max_similarity_lag(a: &[f64], b: &[f64]) -> Result<(f64, isize)> {
    check_pair(a, b)?;
    CorrelationSpectrum::new(a).max_similarity(&CorrelationSpectrum::new(b))
}

pub fn max_similarity_index(a: &[f64], b: &[f64]) -> Result<f64> {
    max_similarity_lag(a, b).map(|(v, _)| v)
}

/// Sample covariance at lag zero, normalized by `W - 1`.
pub fn covariance_index(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    Ok(s / (n - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct lag scan.
    fn brute_force(a: &[f64], b: &[f64]) -> (f64, isize) {
        let w = a.len() as isize;
        let ea: f64 = a.iter().map(|v| v * v).sum();
        let eb: f64 = b.iter().map(|v| v * v).sum();
        let mut best = (f64::NEG_INFINITY, 0);
        for lag in -(w - 1)..w {
            let mut s = 0.0;
            for n in 0..w {
                let m = n + lag;
                if (0..w).contains(&m) {
                    s += a[n as usize] * b[m as usize];
                }
            }
            if s > best.0 {
                best = (s, lag);
            }
        }
        (best.0 / (ea * eb).sqrt(), best.1)
    }

    #[test]
    fn self_similarity_is_one() {
        let a: Vec<f64> = (0..100).map(|n| ((n * 13 % 7) as f64).sin() + 0.1).collect();
        let (v, lag) = max_similarity_lag(&a, &a).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(lag, 0);
    }

    #[test]
    fn delayed_pulse_peaks_at_its_delay() {
        let w = 200;
        let mut a = vec![0.0; w];
        a[10..30].iter_mut().for_each(|v| *v = 1.0);
        for d in [1usize, 7, 33, 49] {
            let mut b = vec![0.0; w];
            b[10 + d..30 + d].iter_mut().for_each(|v| *v = 1.0);
            let (v, lag) = max_similarity_lag(&a, &b).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
            assert_eq!(lag, d as isize);
            assert_eq!(brute_force(&a, &b).1, d as isize);
        }
    }

    #[test]
    fn quadrature_sequences_peak_near_one_at_unit_lag() {
        let a: Vec<f64> = (0..64).map(|n| [1.0, 0.0, -1.0, 0.0][n % 4]).collect();
        let b: Vec<f64> = (0..64).map(|n| [0.0, 1.0, 0.0, -1.0][n % 4]).collect();
        let (v, lag) = max_similarity_lag(&a, &b).unwrap();
        let (ov, olag) = brute_force(&a, &b);
        assert!((v - ov).abs() < 1e-12);
        assert_eq!(lag, olag);
        assert_eq!(lag, 1);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_energy_is_an_error() {
        assert!(matches!(
            max_similarity_index(&[0.0; 8], &[1.0; 8]),
            Err(Error::ZeroEnergy)
        ));
    }

    #[test]
    fn covariance_examples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [2.0, 4.0, 6.0, 8.0];
        assert!((covariance_index(&a, &b).unwrap() - 10.0 / 3.0).abs() < 1e-15);
        assert_eq!(covariance_index(&a, &[5.0; 4]).unwrap(), 0.0);
        let var = a.iter().map(|v| (v - 2.5f64).powi(2)).sum::<f64>() / 3.0;
        assert!((covariance_index(&a, &a).unwrap() - var).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn matches_lag_scan_and_is_symmetric(
            pair in (2usize..80).prop_flat_map(|n| (
                proptest::collection::vec(-5.0f64..5.0, n),
                proptest::collection::vec(-5.0f64..5.0, n),
            ))
        ) {
            let (a, b) = pair;
            prop_assume!(a.iter().any(|v| v.abs() > 1e-3) && b.iter().any(|v| v.abs() > 1e-3));
            let ab = max_similarity_index(&a, &b).unwrap();
            let ba = max_similarity_index(&b, &a).unwrap();
            let (oracle, _) = brute_force(&a, &b);
            prop_assert!((ab - oracle).abs() < 1e-9);
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!((-1.0..=1.0).contains(&ab));
        }
    }
}
