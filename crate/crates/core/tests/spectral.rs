use std::f64::consts::PI;

use myoact_core::features::{band_powers, burg_ar, burg_psd, psd_features};
use myoact_core::ingest::{generate_synthetic_dataset, ClassSpec, SynthSpec};
use myoact_core::preprocess::{preprocess_recording, WindowingConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

#[test]
fn planted_sinusoid_peak_at_ten_db() {
    let n_freq = 100;
    let bin = PI / (n_freq - 1) as f64;
    for trial in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let w: f64 = rng.random_range(0.1 * PI..0.9 * PI);
        let phase: f64 = rng.random_range(0.0..2.0 * PI);
        // Unit-amplitude tone has power 1/2; 10 dB SNR puts noise power at 0.05.
        let sigma = (0.5f64 / 10.0).sqrt();
        let x: Vec<f64> = (0..1000)
            .map(|t| (w * t as f64 + phase).cos() + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let psd = burg_psd(&x, 8, n_freq).unwrap();
        let peak = argmax(&psd) as f64 * bin;
        assert!((peak - w).abs() <= bin, "trial {trial}: peak {peak} vs {w}");
    }
}

#[test]
fn ar1_coefficient_recovered() {
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = vec![0.0f64; 4096];
        for n in 1..x.len() {
            x[n] = 0.9 * x[n - 1] + rng.sample::<f64, _>(StandardNormal);
        }
        let m = burg_ar(&x, 1).unwrap();
        assert!((m.coefficients[0] + 0.9).abs() <= 0.03, "{:?}", m.coefficients);
    }
}

#[test]
fn band_powers_conserve_total() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let len = rng.random_range(10..400);
        let bands = rng.random_range(1..=10);
        let psd: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..1e3)).collect();
        let b = band_powers(&psd, bands).unwrap();
        let total: f64 = psd.iter().sum();
        let banded: f64 = b.iter().sum();
        assert!((total - banded).abs() <= 1e-12 * total, "{total} vs {banded}");
    }
}

#[test]
fn carrier_frequency_moves_the_dominant_band() {
    let class = |name: &str, carrier: f64| ClassSpec {
        name: name.into(),
        noise_power: vec![1.0; 8],
        noise_band_hz: (10.0, 400.0),
        shared_fraction: 0.2,
        burst_rate_hz: 0.0,
        burst_duration_s: 0.1,
        burst_depth: 0.0,
        carriers_hz: vec![carrier],
        carrier_amplitude: 0.0,
        modulation_depth: 0.9,
    };
    let spec = SynthSpec {
        recordings_per_class: 1,
        samples: 4000,
        classes: vec![class("Slow", 20.0), class("Fast", 80.0)],
        ..SynthSpec::default()
    };
    let recs = generate_synthetic_dataset(&spec, 5).unwrap();
    let windowing = WindowingConfig::default();
    let dominant = |r: usize| -> Vec<Vec<usize>> {
        preprocess_recording(&recs[r], &windowing)
            .unwrap()
            .iter()
            .map(|f| {
                let (v, errors) = psd_features(&f.data, 4, 100, 10);
                assert!(errors.is_empty());
                v.chunks(10).map(argmax).collect()
            })
            .collect()
    };
    let slow = dominant(0);
    let fast = dominant(1);
    for (s, f) in slow.iter().zip(&fast) {
        for c in 0..8 {
            assert_ne!(s[c], f[c], "channel {c}: {s:?} vs {f:?}");
        }
    }
}
