#![allow(dead_code)]

pub mod oracles;

use myoact_core::dataset::{extract_dataset, FeatureDataset};
use myoact_core::features::FeatureConfig;
use myoact_core::ingest::{generate_synthetic_dataset, SynthSpec};
use myoact_core::preprocess::{SegmentFrame, WindowingConfig};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Default synthetic dataset (208 segments) featurized with default settings.
pub fn synthetic_features(seed: u64) -> FeatureDataset {
    let spec = SynthSpec::default();
    let recs = generate_synthetic_dataset(&spec, seed).unwrap();
    extract_dataset(
        &spec.label_set().unwrap(),
        &recs,
        &WindowingConfig::default(),
        &FeatureConfig::default(),
    )
    .unwrap()
    .0
}

/// An 8×`w` frame of random envelope-like rows. Some draws are degenerate:
/// all-zero channels, constant channels, identical channels.
pub fn random_frame(rng: &mut ChaCha8Rng, w: usize) -> SegmentFrame {
    let data = (0..8)
        .map(|_| {
            let kind = rng.random_range(0..40);
            let level: f64 = rng.random_range(0.0..5.0);
            match kind {
                0 => vec![0.0; w],
                1 => vec![level; w],
                _ => {
                    let scale: f64 = 10f64.powf(rng.random_range(-3.0..3.0));
                    let f: f64 = rng.random_range(0.001..0.45);
                    (0..w)
                        .map(|n| {
                            let g: f64 = rng.sample(StandardNormal);
                            scale * (level + (2.0 * std::f64::consts::PI * f * n as f64).sin() + g).abs()
                        })
                        .collect()
                }
            }
        })
        .collect::<Vec<Vec<f64>>>();
    let mut data = data;
    if rng.random_range(0..20) == 0 {
        let first = data[0].clone();
        data.iter_mut().for_each(|c| c.clone_from(&first));
    }
    SegmentFrame {
        data,
        recording_id: "random".into(),
        window_index: 0,
        action: myoact_core::ingest::ActionLabel {
            name: "Rest".into(),
            index: 0,
        },
    }
}
