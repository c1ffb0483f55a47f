mod support;

use myoact_core::classify::{Activation, ClassifierConfig, ElmConfig};
use myoact_core::eval::{
    compute_metrics, cross_validate, elm_protocol, pca_accuracy_sweep, ConfusionMatrix,
};
use myoact_core::features::FeatureSubsetSpec;
use myoact_core::pipeline::{PcaDims, PipelineConfig};
use myoact_core::Error;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn positive_control_and_row_order_invariance() {
    let data = support::synthetic_features(7);
    let subset = FeatureSubsetSpec::parse("ICS + Freq").unwrap();
    let clf = ClassifierConfig::knn(1);
    let pipe = PipelineConfig::default();
    let cv = cross_validate(&data, &subset, &clf, &pipe, 10, 5).unwrap();
    assert!(cv.metrics.accuracy >= 0.90, "{}", cv.metrics.accuracy);
    assert_eq!(cv.confusion.total(), data.len() as u64);
    assert_eq!(cv.fold_accuracies.len(), 10);

    let mut shuffled = data.clone();
    shuffled.rows.shuffle(&mut ChaCha8Rng::seed_from_u64(99));
    let again = cross_validate(&shuffled, &subset, &clf, &pipe, 10, 5).unwrap();
    assert_eq!(again, cv);

    let svm = cross_validate(&data, &subset, &ClassifierConfig::svm(), &pipe, 10, 5).unwrap();
    let svm2 = cross_validate(&shuffled, &subset, &ClassifierConfig::svm(), &pipe, 10, 5).unwrap();
    assert_eq!(svm.confusion, svm2.confusion);
}

#[test]
fn guards_propagate() {
    let data = support::synthetic_features(8);
    let all = FeatureSubsetSpec::all();
    let pipe = PipelineConfig::default();
    assert!(matches!(
        cross_validate(&data, &all, &ClassifierConfig::knn(1), &pipe, 1, 0),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        cross_validate(&data, &all, &ClassifierConfig::knn(1), &pipe, 60, 0),
        Err(Error::Stratification { .. })
    ));
}

#[test]
fn elm_protocol_shape_and_regime() {
    let data = support::synthetic_features(7);
    let cfg = ElmConfig {
        activation: Activation::Sig,
        ..ElmConfig::default()
    };
    let o = elm_protocol(&data, &FeatureSubsetSpec::all(), &cfg, &PipelineConfig::default(), 20, 0.8, 3).unwrap();
    assert_eq!(o.tries.len(), 20);
    assert!(o.train_rows <= 200);
    assert!(o.mean_train >= 0.99);
    assert!(o.mean_test < o.mean_train);
    assert_eq!(o.classifier, "ELM-sig");
}

#[test]
fn pca_sweep_rows_and_full_rank_agreement() {
    let data = support::synthetic_features(9);
    let subset = FeatureSubsetSpec::parse("ICS + Freq").unwrap();
    let dims = [
        PcaDims::Fixed(5),
        PcaDims::FULL,
        PcaDims::Fixed(2),
        PcaDims::Fixed(26),
        PcaDims::Fixed(10),
        PcaDims::Fixed(50),
    ];
    let s = pca_accuracy_sweep(&data, &subset, &ClassifierConfig::knn(1), &PipelineConfig::default(), &dims, 10, 1)
        .unwrap();
    assert_eq!(s.rows.len(), 6);
    assert!(s.rows.windows(2).all(|w| w[0].components >= w[1].components));
    assert_eq!(s.rows[0].requested, PcaDims::FULL);
    assert!((s.rows[0].accuracy - s.baseline_accuracy).abs() * 100.0 <= 0.5);
    let knee = s.smallest_within(5.0).unwrap();
    assert!((s.baseline_accuracy - knee.accuracy) * 100.0 <= 5.0 + 1e-12);
}

#[test]
fn kappa_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.random_range(2..6);
        // Rows proportional to the column marginals give chance agreement.
        let cols: Vec<u64> = (0..n).map(|_| rng.random_range(1..6)).collect();
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                let s = rng.random_range(1..5);
                cols.iter().map(|c| c * s).collect()
            })
            .collect();
        let m = compute_metrics(&ConfusionMatrix::from_counts(rows).unwrap()).unwrap();
        assert!(m.cohens_kappa.abs() < 1e-12, "{}", m.cohens_kappa);

        let diag: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rng.random_range(0..9) } else { 0 }).collect())
            .collect();
        if diag.iter().flatten().sum::<u64>() > 0 {
            let m = compute_metrics(&ConfusionMatrix::from_counts(diag).unwrap()).unwrap();
            assert_eq!(m.cohens_kappa, 1.0);
        }

        let any: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..20)).collect()).collect();
        let cm = ConfusionMatrix::from_counts(any).unwrap();
        if cm.total() > 0 {
            let m = compute_metrics(&cm).unwrap();
            let mean = m.per_class.iter().map(|c| c.sensitivity).sum::<f64>() / n as f64;
            assert_eq!(m.balanced_accuracy, mean);
            let off_diagonal = (0..n).any(|i| (0..n).any(|j| i != j && cm.counts[i][j] > 0));
            assert_eq!(m.cohens_kappa == 1.0, !off_diagonal);
            assert!((-1.0..=1.0).contains(&m.cohens_kappa));
        }
    }
    let m = compute_metrics(&ConfusionMatrix::from_counts(vec![vec![45, 5], vec![10, 40]]).unwrap()).unwrap();
    assert_eq!(m.cohens_kappa, 0.70);
}
