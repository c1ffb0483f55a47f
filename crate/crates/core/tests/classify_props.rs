use myoact_core::classify::{elm_train, svm_train, Activation, ClassifierConfig, ElmConfig, Kernel, SvmParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn blobs(seed: u64, n_classes: usize, per_class: usize, d: usize, spread: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..n_classes)
        .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (c, ctr) in centers.iter().enumerate() {
        for _ in 0..per_class {
            x.push(ctr.iter().map(|m| m + spread * rng.sample::<f64, _>(StandardNormal)).collect());
            y.push(c);
        }
    }
    (x, y)
}

#[test]
fn svm_dual_feasibility() {
    for seed in 0..6 {
        let (x, y) = blobs(seed, 3, 25, 5, 1.2);
        for (c, kernel) in [(1.0, Kernel::default()), (10.0, Kernel::default()), (0.5, Kernel::Linear)] {
            let params = SvmParams {
                c,
                kernel,
                ..SvmParams::default()
            };
            let m = svm_train(&x, &y, 3, &params).unwrap();
            assert_eq!(m.machines.len(), 3);
            for mach in &m.machines {
                let mut balance = 0.0;
                for (a, t) in mach.alphas.iter().zip(&mach.targets) {
                    assert!(*a >= 0.0 && *a <= c, "alpha {a} outside [0, {c}]");
                    balance += a * t;
                }
                assert!(balance.abs() <= 1e-6, "sum alpha y = {balance}");
            }
        }
    }
}

#[test]
fn separable_training_points_are_recovered() {
    let (x, y) = blobs(42, 4, 20, 6, 0.1);
    let m = svm_train(&x, &y, 4, &SvmParams::default()).unwrap();
    for (r, &c) in x.iter().zip(&y) {
        assert_eq!(m.predict(r).unwrap(), c);
    }
}

#[test]
fn predictions_ignore_test_row_order() {
    let (x, y) = blobs(7, 3, 30, 4, 1.5);
    let (test, _) = blobs(8, 3, 10, 4, 2.0);
    for cfg in [
        ClassifierConfig::knn(3),
        ClassifierConfig::svm(),
        ClassifierConfig::elm(Activation::Relu),
    ] {
        let m = cfg.train(&x, &y, 3).unwrap();
        let forward = m.predict_all(&test).unwrap();
        let reversed: Vec<Vec<f64>> = test.iter().rev().cloned().collect();
        let mut back = m.predict_all(&reversed).unwrap();
        back.reverse();
        assert_eq!(forward, back, "{}", cfg.name());
    }
}

#[test]
fn elm_memorizes_small_training_sets() {
    let (x, y) = blobs(3, 4, 40, 20, 1.0);
    for activation in Activation::ALL {
        let cfg = ElmConfig {
            n_hidden: 200,
            activation,
            seed: 11,
        };
        let m = elm_train(&x, &y, 4, &cfg).unwrap();
        let hits = x.iter().zip(&y).filter(|(r, &c)| m.predict(r).unwrap() == c).count();
        let acc = hits as f64 / x.len() as f64;
        let floor = if activation == Activation::Smax { 0.95 } else { 0.99 };
        assert!(acc >= floor, "{activation}: {acc}");
    }
}

#[test]
fn elm_seed_controls_hidden_layer() {
    let (x, y) = blobs(4, 2, 10, 3, 1.0);
    let a = elm_train(&x, &y, 2, &ElmConfig::default()).unwrap();
    let b = elm_train(&x, &y, 2, &ElmConfig::default()).unwrap();
    let c = elm_train(&x, &y, 2, &ElmConfig { seed: 1, ..ElmConfig::default() }).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.input_weights, c.input_weights);
    assert!(a.input_weights.iter().flatten().all(|w| (-1.0..=1.0).contains(w)));
}
