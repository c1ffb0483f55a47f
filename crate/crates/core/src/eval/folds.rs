use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

fn class_members(labels: &[usize]) -> Vec<Vec<usize>> {
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); n_classes];
    for (i, &c) in labels.iter().enumerate() {
        members[c].push(i);
    }
    members
}

/// Partition row indices into `k` folds with per-class sizes differing by at
/// most one. Each class is shuffled and dealt round-robin; the dealing
/// position carries over between classes so fold sizes stay balanced too.
/// Fold contents are sorted.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Config(format!("cross-validation needs k >= 2, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (class, mut members) in class_members(labels).into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        if members.len() < k {
            return Err(Error::Stratification {
                class,
                count: members.len(),
                folds: k,
            });
        }
        members.shuffle(&mut rng);
        for idx in members {
            folds[next].push(idx);
            next = (next + 1) % k;
        }
    }
    folds.iter_mut().for_each(|f| f.sort_unstable());
    Ok(folds)
}

/// Shuffled split keeping `round(train_fraction · n_c)` rows of every class
/// `c` for training (at least one row on each side). Returns sorted
/// `(train, test)` indices.
pub fn stratified_split(labels: &[usize], train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!("train fraction {train_fraction} must lie in (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut members) in class_members(labels).into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        if members.len() < 2 {
            return Err(Error::Stratification {
                class,
                count: members.len(),
                folds: 2,
            });
        }
        members.shuffle(&mut rng);
        let n_train = ((members.len() as f64 * train_fraction).round() as usize).clamp(1, members.len() - 1);
        train.extend_from_slice(&members[..n_train]);
        test.extend_from_slice(&members[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_forty_into_ten() {
        let labels: Vec<usize> = (0..40).map(|i| i % 4).collect();
        let folds = stratified_kfold(&labels, 10, 3).unwrap();
        assert_eq!(folds.len(), 10);
        for f in &folds {
            assert_eq!(f.len(), 4);
            let mut classes: Vec<usize> = f.iter().map(|&i| labels[i]).collect();
            classes.sort();
            assert_eq!(classes, vec![0, 1, 2, 3]);
        }
        let mut all: Vec<usize> = folds.concat();
        all.sort();
        assert_eq!(all, (0..40).collect::<Vec<_>>());
        assert_eq!(stratified_kfold(&labels, 10, 3).unwrap(), folds);
        assert_ne!(stratified_kfold(&labels, 10, 4).unwrap(), folds);
    }

    #[test]
    fn uneven_classes_stay_within_one() {
        let labels: Vec<usize> = (0..103).map(|i| usize::from(i >= 52)).collect();
        let folds = stratified_kfold(&labels, 10, 0).unwrap();
        for c in 0..2 {
            let per: Vec<usize> = folds.iter().map(|f| f.iter().filter(|&&i| labels[i] == c).count()).collect();
            assert!(per.iter().max().unwrap() - per.iter().min().unwrap() <= 1);
        }
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn small_class_and_small_k_are_rejected() {
        let labels = [0, 0, 0, 1, 1];
        assert!(matches!(
            stratified_kfold(&labels, 3, 0),
            Err(Error::Stratification { class: 1, count: 2, folds: 3 })
        ));
        assert!(matches!(stratified_kfold(&labels, 1, 0), Err(Error::Config(_))));
    }

    #[test]
    fn eighty_twenty_split() {
        let labels: Vec<usize> = (0..208).map(|i| i / 52).collect();
        let (train, test) = stratified_split(&labels, 0.8, 11).unwrap();
        assert_eq!(train.len(), 4 * 42);
        assert_eq!(test.len(), 4 * 10);
        let mut all = [train.clone(), test.clone()].concat();
        all.sort();
        assert_eq!(all, (0..208).collect::<Vec<_>>());
        assert_eq!(stratified_split(&labels, 0.8, 11).unwrap(), (train, test));
    }
}
