use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euclidean k-nearest-neighbour store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
    pub k: usize,
}

impl KnnModel {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, k: usize) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyModel);
        }
        if x.len() != y.len() {
            return Err(Error::Dim {
                expected: x.len(),
                found: y.len(),
            });
        }
        if k == 0 || k > x.len() {
            return Err(Error::Config(format!(
                "k = {k} must lie in 1..={} (training rows)",
                x.len()
            )));
        }
        let d = x[0].len();
        if let Some(r) = x.iter().find(|r| r.len() != d) {
            return Err(Error::Dim {
                expected: d,
                found: r.len(),
            });
        }
        if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
            return Err(Error::Config(format!("label {bad} outside {n_classes} classes")));
        }
        Ok(Self {
            points: x.to_vec(),
            labels: y.to_vec(),
            n_classes,
            k,
        })
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Majority vote among the `k` nearest rows (distance ties broken by
    /// training order). Vote ties go to the class with the nearer neighbour,
    /// then to the lower class index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        if self.points.is_empty() {
            return Err(Error::EmptyModel);
        }
        if x.len() != self.dim() {
            return Err(Error::Dim {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut dist: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        let k = self.k.min(dist.len());
        dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let nearest = &mut dist[..k];
        nearest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut votes = vec![0usize; self.n_classes];
        let mut first_rank = vec![usize::MAX; self.n_classes];
        for (rank, &(_, i)) in nearest.iter().enumerate() {
            let c = self.labels[i];
            votes[c] += 1;
            first_rank[c] = first_rank[c].min(rank);
        }
        Ok((0..self.n_classes)
            .max_by(|&a, &b| {
                votes[a]
                    .cmp(&votes[b])
                    .then(first_rank[b].cmp(&first_rank[a]))
                    .then(b.cmp(&a))
            })
            .expect("at least one class"))
    }
}
