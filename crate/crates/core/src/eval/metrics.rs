use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts indexed `[true][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        Self {
            counts: vec![vec![0; n_classes]; n_classes],
        }
    }

    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = counts.len();
        if let Some(r) = counts.iter().find(|r| r.len() != n) {
            return Err(Error::Dim {
                expected: n,
                found: r.len(),
            });
        }
        Ok(Self { counts })
    }

    pub fn from_predictions(truth: &[usize], predicted: &[usize], n_classes: usize) -> Result<Self> {
        if truth.len() != predicted.len() {
            return Err(Error::Dim {
                expected: truth.len(),
                found: predicted.len(),
            });
        }
        let mut cm = Self::new(n_classes);
        for (&t, &p) in truth.iter().zip(predicted) {
            if t >= n_classes || p >= n_classes {
                return Err(Error::Config(format!("label outside {n_classes} classes")));
            }
            cm.counts[t][p] += 1;
        }
        Ok(cm)
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.n_classes())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if other.n_classes() != self.n_classes() {
            return Err(Error::Dim {
                expected: self.n_classes(),
                found: other.n_classes(),
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: usize,
    pub sensitivity: f64,
    pub specificity: f64,
    pub precision: f64,
    pub f_measure: f64,
    pub misclassification_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub total: u64,
    pub accuracy: f64,
    pub balanced_accuracy: f64,
    pub cohens_kappa: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Quantities whose denominator was zero, e.g. `precision[2]`.
    pub zero_denominators: Vec<String>,
}

fn ratio(num: u64, den: u64, what: String, flags: &mut Vec<String>) -> f64 {
    if den == 0 {
        flags.push(what);
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let n = cm.total();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let rows = cm.row_sums();
    let cols = cm.col_sums();
    let trace = cm.trace();
    let mut flags = Vec::new();

    let mut per_class = Vec::with_capacity(cm.n_classes());
    for c in 0..cm.n_classes() {
        let tp = cm.counts[c][c];
        let fp = cols[c] - tp;
        let fn_ = rows[c] - tp;
        let tn = n - tp - fp - fn_;
        let sensitivity = ratio(tp, rows[c], format!("sensitivity[{c}]"), &mut flags);
        let specificity = ratio(tn, tn + fp, format!("specificity[{c}]"), &mut flags);
        let precision = ratio(tp, cols[c], format!("precision[{c}]"), &mut flags);
        let f_measure = if precision + sensitivity > 0.0 {
            2.0 * precision * sensitivity / (precision + sensitivity)
        } else {
            flags.push(format!("f_measure[{c}]"));
            0.0
        };
        per_class.push(ClassMetrics {
            class: c,
            sensitivity,
            specificity,
            precision,
            f_measure,
            misclassification_rate: 1.0 - sensitivity,
        });
    }

    // kappa = (N·trace − Σ r_c k_c) / (N² − Σ r_c k_c), kept in integers
    // until the final division.
    let n = n as u128;
    let chance: u128 = rows.iter().zip(&cols).map(|(&r, &k)| r as u128 * k as u128).sum();
    let num = (n * trace as u128) as f64 - chance as f64;
    let den = n * n - chance;
    let cohens_kappa = if den == 0 {
        // Every sample lies in one cell of the diagonal.
        flags.push("cohens_kappa".into());
        1.0
    } else {
        num / den as f64
    };

    let balanced_accuracy = per_class.iter().map(|m| m.sensitivity).sum::<f64>() / per_class.len() as f64;
    Ok(MetricsReport {
        total: n as u64,
        accuracy: trace as f64 / n as f64,
        balanced_accuracy,
        cohens_kappa,
        per_class,
        zero_denominators: flags,
    })
}
