//! Training-set-fitted transforms: uninformative-column removal, z-score
//! normalization and PCA. Each is fitted on training rows only and applied
//! unchanged to held-out rows.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Columns whose standard deviation falls below this are treated as constant.
pub const CONSTANT_TOLERANCE: f64 = 1e-12;

fn check_matrix(x: &[Vec<f64>], min_rows: usize) -> Result<usize> {
    if x.len() < min_rows {
        return Err(Error::InsufficientData(format!(
            "{} row(s); at least {min_rows} required",
            x.len()
        )));
    }
    let d = x[0].len();
    if let Some(bad) = x.iter().find(|r| r.len() != d) {
        return Err(Error::Dim {
            expected: d,
            found: bad.len(),
        });
    }
    Ok(d)
}

fn column_means(x: &[Vec<f64>], d: usize) -> Vec<f64> {
    let n = x.len() as f64;
    (0..d).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZScoreParams {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub constant_mask: Vec<bool>,
}

/// Column means and sample (n-1) standard deviations.
pub fn zscore_fit(x: &[Vec<f64>]) -> Result<ZScoreParams> {
    let d = check_matrix(x, 2)?;
    let mean = column_means(x, d);
    let n = x.len() as f64;
    let std: Vec<f64> = (0..d)
        .map(|j| (x.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / (n - 1.0)).sqrt())
        .collect();
    let constant_mask = std.iter().map(|s| !(*s >= CONSTANT_TOLERANCE)).collect();
    Ok(ZScoreParams {
        mean,
        std,
        constant_mask,
    })
}

impl ZScoreParams {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::Dim {
                expected: self.dim(),
                found: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if self.constant_mask[j] {
                    0.0
                } else {
                    (v - self.mean[j]) / self.std[j]
                }
            })
            .collect())
    }

    /// Inverse of [`apply_row`](Self::apply_row) on non-constant columns;
    /// constant columns map back to their mean.
    pub fn invert_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::Dim {
                expected: self.dim(),
                found: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if self.constant_mask[j] {
                    self.mean[j]
                } else {
                    v * self.std[j] + self.mean[j]
                }
            })
            .collect())
    }
}

pub fn zscore_apply(x: &[Vec<f64>], params: &ZScoreParams) -> Result<Vec<Vec<f64>>> {
    x.iter().map(|r| params.apply_row(r)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionMask {
    pub input_dim: usize,
    pub kept_indices: Vec<usize>,
}

impl SelectionMask {
    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.input_dim {
            return Err(Error::Dim {
                expected: self.input_dim,
                found: row.len(),
            });
        }
        Ok(self.kept_indices.iter().map(|&i| row[i]).collect())
    }
}

/// Keep columns that are all-finite with sample variance above the
/// constant tolerance.
pub fn drop_uninformative(x: &[Vec<f64>]) -> Result<SelectionMask> {
    let d = check_matrix(x, 2)?;
    let n = x.len() as f64;
    let kept_indices: Vec<usize> = (0..d)
        .filter(|&j| {
            if x.iter().any(|r| !r[j].is_finite()) {
                return false;
            }
            let m = x.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = x.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / (n - 1.0);
            var > CONSTANT_TOLERANCE
        })
        .collect();
    if kept_indices.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(SelectionMask {
        input_dim: d,
        kept_indices,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// Orthonormal directions, one per row, by decreasing explained variance.
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

/// Top-`k` eigenvectors of the sample covariance. Each component is signed
/// so that its largest-magnitude entry is positive.
pub fn pca_fit(x: &[Vec<f64>], k: usize) -> Result<PcaModel> {
    let d = check_matrix(x, 2)?;
    let max_k = (x.len() - 1).min(d);
    if k == 0 || k > max_k {
        return Err(Error::Dim {
            expected: max_k,
            found: k,
        });
    }
    let n = x.len();
    let mean = column_means(x, d);
    let centered = DMatrix::from_fn(n, d, |i, j| x[i][j] - mean[j]);
    let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut components = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let pivot = v
            .iter()
            .enumerate()
            .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
        if v[pivot] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        components.push(v);
        explained_variance.push(eig.eigenvalues[idx].max(0.0));
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
    })
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn project_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.input_dim() {
            return Err(Error::Dim {
                expected: self.input_dim(),
                found: row.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .map(|c| c.iter().zip(row).zip(&self.mean).map(|((w, x), m)| w * (x - m)).sum())
            .collect())
    }

    pub fn reconstruct_row(&self, scores: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (s, c) in scores.iter().zip(&self.components) {
            for (o, w) in out.iter_mut().zip(c) {
                *o += s * w;
            }
        }
        out
    }
}

pub fn pca_project(x: &[Vec<f64>], model: &PcaModel) -> Result<Vec<Vec<f64>>> {
    x.iter().map(|r| model.project_row(r)).collect()
}

/// Number of PCA components, either fixed or the largest the training fold
/// supports (`min(rows - 1, columns)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PcaDims {
    Fixed(usize),
    Named(FullRank),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FullRank {
    Full,
}

impl PcaDims {
    pub const FULL: PcaDims = PcaDims::Named(FullRank::Full);

    pub fn resolve(self, rows: usize, cols: usize) -> usize {
        match self {
            PcaDims::Fixed(k) => k,
            PcaDims::Named(FullRank::Full) => rows.saturating_sub(1).min(cols),
        }
    }
}

impl std::fmt::Display for PcaDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PcaDims::Fixed(k) => write!(f, "{k}"),
            PcaDims::Named(FullRank::Full) => f.write_str("full"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub drop_uninformative: bool,
    pub zscore: bool,
    pub pca: Option<PcaDims>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            drop_uninformative: true,
            zscore: true,
            pca: None,
        }
    }
}

/// Selection, normalization and projection fitted on one training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedPipeline {
    pub input_dim: usize,
    pub selection: Option<SelectionMask>,
    pub zscore: Option<ZScoreParams>,
    pub pca: Option<PcaModel>,
}

impl FittedPipeline {
    pub fn fit(x: &[Vec<f64>], cfg: &PipelineConfig) -> Result<Self> {
        let input_dim = check_matrix(x, 2)?;
        let selection = cfg.drop_uninformative.then(|| drop_uninformative(x)).transpose()?;
        if let Some(m) = &selection {
            log::debug!("kept {} of {} feature columns", m.kept_indices.len(), input_dim);
        }
        let mut current: Vec<Vec<f64>> = match &selection {
            Some(m) => x.iter().map(|r| m.apply_row(r)).collect::<Result<_>>()?,
            None => x.to_vec(),
        };
        let zscore = if cfg.zscore {
            let p = zscore_fit(&current)?;
            current = zscore_apply(&current, &p)?;
            Some(p)
        } else {
            None
        };
        let pca = match cfg.pca {
            Some(dims) => {
                let k = dims.resolve(current.len(), current[0].len());
                Some(pca_fit(&current, k)?)
            }
            None => None,
        };
        Ok(Self {
            input_dim,
            selection,
            zscore,
            pca,
        })
    }

    pub fn output_dim(&self) -> usize {
        if let Some(p) = &self.pca {
            p.k()
        } else if let Some(s) = &self.selection {
            s.kept_indices.len()
        } else {
            self.input_dim
        }
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.input_dim {
            return Err(Error::Dim {
                expected: self.input_dim,
                found: row.len(),
            });
        }
        let mut v = match &self.selection {
            Some(m) => m.apply_row(row)?,
            None => row.to_vec(),
        };
        if let Some(z) = &self.zscore {
            v = z.apply_row(&v)?;
        }
        if let Some(p) = &self.pca {
            v = p.project_row(&v)?;
        }
        Ok(v)
    }

    pub fn transform(&self, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        x.iter().map(|r| self.transform_row(r)).collect()
    }
}
