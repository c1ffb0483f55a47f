//! Extreme learning machine: frozen random hidden layer, least-squares readout.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Singular values below this fraction of the largest are discarded.
pub const PINV_CUTOFF: f64 = 1e-10;

pub const LRELU_SLOPE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Sig,
    Sin,
    Hardlim,
    Tribas,
    Radbas,
    Relu,
    Lrelu,
    /// Softmax across the hidden units of a sample.
    Smax,
}

impl Activation {
    pub const ALL: [Activation; 8] = [
        Self::Sig,
        Self::Sin,
        Self::Hardlim,
        Self::Tribas,
        Self::Radbas,
        Self::Relu,
        Self::Lrelu,
        Self::Smax,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sig => "sig",
            Self::Sin => "sin",
            Self::Hardlim => "hardlim",
            Self::Tribas => "tribas",
            Self::Radbas => "radbas",
            Self::Relu => "relu",
            Self::Lrelu => "lrelu",
            Self::Smax => "smax",
        }
    }

    /// Element-wise activation; `None` for [`Activation::Smax`], which acts on
    /// a whole hidden vector.
    pub fn scalar(self, v: f64) -> Option<f64> {
        Some(match self {
            Self::Sig => 1.0 / (1.0 + (-v).exp()),
            Self::Sin => v.sin(),
            Self::Hardlim => {
                if v >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tribas => (1.0 - v.abs()).max(0.0),
            Self::Radbas => (-v * v).exp(),
            Self::Relu => v.max(0.0),
            Self::Lrelu => {
                if v >= 0.0 {
                    v
                } else {
                    LRELU_SLOPE * v
                }
            }
            Self::Smax => return None,
        })
    }

    pub fn apply(self, pre: &mut [f64]) {
        if self == Self::Smax {
            let max = pre.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut total = 0.0;
            for v in pre.iter_mut() {
                *v = (*v - max).exp();
                total += *v;
            }
            pre.iter_mut().for_each(|v| *v /= total);
        } else {
            pre.iter_mut().for_each(|v| *v = self.scalar(*v).expect("element-wise"));
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().to_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown ELM activation {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElmConfig {
    pub n_hidden: usize,
    pub activation: Activation,
    pub seed: u64,
}

impl Default for ElmConfig {
    fn default() -> Self {
        Self {
            n_hidden: 200,
            activation: Activation::Sig,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElmModel {
    /// `n_hidden × d`.
    pub input_weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    /// `n_hidden × n_classes`.
    pub output_weights: Vec<Vec<f64>>,
    pub activation: Activation,
    pub n_classes: usize,
    pub seed: u64,
}

impl ElmModel {
    pub fn dim(&self) -> usize {
        self.input_weights.first().map_or(0, Vec::len)
    }

    pub fn n_hidden(&self) -> usize {
        self.biases.len()
    }

    pub fn hidden(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Dim {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut h: Vec<f64> = self
            .input_weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b)
            .collect();
        self.activation.apply(&mut h);
        Ok(h)
    }

    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        let h = self.hidden(x)?;
        let mut out = vec![0.0; self.n_classes];
        for (hv, row) in h.iter().zip(&self.output_weights) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += hv * w;
            }
        }
        Ok(out)
    }

    /// Arg-max score; ties go to the lower class index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let s = self.scores(x)?;
        Ok((0..s.len())
            .max_by(|&a, &b| s[a].total_cmp(&s[b]).then(b.cmp(&a)))
            .expect("at least one class"))
    }
}

pub fn hidden_matrix(model: &ElmModel, x: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = x.iter().map(|r| model.hidden(r)).collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(rows.len(), model.n_hidden(), |i, j| rows[i][j]))
}

pub fn one_hot(y: &[usize], n_classes: usize) -> DMatrix<f64> {
    DMatrix::from_fn(y.len(), n_classes, |i, j| if y[i] == j { 1.0 } else { 0.0 })
}

pub fn elm_train(x: &[Vec<f64>], y: &[usize], n_classes: usize, cfg: &ElmConfig) -> Result<ElmModel> {
    if x.is_empty() {
        return Err(Error::InsufficientData("ELM needs at least one row".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Dim {
            expected: x.len(),
            found: y.len(),
        });
    }
    if cfg.n_hidden == 0 {
        return Err(Error::Config("ELM needs at least one hidden neuron".into()));
    }
    if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
        return Err(Error::Config(format!("label {bad} outside {n_classes} classes")));
    }
    let d = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != d) {
        return Err(Error::Dim {
            expected: d,
            found: r.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let input_weights: Vec<Vec<f64>> = (0..cfg.n_hidden)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    let biases: Vec<f64> = (0..cfg.n_hidden).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mut model = ElmModel {
        input_weights,
        biases,
        output_weights: Vec::new(),
        activation: cfg.activation,
        n_classes,
        seed: cfg.seed,
    };

    let h = hidden_matrix(&model, x)?;
    let targets = one_hot(y, n_classes);
    let svd = h.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let beta = if smax > 0.0 {
        svd.solve(&targets, PINV_CUTOFF * smax)
            .map_err(|e| Error::Config(format!("ELM least squares failed: {e}")))?
    } else {
        DMatrix::zeros(cfg.n_hidden, n_classes)
    };
    model.output_weights = (0..cfg.n_hidden)
        .map(|i| (0..n_classes).map(|j| beta[(i, j)]).collect())
        .collect();
    Ok(model)
}
