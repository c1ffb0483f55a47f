//! k-NN, SVM and ELM classifiers behind a common config/model interface.

mod elm;
mod knn;
mod svm;

use serde::{Deserialize, Serialize};

pub use elm::{elm_train, hidden_matrix, one_hot, Activation, ElmConfig, ElmModel, LRELU_SLOPE, PINV_CUTOFF};
pub use knn::KnnModel;
pub use svm::{svm_train, BinaryMachine, Kernel, Multiclass, ResolvedKernel, SvmModel, SvmParams};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierConfig {
    Knn {
        k: usize,
    },
    Svm {
        #[serde(flatten, default)]
        params: SvmParams,
    },
    Elm {
        #[serde(flatten, default)]
        config: ElmConfig,
    },
}

impl ClassifierConfig {
    pub fn knn(k: usize) -> Self {
        Self::Knn { k }
    }

    pub fn svm() -> Self {
        Self::Svm {
            params: SvmParams::default(),
        }
    }

    pub fn elm(activation: Activation) -> Self {
        Self::Elm {
            config: ElmConfig {
                activation,
                ..ElmConfig::default()
            },
        }
    }

    /// Short report name such as `1-NN`, `SVM` or `ELM-sig`.
    pub fn name(&self) -> String {
        match self {
            Self::Knn { k } => format!("{k}-NN"),
            Self::Svm { .. } => "SVM".to_string(),
            Self::Elm { config } => format!("ELM-{}", config.activation),
        }
    }

    /// Copy with any internal seed replaced; only the ELM draws random numbers.
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            Self::Elm { config } => Self::Elm {
                config: ElmConfig {
                    seed,
                    ..config.clone()
                },
            },
            other => other.clone(),
        }
    }

    pub fn train(&self, x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<TrainedModel> {
        Ok(match self {
            Self::Knn { k } => TrainedModel::Knn(KnnModel::fit(x, y, n_classes, *k)?),
            Self::Svm { params } => TrainedModel::Svm(svm_train(x, y, n_classes, params)?),
            Self::Elm { config } => TrainedModel::Elm(elm_train(x, y, n_classes, config)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum TrainedModel {
    Knn(KnnModel),
    Svm(SvmModel),
    Elm(ElmModel),
}

impl TrainedModel {
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        match self {
            Self::Knn(m) => m.predict(x),
            Self::Svm(m) => m.predict(x),
            Self::Elm(m) => m.predict(x),
        }
    }

    pub fn predict_all(&self, x: &[Vec<f64>]) -> Result<Vec<usize>> {
        x.iter().map(|r| self.predict(r)).collect()
    }
}
