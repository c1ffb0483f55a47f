use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use myoact_core::classify::{Activation, ClassifierConfig};
use myoact_core::features::{FeatureConfig, FeatureSubsetSpec};
use myoact_core::ingest::{LoadOptions, SynthSpec};
use myoact_core::pipeline::{PcaDims, PipelineConfig};
use myoact_core::preprocess::WindowingConfig;
use myoact_core::seed::derive_seed;
use serde::{Deserialize, Serialize};

/// Subset rows of the reference feature-comparison table.
pub const DEFAULT_SUBSETS: [&str; 16] = [
    "All",
    "Time Based",
    "ICS",
    "PSD",
    "LMF",
    "HOSA",
    "Freq Based",
    "ICS + Freq",
    "ICS + Freq + HOSA",
    "Freq + HOSA",
    "ICS + HOSA",
    "Time + ICS + HOSA",
    "ICS + PSD",
    "ICS + LMF",
    "ICS + PSD + HOSA",
    "ICS + LMF + HOSA",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub dataset: DatasetConfig,
    pub windowing: WindowingConfig,
    pub features: FeatureConfig,
    pub pipeline: PipelineConfig,
    pub evaluate: EvaluateConfig,
    pub elm: ElmProtocolConfig,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: None,
            out: PathBuf::from("out"),
            dataset: DatasetConfig::default(),
            windowing: WindowingConfig::default(),
            features: FeatureConfig::default(),
            pipeline: PipelineConfig::default(),
            evaluate: EvaluateConfig::default(),
            elm: ElmProtocolConfig::default(),
            sweep: SweepConfig::default(),
        }
    }
}

/// Either an existing manifest or the synthetic generator. Without a
/// manifest, `extract` reads the one `synth` writes under `out/data`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DatasetConfig {
    pub manifest: Option<PathBuf>,
    pub channels: usize,
    pub sample_rate_hz: f64,
    pub synth: SynthSpec,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            manifest: None,
            channels: 8,
            sample_rate_hz: 1000.0,
            synth: SynthSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluateConfig {
    pub folds: usize,
    /// Cross-validation repeats; above one, accuracy is the mean over repeats
    /// and the confusion matrix comes from the first.
    pub repeats: usize,
    pub subsets: Vec<FeatureSubsetSpec>,
    pub classifiers: Vec<ClassifierConfig>,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            repeats: 10,
            subsets: DEFAULT_SUBSETS
                .iter()
                .map(|s| FeatureSubsetSpec::parse(s).expect("valid subset"))
                .collect(),
            classifiers: vec![ClassifierConfig::knn(1), ClassifierConfig::svm()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElmProtocolConfig {
    /// Empty disables the ELM protocol.
    pub activations: Vec<Activation>,
    pub n_hidden: usize,
    pub tries: usize,
    pub train_fraction: f64,
    pub subset: FeatureSubsetSpec,
}

impl Default for ElmProtocolConfig {
    fn default() -> Self {
        Self {
            activations: Activation::ALL.to_vec(),
            n_hidden: 200,
            tries: 20,
            train_fraction: 0.8,
            subset: FeatureSubsetSpec::all(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub subset: FeatureSubsetSpec,
    pub classifier: ClassifierConfig,
    pub dims: Vec<PcaDims>,
    /// Largest accuracy drop, in percentage points, for the reported knee.
    pub tolerance_points: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            subset: FeatureSubsetSpec::parse("ICS + Freq").expect("valid subset"),
            classifier: ClassifierConfig::svm(),
            dims: vec![
                PcaDims::Fixed(2),
                PcaDims::Fixed(5),
                PcaDims::Fixed(10),
                PcaDims::Fixed(26),
                PcaDims::Fixed(50),
                PcaDims::FULL,
            ],
            tolerance_points: 5.0,
        }
    }
}

/// Per-stage seeds, all expanded from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub synth: u64,
    pub cv: u64,
    pub elm: u64,
}

impl Seeds {
    pub fn new(master: u64) -> Self {
        Self {
            master,
            synth: derive_seed(master, "synth", 0),
            cv: derive_seed(master, "cv", 0),
            elm: derive_seed(master, "elm", 0),
        }
    }
}

/// A validated configuration with flag overrides applied and paths resolved.
#[derive(Debug, Clone)]
pub struct Run {
    pub config: RunConfig,
    pub seeds: Seeds,
    pub out: PathBuf,
    pub manifest: Option<PathBuf>,
}

impl Run {
    pub fn load(path: Option<&Path>, seed: Option<u64>, out: Option<PathBuf>) -> Result<Self> {
        let (config, base) = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                let config: RunConfig =
                    toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?;
                (config, p.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (RunConfig::default(), PathBuf::new()),
        };
        let Some(master) = seed.or(config.seed) else {
            bail!("no seed given: set `seed` in the config or pass --seed");
        };
        let out = out.unwrap_or_else(|| base.join(&config.out));
        let manifest = config.dataset.manifest.as_ref().map(|m| base.join(m));
        if let Some(m) = &manifest {
            if !m.is_file() {
                bail!("manifest {} does not exist", m.display());
            }
        }
        config.windowing.validate()?;
        config.features.validate(config.dataset.channels, config.windowing.window_length)?;
        if manifest.is_none() {
            config.dataset.synth.validate()?;
            if config.dataset.synth.channels != config.dataset.channels {
                bail!(
                    "dataset.channels = {} but the synthetic spec has {} channels",
                    config.dataset.channels,
                    config.dataset.synth.channels
                );
            }
        }
        if config.evaluate.folds < 2 {
            bail!("evaluate.folds must be at least 2");
        }
        Ok(Self {
            seeds: Seeds::new(master),
            config,
            out,
            manifest,
        })
    }

    pub fn data_dir(&self) -> PathBuf {
        self.out.join("data")
    }

    pub fn features_dir(&self) -> PathBuf {
        self.out.join("features")
    }

    pub fn models_dir(&self) -> PathBuf {
        self.out.join("models")
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.out.join("reports")
    }

    pub fn features_csv(&self) -> PathBuf {
        self.features_dir().join("features.csv")
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.manifest.clone().unwrap_or_else(|| self.data_dir().join("manifest.json"))
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions {
            expected_channels: self.config.dataset.channels,
            min_samples: self.config.windowing.window_length,
            sample_rate_hz: self.config.dataset.sample_rate_hz,
        }
    }
}
