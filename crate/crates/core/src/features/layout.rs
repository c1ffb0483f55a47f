use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::time_domain::TD_FEATURE_NAMES;
use super::{FeatureConfig, TdMode, LOG_MOMENT_COUNT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureFamily {
    /// Inter-channel statistics: max similarity and covariance per channel pair.
    Ics,
    /// Burg band powers.
    Psd,
    /// Log moments of the Fourier spectrum.
    Lmfs,
    /// Time-domain set.
    Tds,
    /// Higher-order statistics.
    Hosa,
}

impl FeatureFamily {
    pub const ALL: [FeatureFamily; 5] = [Self::Ics, Self::Psd, Self::Lmfs, Self::Tds, Self::Hosa];

    pub fn short_name(self) -> &'static str {
        match self {
            Self::Ics => "ICS",
            Self::Psd => "PSD",
            Self::Lmfs => "LMFS",
            Self::Tds => "TDS",
            Self::Hosa => "HOSA",
        }
    }
}

impl fmt::Display for FeatureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// All unordered channel pairs (1-based, i < j) in lexicographic order. For
/// eight channels this is the 28-entry pairing table used by the ICS block.
pub fn channel_pairs(channels: usize) -> Vec<(usize, usize)> {
    (1..=channels)
        .flat_map(|i| (i + 1..=channels).map(move |j| (i, j)))
        .collect()
}

/// Index ranges of each family inside a feature vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub channels: usize,
    pub ics: Range<usize>,
    pub psd: Range<usize>,
    pub lmfs: Range<usize>,
    pub tds: Range<usize>,
    pub hosa: Range<usize>,
    pub names: Vec<String>,
}

impl FeatureLayout {
    pub fn new(channels: usize, cfg: &FeatureConfig) -> Self {
        let pairs = channel_pairs(channels);
        let mut names = Vec::new();
        for (i, j) in &pairs {
            names.push(format!("ics_msi_{i}_{j}"));
        }
        for (i, j) in &pairs {
            names.push(format!("ics_cov_{i}_{j}"));
        }
        let ics = 0..names.len();

        for c in 1..=channels {
            for b in 1..=cfg.n_bands {
                names.push(format!("psd_ch{c}_b{b}"));
            }
        }
        let psd = ics.end..names.len();

        for c in 1..=channels {
            for f in 1..=LOG_MOMENT_COUNT {
                names.push(format!("lmfs_ch{c}_f{f}"));
            }
        }
        let lmfs = psd.end..names.len();

        match cfg.td_mode {
            TdMode::Aggregate => {
                for n in TD_FEATURE_NAMES {
                    names.push(format!("tds_{}", n.to_lowercase()));
                }
            }
            TdMode::PerChannel => {
                for c in 1..=channels {
                    for n in TD_FEATURE_NAMES {
                        names.push(format!("tds_ch{c}_{}", n.to_lowercase()));
                    }
                }
            }
        }
        let tds = lmfs.end..names.len();

        for c in 1..=channels {
            names.push(format!("hosa_c2_ch{c}"));
        }
        for g in 1..=cfg.hosa_groups.len() {
            names.push(format!("hosa_cum4_g{g}"));
        }
        let hosa = tds.end..names.len();

        Self {
            channels,
            ics,
            psd,
            lmfs,
            tds,
            hosa,
            names,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn range(&self, family: FeatureFamily) -> Range<usize> {
        match family {
            FeatureFamily::Ics => self.ics.clone(),
            FeatureFamily::Psd => self.psd.clone(),
            FeatureFamily::Lmfs => self.lmfs.clone(),
            FeatureFamily::Tds => self.tds.clone(),
            FeatureFamily::Hosa => self.hosa.clone(),
        }
    }

    /// Column indices of a subset, in layout order.
    pub fn indices(&self, subset: &FeatureSubsetSpec) -> Vec<usize> {
        FeatureFamily::ALL
            .iter()
            .filter(|f| subset.families.contains(f))
            .flat_map(|&f| self.range(f))
            .collect()
    }
}

/// A named union of feature families, written in the feature-table vocabulary:
/// `All`, `Time Based`, `ICS`, `PSD`, `LMF`, `HOSA`, `Freq Based`, and
/// `+`-joined combinations such as `ICS + Freq + HOSA`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FeatureSubsetSpec {
    name: String,
    families: BTreeSet<FeatureFamily>,
}

impl FeatureSubsetSpec {
    pub fn parse(name: &str) -> Result<Self> {
        let mut families = BTreeSet::new();
        for token in name.split('+') {
            let token = token.trim();
            let key: String = token
                .chars()
                .filter(|c| !c.is_whitespace() && *c != '_' && *c != '-')
                .collect::<String>()
                .to_lowercase();
            let add: &[FeatureFamily] = match key.as_str() {
                "all" => &FeatureFamily::ALL,
                "time" | "timebased" | "td" | "tds" => &[FeatureFamily::Tds],
                "ics" => &[FeatureFamily::Ics],
                "psd" => &[FeatureFamily::Psd],
                "lmf" | "lmfs" => &[FeatureFamily::Lmfs],
                "hosa" | "hos" => &[FeatureFamily::Hosa],
                "freq" | "freqbased" => &[FeatureFamily::Psd, FeatureFamily::Lmfs],
                _ => {
                    return Err(Error::Config(format!(
                        "unknown feature family {token:?} in subset {name:?}"
                    )))
                }
            };
            families.extend(add.iter().copied());
        }
        Ok(Self {
            name: name.trim().to_string(),
            families,
        })
    }

    pub fn all() -> Self {
        Self::parse("All").expect("valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn families(&self) -> &BTreeSet<FeatureFamily> {
        &self.families
    }
}

impl TryFrom<String> for FeatureSubsetSpec {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Self::parse(&value)
    }
}

impl From<FeatureSubsetSpec> for String {
    fn from(value: FeatureSubsetSpec) -> Self {
        value.name
    }
}

impl fmt::Display for FeatureSubsetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Row-wise subset selection.
pub fn select_subset(values: &[f64], layout: &FeatureLayout, subset: &FeatureSubsetSpec) -> Result<Vec<f64>> {
    if values.len() != layout.len() {
        return Err(Error::Dim {
            expected: layout.len(),
            found: values.len(),
        });
    }
    Ok(layout.indices(subset).into_iter().map(|i| values[i]).collect())
}
