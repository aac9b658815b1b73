// Copyright 2026 The zxopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Declarative run configuration.
//!
//! One TOML file drives every subcommand. All fields are optional; missing
//! ones take the defaults below. Component seeds are derived from the single
//! root `seed`, so a `seed` written inside `[train]` is overwritten.
//!
//! ```toml
//! seed = 7
//! output_dir = "runs/a"
//!
//! [dataset]
//! preset = "ii"        # i, ii or iii; explicit fields below override it
//! count = 100
//!
//! [train.hyper]
//! total_steps = 50000
//!
//! [search]
//! budget = 128
//! restarts = 3
//!
//! [peephole]
//! block_width = 5
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bench::{DatasetSpec, GateRatios};
use crate::policy::TrainConfig;
use crate::search::SearchSettings;
use crate::seed;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

/// Standard dataset families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    I,
    Ii,
    Iii,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetConfig {
    pub preset: Preset,
    pub ratios: Option<GateRatios>,
    pub width: Option<usize>,
    pub gates: Option<usize>,
    pub count: usize,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig { preset: Preset::I, ratios: None, width: None, gates: None, count: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeepholeConfig {
    pub block_width: usize,
}

impl Default for PeepholeConfig {
    fn default() -> Self {
        PeepholeConfig { block_width: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub dataset: DatasetConfig,
    pub train: TrainConfig,
    pub search: SearchSettings,
    pub peephole: PeepholeConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            output_dir: PathBuf::from("out"),
            dataset: DatasetConfig::default(),
            train: TrainConfig::default(),
            search: SearchSettings::default(),
            peephole: PeepholeConfig::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, ConfigError> {
        let c: Config = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
        Config::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |s: String| Err(ConfigError::Invalid(s));
        self.dataset_spec().ratios.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.train.hyper.validate().map_err(ConfigError::Invalid)?;
        if self.peephole.block_width < 2 {
            return bad("peephole.block_width must be at least 2".into());
        }
        if !(1..=crate::extract::MAX_LEVEL).contains(&self.search.level_cap) {
            return bad(format!("search.level_cap must be in 1..={}", crate::extract::MAX_LEVEL));
        }
        if !(1..=crate::extract::MAX_LEVEL).contains(&self.train.level_cap) {
            return bad(format!("train.level_cap must be in 1..={}", crate::extract::MAX_LEVEL));
        }
        if self.search.budget == 0 {
            return bad("search.budget must be positive".into());
        }
        Ok(())
    }

    /// Dataset with the preset filled in and the seed derived from the root.
    pub fn dataset_spec(&self) -> DatasetSpec {
        let d = &self.dataset;
        let s = seed::derive(self.seed, "dataset", 0);
        let mut spec = match d.preset {
            Preset::I => DatasetSpec::dataset_i(d.count, s),
            Preset::Ii => DatasetSpec::dataset_ii(d.count, s),
            Preset::Iii => DatasetSpec::dataset_iii(d.count, s),
        };
        if let Some(r) = d.ratios {
            spec.ratios = r;
        }
        spec.width = d.width.unwrap_or(spec.width);
        spec.gates = d.gates.unwrap_or(spec.gates);
        spec
    }

    /// Training config with its seed derived from the root.
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig { seed: seed::derive(self.seed, "train", 0), ..self.train.clone() }
    }

    pub fn search_seed(&self) -> u64 {
        seed::derive(self.seed, "search", 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_default() {
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
    }

    #[test]
    fn preset_and_overrides() {
        let c = Config::from_toml("seed = 3\n[dataset]\npreset = \"ii\"\ngates = 20\n[search]\nbudget = 16\n").unwrap();
        let d = c.dataset_spec();
        assert_eq!((d.width, d.gates, d.count), (4, 20, 100));
        assert_eq!(d.ratios, GateRatios::cnot_only());
        assert_eq!(c.search.budget, 16);
        assert_eq!(c.search.restarts, SearchSettings::default().restarts);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(Config::from_toml("bogus = 1").is_err());
        assert!(Config::from_toml("[search]\nlevel_cap = 9").is_err());
        assert!(Config::from_toml("[dataset.ratios]\ncnot = 2.0\nh = 0.0\nrx = 0.0\nrz = 0.0").is_err());
    }

    #[test]
    fn seeds_split_by_component() {
        let c = Config { seed: 5, ..Config::default() };
        assert_ne!(c.dataset_spec().seed, c.train_config().seed);
        assert_ne!(c.train_config().seed, c.search_seed());
    }
}
