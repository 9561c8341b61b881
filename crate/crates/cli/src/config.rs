//! Experiment configuration: a TOML document that fully determines a run.
//! The resolved form (after CLI overrides) is archived next to the outputs
//! so any result can be reproduced bitwise from its config and the binary.

use std::path::{Path, PathBuf};

use lkclab_core::dataset::DatasetKind;
use lkclab_core::error::{Error, Result};
use lkclab_core::lkcnn::LkcnnConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    /// "logistic-log" | "logistic-linear" | "sine-circle-linear"
    pub kind: String,
    pub grid: usize,
    pub window: usize,
    pub burn_in: u64,
    pub lyap_n_max: u64,
    /// Decimal precision for labeling.
    pub k_label: u32,
}

impl Default for DatasetSection {
    fn default() -> Self {
        DatasetSection {
            kind: "logistic-log".into(),
            grid: 1000,
            window: 500,
            burn_in: 10_000,
            lyap_n_max: 10_000_000,
            k_label: 4,
        }
    }
}

impl DatasetSection {
    pub fn dataset_kind(&self) -> Result<DatasetKind> {
        match self.kind.as_str() {
            "logistic-log" => Ok(DatasetKind::LogisticLog),
            "logistic-linear" => Ok(DatasetKind::LogisticLinear),
            "sine-circle-linear" => Ok(DatasetKind::SineCircleLinear),
            other => Err(Error::Rejected(format!("unknown dataset kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub conv_filters: usize,
    pub kernel: usize,
    pub stride: usize,
    pub pool: usize,
    pub dropout_rate: f64,
    pub dense_units: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        let d = LkcnnConfig::default();
        ModelSection {
            conv_filters: d.conv_filters,
            kernel: d.kernel,
            stride: d.stride,
            pool: d.pool,
            dropout_rate: d.dropout_rate,
            dense_units: d.dense_units,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub batch_size: usize,
    /// Stop once training accuracy reaches this value; absent = never.
    pub accuracy_stop: Option<f64>,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let d = LkcnnConfig::default();
        TrainingSection {
            learning_rate: d.learning_rate,
            max_epochs: 200,
            patience: d.patience,
            batch_size: d.batch_size,
            accuracy_stop: d.accuracy_stop,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub count: usize,
    /// Root seed; model i trains with seed `seed + i`.
    pub seed: u64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection { count: 30, seed: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub probe_periods: Vec<u32>,
    pub probes_per_period: usize,
    pub rel_tol: f64,
    pub diagram_resolution: usize,
    /// Decimal-convergence range for comparison tables.
    pub k_min: u32,
    pub k_max: u32,
    /// Hyperparameter sweep axes.
    pub sweep_strides: Vec<usize>,
    pub sweep_dense_units: Vec<usize>,
    pub sweep_models: usize,
    /// Random cases for the lemma check.
    pub lemma_cases: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            probe_periods: vec![2, 3, 4, 5, 6, 8, 12, 16, 24, 48],
            probes_per_period: 10,
            rel_tol: 1e-6,
            diagram_resolution: 51,
            k_min: 2,
            k_max: 5,
            sweep_strides: vec![1, 2, 4],
            sweep_dense_units: vec![10, 100],
            sweep_models: 3,
            lemma_cases: 1000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSection,
    pub model: ModelSection,
    pub training: TrainingSection,
    pub ensemble: EnsembleSection,
    pub analysis: AnalysisSection,
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text)
            .map_err(|e| Error::Parse { line: 0, msg: format!("config: {e}") })
    }

    /// Applies command-line overrides; `paper_scale` restores the full
    /// protocol (250 models, 1000 epochs, patience 50).
    pub fn apply_overrides(
        &mut self,
        out: Option<PathBuf>,
        seed: Option<u64>,
        paper_scale: bool,
    ) {
        if let Some(out) = out {
            self.output.dir = out;
        }
        if let Some(seed) = seed {
            self.ensemble.seed = seed;
        }
        if paper_scale {
            self.ensemble.count = 250;
            self.training.max_epochs = 1000;
            self.training.patience = 50;
        }
    }

    /// LKCNN hyperparameters for model index i of the ensemble.
    pub fn lkcnn_config(&self, index: usize) -> LkcnnConfig {
        LkcnnConfig {
            input_len: self.dataset.window,
            conv_filters: self.model.conv_filters,
            kernel: self.model.kernel,
            stride: self.model.stride,
            pool: self.model.pool,
            dropout_rate: self.model.dropout_rate,
            dense_units: self.model.dense_units,
            learning_rate: self.training.learning_rate,
            max_epochs: self.training.max_epochs,
            patience: self.training.patience,
            batch_size: self.training.batch_size,
            accuracy_stop: self.training.accuracy_stop,
            seed: self.ensemble.seed + index as u64,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Stable content hash of the resolved configuration. The output
    /// location is excluded: it identifies where results go, not what the
    /// experiment is, and identical runs into different directories must
    /// produce identical artifacts.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputSection::default();
        format!("{:016x}", lkclab_core::fnv1a(canonical.to_toml().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = ExperimentConfig::default();
        let text = cfg.to_toml();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: std::result::Result<ExperimentConfig, _> =
            toml::from_str("[dataset]\nknid = \"typo\"\n");
        assert!(r.is_err());
    }

    #[test]
    fn paper_scale_overrides() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_overrides(None, Some(7), true);
        assert_eq!(cfg.ensemble.seed, 7);
        assert_eq!(cfg.ensemble.count, 250);
        assert_eq!(cfg.training.max_epochs, 1000);
        assert_eq!(cfg.training.patience, 50);
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = ExperimentConfig::default();
        let mut b = ExperimentConfig::default();
        b.output.dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
    }

    #[test]
    fn hash_changes_with_content() {
        let a = ExperimentConfig::default();
        let mut b = ExperimentConfig::default();
        b.ensemble.seed = 99;
        assert_ne!(a.hash(), b.hash());
    }
}
