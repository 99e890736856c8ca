//! JSON run configuration.
//!
//! A config file names a full experiment. `pfr`, `cf`, `policy` and `seed`
//! are required; everything else falls back to the defaults below. Unknown
//! keys are rejected so sweep-grid typos fail loudly. CLI flags override
//! file keys.

use crate::HarnessError;
use icfs_wearsim_core::engine::SimConfig;
use icfs_wearsim_core::metrics::StatsDenominator;
use icfs_wearsim_core::nvm::NvmGeometry;
use icfs_wearsim_core::PolicyKind;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub pfr: Option<f64>,
    pub cf: Option<u32>,
    pub policy: Option<String>,
    pub seed: Option<u64>,
    pub total_bytes: Option<u64>,
    pub data_region_bytes: Option<u64>,
    pub block_size: Option<u64>,
    pub preload_bytes: Option<u64>,
    pub workload_bytes: Option<u64>,
    pub append_unit: Option<u64>,
    pub swap_threshold: Option<u64>,
    pub fail_threshold: Option<u32>,
    pub success_threshold: Option<u32>,
    pub sram_budget: Option<u64>,
    pub log_capacity_records: Option<u64>,
    pub op_budget: Option<u64>,
    pub count_preload_wear: Option<bool>,
    pub count_migration_wear: Option<bool>,
    pub force_buffer_active: Option<bool>,
    /// "all" or "touched"
    pub stats_denominator: Option<String>,
}

/// Flag-level overrides applied on top of a config file (or the defaults).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub pfr: Option<f64>,
    pub cf: Option<u32>,
    pub policy: Option<PolicyKind>,
    pub seed: Option<u64>,
    pub force_buffer_active: bool,
    pub record_events: bool,
    pub record_trace: bool,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(HarnessError::io(path))?;
        let cfg: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    fn require<T: Copy>(value: Option<T>, key: &str) -> Result<T, HarnessError> {
        value.ok_or_else(|| HarnessError::Config(format!("missing required key \"{key}\"")))
    }

    /// Resolve the file plus overrides into a validated simulation config.
    pub fn resolve(&self, overrides: &Overrides) -> Result<SimConfig, HarnessError> {
        let defaults = SimConfig::default();
        let geometry_defaults = NvmGeometry::default();

        let pfr = overrides
            .pfr
            .or(self.pfr)
            .map_or_else(|| Self::require(self.pfr, "pfr"), Ok)?;
        let cf = overrides
            .cf
            .or(self.cf)
            .map_or_else(|| Self::require(self.cf, "cf"), Ok)?;
        let policy = match (overrides.policy, &self.policy) {
            (Some(p), _) => p,
            (None, Some(s)) => s
                .parse::<PolicyKind>()
                .map_err(|e| HarnessError::Config(format!("policy \"{s}\": {e}")))?,
            (None, None) => return Err(HarnessError::Config("missing required key \"policy\"".into())),
        };
        let seed = overrides
            .seed
            .or(self.seed)
            .map_or_else(|| Self::require(self.seed, "seed"), Ok)?;

        let geometry = NvmGeometry::new(
            self.total_bytes.unwrap_or(geometry_defaults.total_bytes()),
            self.data_region_bytes
                .unwrap_or(geometry_defaults.data_region_bytes()),
            self.block_size.unwrap_or(geometry_defaults.block_size()),
        )
        .map_err(|e| HarnessError::Config(e.to_string()))?;

        let stats_denominator = match self.stats_denominator.as_deref() {
            None | Some("all") => StatsDenominator::AllBlocks,
            Some("touched") => StatsDenominator::TouchedOnly,
            Some(other) => {
                return Err(HarnessError::Config(format!(
                    "stats_denominator \"{other}\" (expected \"all\" or \"touched\")"
                )))
            }
        };

        let cfg = SimConfig {
            geometry,
            preload_bytes: self.preload_bytes.unwrap_or(defaults.preload_bytes),
            workload_bytes: self.workload_bytes.unwrap_or(defaults.workload_bytes),
            append_unit: self.append_unit.unwrap_or(defaults.append_unit),
            cf,
            pfr,
            policy,
            swap_threshold: self.swap_threshold.unwrap_or(defaults.swap_threshold),
            fail_threshold: self.fail_threshold.unwrap_or(defaults.fail_threshold),
            success_threshold: self.success_threshold.unwrap_or(defaults.success_threshold),
            sram_budget: self.sram_budget.unwrap_or(defaults.sram_budget),
            log_capacity_records: self
                .log_capacity_records
                .unwrap_or(defaults.log_capacity_records),
            op_budget: self.op_budget.unwrap_or(defaults.op_budget),
            seed,
            count_preload_wear: self
                .count_preload_wear
                .unwrap_or(defaults.count_preload_wear),
            count_migration_wear: self
                .count_migration_wear
                .unwrap_or(defaults.count_migration_wear),
            force_buffer_active: overrides.force_buffer_active
                || self
                    .force_buffer_active
                    .unwrap_or(defaults.force_buffer_active),
            stats_denominator,
            record_timelines: true,
            record_events: overrides.record_events,
            record_trace: overrides.record_trace,
            replay: None,
        };
        cfg.validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

/// Resolve with no config file: built-in defaults plus overrides.
pub fn default_config(overrides: &Overrides) -> Result<SimConfig, HarnessError> {
    let defaults = SimConfig::default();
    let file = ConfigFile {
        pfr: Some(defaults.pfr),
        cf: Some(defaults.cf),
        policy: Some(defaults.policy.as_str().to_string()),
        seed: Some(defaults.seed),
        ..ConfigFile::default()
    };
    file.resolve(overrides)
}
