use crate::engine::{SamplerConfig, SelectionPolicy};
use crate::ingest::{EndpointSynthesis, UniformRange};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EndpointWeighting {
    #[default]
    Uniform,
    /// Proportional to each endpoint's announced address count.
    ByPrefixSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct HybridConfig {
    pub enabled: bool,
    pub max_reembeds: u32,
}

impl Default for HybridConfig {
    fn default() -> Self {
        HybridConfig {
            enabled: true,
            max_reembeds: 3,
        }
    }
}

/// Workload and algorithm parameters for one simulation run. Every field has
/// a default, so a partial scenario file is valid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Requests per second.
    pub arrival_rate: f64,
    /// Seconds.
    pub mean_duration: f64,
    /// Mbps.
    pub demand: UniformRange,
    /// ms.
    pub latency_bound: UniformRange,
    /// Seconds.
    pub horizon: f64,
    pub endpoint_weighting: EndpointWeighting,
    pub backup_probability: f64,
    /// Failures per second; 0 disables failures.
    pub failure_rate: f64,
    pub sampler: SamplerConfig,
    pub policy: SelectionPolicy,
    pub hybrid: HybridConfig,
    /// Synthetic endpoints attached before the run, for substrates built
    /// from membership data alone.
    pub endpoints: Option<EndpointSynthesis>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 1,
            arrival_rate: 1.0,
            mean_duration: 60.0,
            demand: UniformRange::new(10, 100),
            latency_bound: UniformRange::new(30, 150),
            horizon: 300.0,
            endpoint_weighting: EndpointWeighting::Uniform,
            backup_probability: 0.0,
            failure_rate: 0.0,
            sampler: SamplerConfig::default(),
            policy: SelectionPolicy::MinLatency,
            hybrid: HybridConfig::default(),
            endpoints: Some(EndpointSynthesis::default()),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let pos = |x: f64| x.is_finite() && x > 0.0;
        if !pos(self.arrival_rate) {
            return Err(SimError::Config("arrival_rate must be positive"));
        }
        if !pos(self.mean_duration) {
            return Err(SimError::Config("mean_duration must be positive"));
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(SimError::Config("horizon must be non-negative"));
        }
        if !self.demand.is_valid() || !self.latency_bound.is_valid() {
            return Err(SimError::Config("ranges need 0 < lo <= hi"));
        }
        if !(0.0..=1.0).contains(&self.backup_probability) {
            return Err(SimError::Config("backup_probability must lie in [0, 1]"));
        }
        if !(self.failure_rate.is_finite() && self.failure_rate >= 0.0) {
            return Err(SimError::Config("failure_rate must be non-negative"));
        }
        if self.sampler.validate().is_err() {
            return Err(SimError::Config("sampler parameters must be positive"));
        }
        Ok(())
    }
}
