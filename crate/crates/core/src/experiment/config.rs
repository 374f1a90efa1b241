//! Experiment configuration files.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::disorder::{DisorderKind, Schedule2DSpec, ScheduleSpec, MAX_HALFWIDTH, MAX_STEPS};
use crate::dispersion::{linspace, Component};
use crate::state::InitialSpec;
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Walk1d,
    Walk2d,
    DispersionSweep,
    VgEffective,
}

impl ExperimentKind {
    pub fn is_walk(self) -> bool {
        matches!(self, ExperimentKind::Walk1d | ExperimentKind::Walk2d)
    }
}

/// A list of values or an evenly spaced range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { min: f64, max: f64, steps: usize },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Values(v) => v.clone(),
            Axis::Range { min, max, steps } => linspace(*min, *max, *steps),
        }
    }
}

/// Base coin angles. Unset angles fall back to the experiment's default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoinConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vartheta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<DisorderKind>,
    #[serde(default = "default_fractions")]
    pub fractions: Vec<f64>,
    #[serde(default)]
    pub su2: bool,
}

fn default_kinds() -> Vec<DisorderKind> {
    vec![DisorderKind::Uniform]
}

fn default_fractions() -> Vec<f64> {
    vec![1.0]
}

impl Default for DisorderConfig {
    fn default() -> Self {
        DisorderConfig {
            kinds: default_kinds(),
            fractions: default_fractions(),
            su2: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordConfig {
    #[serde(default)]
    pub distribution: bool,
    #[serde(default = "yes")]
    pub sigma: bool,
    #[serde(default = "yes")]
    pub entropy: bool,
    /// Steps whose distribution is written; the final step when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution_steps: Option<Vec<usize>>,
}

fn yes() -> bool {
    true
}

impl Default for RecordConfig {
    fn default() -> Self {
        RecordConfig {
            distribution: false,
            sigma: true,
            entropy: true,
            distribution_steps: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_k_axis")]
    pub k: Axis,
    #[serde(default = "default_theta_axis")]
    pub theta: Axis,
    #[serde(default = "default_phi_axis")]
    pub phi: Axis,
}

fn default_k_axis() -> Axis {
    Axis::Range {
        min: -std::f64::consts::SQRT_2,
        max: std::f64::consts::SQRT_2,
        steps: 101,
    }
}

fn default_theta_axis() -> Axis {
    Axis::Values(vec![0.0, FRAC_PI_4, std::f64::consts::FRAC_PI_2, PI])
}

fn default_phi_axis() -> Axis {
    Axis::Values(vec![0.0])
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            k: default_k_axis(),
            theta: default_theta_axis(),
            phi: default_phi_axis(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentName {
    #[default]
    Up,
    Down,
}

impl From<ComponentName> for Component {
    fn from(c: ComponentName) -> Self {
        match c {
            ComponentName::Up => Component::Up,
            ComponentName::Down => Component::Down,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocityConfig {
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "default_times")]
    pub times: Vec<usize>,
    #[serde(default)]
    pub component: ComponentName,
}

fn default_k() -> f64 {
    1.0
}

fn default_times() -> Vec<usize> {
    vec![10, 100, 1000]
}

impl Default for VelocityConfig {
    fn default() -> Self {
        VelocityConfig {
            k: default_k(),
            times: default_times(),
            component: ComponentName::Up,
        }
    }
}

/// Everything that determines an experiment's outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "format_version")]
    pub format: u32,
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub ensemble: usize,
    #[serde(default)]
    pub coin: CoinConfig,
    #[serde(default)]
    pub disorder: DisorderConfig,
    #[serde(default)]
    pub record: RecordConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub velocity: VelocityConfig,
    /// Output directory; not part of the config hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn format_version() -> u32 {
    FORMAT_VERSION
}

fn default_steps() -> usize {
    100
}

fn one() -> usize {
    1
}

pub const DEFAULT_OUTPUT: &str = "qwalk-out";
pub const DEFAULT_THETA_1D: f64 = FRAC_PI_4;
pub const DEFAULT_THETA_2D: f64 = 0.0;
pub const DEFAULT_VARTHETA_2D: f64 = 0.0;

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            format: FORMAT_VERSION,
            experiment,
            initial: InitialSpec::default(),
            steps: default_steps(),
            seed: 0,
            ensemble: 1,
            coin: CoinConfig::default(),
            disorder: DisorderConfig::default(),
            record: RecordConfig::default(),
            sweep: SweepConfig::default(),
            velocity: VelocityConfig::default(),
            output: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { String::new() } else { path }, e.inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn theta(&self) -> f64 {
        self.coin.theta.unwrap_or(match self.experiment {
            ExperimentKind::Walk2d => DEFAULT_THETA_2D,
            _ => DEFAULT_THETA_1D,
        })
    }

    pub fn vartheta(&self) -> f64 {
        self.coin.vartheta.unwrap_or(DEFAULT_VARTHETA_2D)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
    }

    /// SHA-256 of the canonical JSON form with the output directory removed.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = None;
        let bytes = serde_json::to_vec(&canonical).expect("config serialises");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Horizon of the schedules: the step count, or the longest velocity window.
    pub fn horizon(&self) -> usize {
        match self.experiment {
            ExperimentKind::VgEffective => self.velocity.times.iter().copied().max().unwrap_or(1),
            _ => self.steps,
        }
    }

    pub fn schedule_spec(&self, kind: DisorderKind, fraction: f64, seed: u64) -> ScheduleSpec {
        let mut spec = ScheduleSpec::new(kind, seed, self.horizon().max(1))
            .with_fraction(fraction)
            .with_su2(self.disorder.su2);
        spec.base_theta = self.theta();
        spec
    }

    pub fn schedule_2d_spec(&self, kind: DisorderKind, fraction: f64, seed: u64) -> Schedule2DSpec {
        let mut spec = Schedule2DSpec::new(kind, seed, self.steps.max(1)).with_fraction(fraction);
        spec.base_theta = self.theta();
        spec.base_vartheta = self.vartheta();
        spec
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != FORMAT_VERSION {
            return Err(Error::config("format", format!("unsupported format {}", self.format)));
        }
        self.initial
            .validate()
            .map_err(|e| Error::config("initial", e.to_string()))?;
        if self.ensemble == 0 {
            return Err(Error::config("ensemble", "must be at least 1"));
        }
        if self.experiment.is_walk() && !(1..=MAX_STEPS).contains(&self.steps) {
            return Err(Error::config("steps", format!("must lie in 1..={MAX_STEPS}")));
        }
        if self.experiment == ExperimentKind::Walk2d && self.steps > 400 {
            return Err(Error::config("steps", "2D walks are limited to 400 steps"));
        }
        let theta = self.theta();
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::config("coin.theta", format!("{theta} outside [0, π]")));
        }
        let vartheta = self.vartheta();
        if !(0.0..=PI).contains(&vartheta) {
            return Err(Error::config("coin.vartheta", format!("{vartheta} outside [0, π]")));
        }
        if self.disorder.kinds.is_empty() {
            return Err(Error::config("disorder.kinds", "at least one kind is required"));
        }
        if self.disorder.fractions.is_empty() {
            return Err(Error::config("disorder.fractions", "at least one fraction is required"));
        }
        for (i, f) in self.disorder.fractions.iter().enumerate() {
            if !(0.0..=1.0).contains(f) {
                return Err(Error::config(format!("disorder.fractions[{i}]"), format!("{f} outside [0, 1]")));
            }
        }
        if self.disorder.su2 && self.experiment == ExperimentKind::Walk2d {
            return Err(Error::config("disorder.su2", "SU(2) coins are one-dimensional only"));
        }
        if let Some(steps) = &self.record.distribution_steps {
            for (i, &t) in steps.iter().enumerate() {
                if t > self.steps {
                    return Err(Error::config(
                        format!("record.distribution_steps[{i}]"),
                        format!("{t} exceeds steps = {}", self.steps),
                    ));
                }
            }
        }
        match self.experiment {
            ExperimentKind::DispersionSweep => self.validate_sweep(),
            ExperimentKind::VgEffective => self.validate_velocity(),
            _ => Ok(()),
        }
    }

    fn validate_sweep(&self) -> Result<()> {
        for (name, axis) in [("sweep.k", &self.sweep.k), ("sweep.theta", &self.sweep.theta), ("sweep.phi", &self.sweep.phi)] {
            let values = axis.values();
            if values.is_empty() {
                return Err(Error::config(name, "axis is empty"));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::config(name, "non-finite value"));
            }
        }
        if self.sweep.k.values().iter().any(|k| k.abs() > std::f64::consts::SQRT_2 * (1.0 + 1e-12)) {
            return Err(Error::config("sweep.k", "|k| must not exceed √2"));
        }
        if self.sweep.theta.values().iter().any(|t| !(0.0..=PI).contains(t)) {
            return Err(Error::config("sweep.theta", "values must lie in [0, π]"));
        }
        Ok(())
    }

    fn validate_velocity(&self) -> Result<()> {
        if !self.velocity.k.is_finite() {
            return Err(Error::config("velocity.k", "must be finite"));
        }
        if self.velocity.times.is_empty() {
            return Err(Error::config("velocity.times", "at least one time is required"));
        }
        for (i, &t) in self.velocity.times.iter().enumerate() {
            if !(1..=MAX_HALFWIDTH).contains(&t) {
                return Err(Error::config(format!("velocity.times[{i}]"), format!("must lie in 1..={MAX_HALFWIDTH}")));
            }
        }
        Ok(())
    }
}
