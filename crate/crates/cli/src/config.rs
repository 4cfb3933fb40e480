//! JSON-loadable configs for each subcommand.
//!
//! Field names double as the config-file keys. Missing keys take the
//! defaults below; unknown keys are rejected.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use stellar_qec::channels::ChannelKind;
use stellar_qec::codes::{five_qubit_code, four_qubit_code, repetition_code, StabilizerCode};
use stellar_qec::qcore::MAX_QUBITS;
use stellar_qec::source::Parameter;

use crate::{CliError, CliResult};

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum QfiMode {
    /// QFI of the syndrome-averaged logical state.
    Averaged,
    /// Sum of branch QFIs when the syndromes are kept.
    #[serde(alias = "syndrome-resolved")]
    SyndromeResolved,
}

/// `none`, `rep-<n>`, `four-qubit` or `five-one-three`.
pub fn parse_code(name: &str) -> CliResult<StabilizerCode> {
    match name {
        "none" => Ok(StabilizerCode::unencoded()),
        "four-qubit" => Ok(four_qubit_code()),
        "five-one-three" => Ok(five_qubit_code()),
        _ => {
            let n = name
                .strip_prefix("rep-")
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| CliError::Config(format!("unknown code {name:?}")))?;
            Ok(repetition_code(n)?)
        }
    }
}

pub fn parse_parameter(s: &str) -> Result<Parameter, String> {
    match s {
        "phi" => Ok(Parameter::Phi),
        "gamma" => Ok(Parameter::Gamma),
        _ => Err(format!("expected phi or gamma, got {s:?}")),
    }
}

fn check_unit(name: &str, x: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {x} not in [0, 1]")))
    }
}

fn check_finite(name: &str, x: f64) -> CliResult<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {x} is not finite")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub code: String,
    pub channel: ChannelKind,
    pub gamma: f64,
    pub phi: f64,
    /// Channel strengths.
    pub p_grid: Vec<f64>,
    pub parameter: Parameter,
    pub qfi_mode: QfiMode,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            code: "none".into(),
            channel: ChannelKind::Dephasing,
            gamma: 1.0,
            phi: 0.0,
            p_grid: (0..=10).map(|k| k as f64 / 20.0).collect(),
            parameter: Parameter::Phi,
            qfi_mode: QfiMode::Averaged,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// Checks the config and builds its code.
    pub fn validate(&self) -> CliResult<StabilizerCode> {
        if self.p_grid.is_empty() {
            return Err(CliError::Config("p_grid is empty".into()));
        }
        for &p in &self.p_grid {
            check_unit("p", p)?;
        }
        check_unit("gamma", self.gamma)?;
        check_finite("phi", self.phi)?;
        let code = parse_code(&self.code)?;
        if 2 * code.n > MAX_QUBITS {
            return Err(CliError::Config(format!(
                "code {} needs a {}-qubit register, limit is {MAX_QUBITS}",
                self.code,
                2 * code.n
            )));
        }
        Ok(code)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StirapConfig {
    /// Pulse duration in units of the inverse cavity coupling.
    pub total_time: f64,
    /// Photon-number sector to propagate.
    pub sector: usize,
    /// Search for a schedule instead of using the explicit or default one.
    pub optimize: bool,
    /// Explicit schedule parameters; any that are set disable the search.
    pub omega0: Option<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub center: Option<f64>,
    pub width: Option<f64>,
    /// Number of intervals on the output time grid.
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for StirapConfig {
    fn default() -> Self {
        Self {
            total_time: 50.0,
            sector: 1,
            optimize: true,
            omega0: None,
            t1: None,
            t2: None,
            center: None,
            width: None,
            samples: 500,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl StirapConfig {
    pub fn has_explicit_schedule(&self) -> bool {
        [self.omega0, self.t1, self.t2, self.center, self.width].iter().any(Option::is_some)
    }

    pub fn validate(&self) -> CliResult<()> {
        check_finite("total_time", self.total_time)?;
        if self.sector == 0 {
            return Err(CliError::Config("sector must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(CliError::Config(format!("tolerance = {} not in (0, 1)", self.tolerance)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolConfig {
    /// Mean photon number per temporal mode.
    pub epsilon: f64,
    pub gamma: f64,
    pub phi: f64,
    /// Extra phase on the doubly-occupied term after transfer.
    pub delta: f64,
    pub seed: u64,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            gamma: 0.9,
            phi: 0.0,
            delta: 0.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    /// Relative distance `d/n`.
    pub rate: f64,
    pub n_values: Vec<u64>,
    pub p_values: Vec<f64>,
    pub seed: u64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            rate: stellar_qec::bounds::GV_RELATIVE_DISTANCE,
            n_values: vec![100, 1000, 10_000],
            p_values: vec![0.02, 0.04, 0.06, 0.08],
            seed: 0,
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return Err(CliError::Config(format!("rate = {} not in (0, 1]", self.rate)));
        }
        if self.n_values.is_empty() || self.p_values.is_empty() {
            return Err(CliError::Config("n_values and p_values must be nonempty".into()));
        }
        if self.n_values.contains(&0) {
            return Err(CliError::Config("n must be positive".into()));
        }
        for &p in &self.p_values {
            check_unit("p", p)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceConfig {
    pub epsilon: f64,
    pub gamma: f64,
    pub phi: f64,
    pub seed: u64,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            gamma: 0.9,
            phi: 0.0,
            seed: 0,
        }
    }
}
