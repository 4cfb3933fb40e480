//! Command-line surface. Flags override values loaded from `--config`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use stellar_qec::channels::ChannelKind;
use stellar_qec::source::Parameter;

use crate::config::{
    parse_parameter, ProtocolConfig, QfiMode, SourceConfig, StirapConfig, SweepConfig, ThresholdConfig,
};

#[derive(Debug, Parser)]
#[command(name = "stellar-qec", version, about = "Fisher-information sweeps and datasets for error-corrected stellar interferometry")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON file with the subcommand's config fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid evaluation (0 = all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub qfi_mode: Option<QfiMode>,
    /// Fill the runtime_ms column with wall-clock times. Output is then no
    /// longer reproducible byte for byte.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// QFI of the protected and unprotected logical state over a noise grid.
    QfiSweep(SweepArgs),
    /// Population trajectory of the photon-to-atom transfer.
    Stirap(StirapArgs),
    /// Encoder acceptance, fidelity and multi-photon discrimination.
    Protocol(ProtocolArgs),
    /// Chernoff bound against the exact binomial failure tail.
    Threshold(ThresholdArgs),
    /// Fock-sector weights of the thermal source.
    Source(SourceArgs),
}

fn set<T>(slot: &mut T, value: &Option<T>)
where
    T: Clone,
{
    if let Some(v) = value {
        *slot = v.clone();
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// none, rep-<n>, four-qubit or five-one-three.
    #[arg(long)]
    pub code: Option<String>,
    /// dephasing, depolarizing or amplitude-damping.
    #[arg(long)]
    pub channel: Option<ChannelKind>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Comma-separated channel strengths.
    #[arg(long, value_delimiter = ',')]
    pub p_grid: Option<Vec<f64>>,
    /// phi or gamma.
    #[arg(long, value_parser = parse_parameter)]
    pub parameter: Option<Parameter>,
}

impl SweepArgs {
    pub fn merge(&self, mut cfg: SweepConfig, common: &CommonArgs) -> SweepConfig {
        set(&mut cfg.code, &self.code);
        set(&mut cfg.channel, &self.channel);
        set(&mut cfg.gamma, &self.gamma);
        set(&mut cfg.phi, &self.phi);
        set(&mut cfg.p_grid, &self.p_grid);
        set(&mut cfg.parameter, &self.parameter);
        set(&mut cfg.qfi_mode, &common.qfi_mode);
        set(&mut cfg.seed, &common.seed);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct StirapArgs {
    #[arg(long)]
    pub total_time: Option<f64>,
    #[arg(long)]
    pub sector: Option<usize>,
    /// Use the explicit or default schedule without searching.
    #[arg(long)]
    pub no_optimize: bool,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

impl StirapArgs {
    pub fn merge(&self, mut cfg: StirapConfig, common: &CommonArgs) -> StirapConfig {
        set(&mut cfg.total_time, &self.total_time);
        set(&mut cfg.sector, &self.sector);
        if self.no_optimize {
            cfg.optimize = false;
        }
        for (slot, v) in [
            (&mut cfg.omega0, self.omega0),
            (&mut cfg.t1, self.t1),
            (&mut cfg.t2, self.t2),
            (&mut cfg.center, self.center),
            (&mut cfg.width, self.width),
        ] {
            if v.is_some() {
                *slot = v;
            }
        }
        set(&mut cfg.samples, &self.samples);
        set(&mut cfg.tolerance, &self.tolerance);
        set(&mut cfg.seed, &common.seed);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
}

impl ProtocolArgs {
    pub fn merge(&self, mut cfg: ProtocolConfig, common: &CommonArgs) -> ProtocolConfig {
        set(&mut cfg.epsilon, &self.epsilon);
        set(&mut cfg.gamma, &self.gamma);
        set(&mut cfg.phi, &self.phi);
        set(&mut cfg.delta, &self.delta);
        set(&mut cfg.seed, &common.seed);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Relative distance d/n.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Comma-separated code lengths.
    #[arg(long = "n", value_delimiter = ',')]
    pub n_values: Option<Vec<u64>>,
    /// Comma-separated physical error rates.
    #[arg(long = "p", value_delimiter = ',')]
    pub p_values: Option<Vec<f64>>,
}

impl ThresholdArgs {
    pub fn merge(&self, mut cfg: ThresholdConfig, common: &CommonArgs) -> ThresholdConfig {
        set(&mut cfg.rate, &self.rate);
        set(&mut cfg.n_values, &self.n_values);
        set(&mut cfg.p_values, &self.p_values);
        set(&mut cfg.seed, &common.seed);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
}

impl SourceArgs {
    pub fn merge(&self, mut cfg: SourceConfig, common: &CommonArgs) -> SourceConfig {
        set(&mut cfg.epsilon, &self.epsilon);
        set(&mut cfg.gamma, &self.gamma);
        set(&mut cfg.phi, &self.phi);
        set(&mut cfg.seed, &common.seed);
        cfg
    }
}
