//! QFI over a grid of channel strengths.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rayon::prelude::*;
use stellar_qec::channels::KrausChannel;
use stellar_qec::codes::StabilizerCode;
use stellar_qec::metrology::{local_measurement_fi, qfi, syndrome_resolved_qfi};
use stellar_qec::recovery::{qec_pipeline_branches, qec_pipeline_with, BlockDecoder};
use stellar_qec::source::{conditioned_state, ParamDerivativeFamily, Parameter, SourceParams};

use crate::config::{QfiMode, SweepConfig};
use crate::output::{csv_header, csv_line, number};
use crate::{CliError, CliResult};

/// Slack allowed when checking that the local measurement stays below the QFI.
const FI_SLACK: f64 = 1e-9;

pub const COLUMNS: &str = "p,qfi,qfi_unprotected,fi_local_at_adaptive_theta,runtime_ms";

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub qfi: f64,
    pub qfi_unprotected: f64,
    pub fi_local_at_adaptive_theta: f64,
    pub runtime_ms: f64,
}

/// Product-measurement angle that is optimal for `parameter` without noise.
pub fn adaptive_theta(parameter: Parameter, phi: f64) -> f64 {
    match parameter {
        Parameter::Phi => FRAC_PI_2 - phi,
        Parameter::Gamma => -phi,
    }
}

struct Pipeline {
    code: StabilizerCode,
    decoder: BlockDecoder,
}

impl Pipeline {
    fn new(code: StabilizerCode) -> CliResult<Self> {
        let decoder = BlockDecoder::new(&code)?;
        Ok(Self { code, decoder })
    }

    /// QFI under `mode` and the syndrome-averaged output state.
    fn evaluate(
        &self,
        channel: &KrausChannel,
        input: &ParamDerivativeFamily,
        which: Parameter,
        mode: QfiMode,
    ) -> CliResult<(f64, ParamDerivativeFamily)> {
        let averaged = qec_pipeline_with(&self.decoder, channel, input)?;
        let j = match mode {
            QfiMode::Averaged => qfi(&averaged, which)?,
            QfiMode::SyndromeResolved => {
                syndrome_resolved_qfi(&qec_pipeline_branches(&self.code, channel, input)?, which)?
            }
        };
        Ok((j, averaged))
    }
}

fn row(
    cfg: &SweepConfig,
    protected: &Pipeline,
    bare: &Pipeline,
    input: &ParamDerivativeFamily,
    p: f64,
    timing: bool,
) -> CliResult<SweepRow> {
    let start = Instant::now();
    let channel = cfg.channel.build(p)?;
    let (j, out) = protected.evaluate(&channel, input, cfg.parameter, cfg.qfi_mode)?;
    let (j_bare, _) = bare.evaluate(&channel, input, cfg.parameter, cfg.qfi_mode)?;
    let (fi_phi, fi_gamma) = local_measurement_fi(&out, adaptive_theta(cfg.parameter, cfg.phi));
    let fi = match cfg.parameter {
        Parameter::Phi => fi_phi,
        Parameter::Gamma => fi_gamma,
    };
    if !(j >= 0.0 && j.is_finite()) {
        return Err(CliError::Numerical(format!("QFI {j} at p = {p}")));
    }
    if fi > j + FI_SLACK {
        return Err(CliError::Numerical(format!("local Fisher information {fi} exceeds QFI {j} at p = {p}")));
    }
    let runtime_ms = if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    Ok(SweepRow {
        p,
        qfi: j,
        qfi_unprotected: j_bare,
        fi_local_at_adaptive_theta: fi,
        runtime_ms,
    })
}

/// One row per grid point, in grid order.
pub fn run_qfi_sweep(cfg: &SweepConfig, opts: &RunOptions) -> CliResult<Vec<SweepRow>> {
    let code = cfg.validate()?;
    let protected = Pipeline::new(code)?;
    let bare = Pipeline::new(StabilizerCode::unencoded())?;
    let input = conditioned_state(&SourceParams::new(0.0, cfg.gamma, cfg.phi)?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        cfg.p_grid
            .par_iter()
            .map(|&p| row(cfg, &protected, &bare, &input, p, opts.timing))
            .collect()
    })
}

pub fn to_csv(cfg: &SweepConfig, opts: &RunOptions, rows: &[SweepRow]) -> String {
    let mut out = csv_header("qfi-sweep", cfg, &[("timing", opts.timing.to_string())]);
    out.push_str(COLUMNS);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_line(&[
            number(r.p),
            number(r.qfi),
            number(r.qfi_unprotected),
            number(r.fi_local_at_adaptive_theta),
            number(r.runtime_ms),
        ]));
    }
    out
}
