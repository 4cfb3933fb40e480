//! Population trajectory of a single photon-number sector.

use stellar_qec::stirap::{
    detuning, optimize_pulse, propagate, Drive, IntegratorOptions, OptimizeOptions, PulseSchedule, Record,
    SectorState, Trajectory, LEVEL_0, LEVEL_1, LEVEL_E,
};

use crate::config::StirapConfig;
use crate::output::{csv_header, csv_line, number};
use crate::{CliError, CliResult};

pub const COLUMNS: &str = "t,omega,delta,pop_0R,pop_e,pop_1R";

/// Largest tolerated `|‖ψ‖ − 1|` along the trajectory.
pub const MAX_NORM_DRIFT: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct StirapRun {
    pub schedule: PulseSchedule,
    pub optimized: bool,
    pub trajectory: Trajectory,
}

fn schedule_for(cfg: &StirapConfig) -> CliResult<(PulseSchedule, bool)> {
    let base = PulseSchedule::default_for(cfg.total_time);
    if cfg.has_explicit_schedule() || !cfg.optimize {
        let s = PulseSchedule::new(
            cfg.total_time,
            cfg.omega0.unwrap_or(base.omega0),
            cfg.t1.unwrap_or(base.t1),
            cfg.t2.unwrap_or(base.t2),
            cfg.center.unwrap_or(base.center),
            cfg.width.unwrap_or(base.width),
        )?;
        return Ok((s, false));
    }
    Ok((optimize_pulse(cfg.total_time, cfg.sector, &OptimizeOptions::default())?.schedule, true))
}

pub fn run_stirap(cfg: &StirapConfig) -> CliResult<StirapRun> {
    cfg.validate()?;
    let (schedule, optimized) = schedule_for(cfg)?;
    let opts = IntegratorOptions {
        tolerance: cfg.tolerance,
        ..Default::default()
    };
    let trajectory = propagate(
        &schedule,
        SectorState::photons_in_cavity(cfg.sector),
        &opts,
        Record::Grid(cfg.samples),
    )?;
    if trajectory.max_norm_drift > MAX_NORM_DRIFT {
        return Err(CliError::Numerical(format!("norm drift {:e}", trajectory.max_norm_drift)));
    }
    Ok(StirapRun {
        schedule,
        optimized,
        trajectory,
    })
}

pub fn to_csv(cfg: &StirapConfig, run: &StirapRun) -> String {
    let s = &run.schedule;
    let tr = &run.trajectory;
    let schedule = format!(
        "total_time={} omega0={} t1={} t2={} center={} width={} optimized={}",
        number(s.total_time),
        number(s.omega0),
        number(s.t1),
        number(s.t2),
        number(s.center),
        number(s.width),
        run.optimized
    );
    let mut out = csv_header(
        "stirap",
        cfg,
        &[
            ("schedule", schedule),
            ("max_excited", number(tr.max_excited)),
            ("max_norm_drift", number(tr.max_norm_drift)),
        ],
    );
    out.push_str(COLUMNS);
    out.push('\n');
    for (t, pops) in tr.times.iter().zip(tr.populations()) {
        let omega = s.omega(*t);
        out.push_str(&csv_line(&[
            number(*t),
            number(omega),
            number(detuning(omega)),
            number(pops[LEVEL_0]),
            number(pops[LEVEL_E]),
            number(pops[LEVEL_1]),
        ]));
    }
    out
}
