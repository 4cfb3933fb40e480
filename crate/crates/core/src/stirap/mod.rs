//! Cavity-assisted adiabatic passage of a photon into an atomic ground state.
//!
//! Each photon-number sector `n` is a three-level system over
//! `{|1, n−1⟩, |e, n−1⟩, |0, n⟩}` driven by a pump `Ω(t)` with detuning
//! `Δ = 1 + Ω²` (units where the cavity coupling `g = 1`). Adiabatically
//! following the zero-energy dark state moves `|0, n⟩` to `−|1, n−1⟩`.

pub mod integrate;
pub mod simplex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, ONE, ZERO};
pub use integrate::{IntegratorOptions, Stepper};

/// Smallest allowed initial pump amplitude.
pub const MIN_OMEGA0: f64 = 5.0;
/// Pump amplitudes above this are rejected by the optimizer.
pub const MAX_OMEGA0: f64 = 30.0;
pub const MIN_TOTAL_TIME: f64 = 10.0;
/// Required final transfer population for [`two_photon_phase`].
pub const TRANSFER_THRESHOLD: f64 = 0.99;

/// Basis indices within a sector.
pub const LEVEL_1: usize = 0;
pub const LEVEL_E: usize = 1;
pub const LEVEL_0: usize = 2;

/// `Δ(Ω) = 1 + Ω²`.
pub fn detuning(omega: f64) -> f64 {
    1.0 + omega * omega
}

/// Sector Hamiltonian `(0, Ω*, 0; Ω, −Δ, √n; 0, √n, 0)`.
pub fn hamiltonian_sector(n: usize, omega: Complex64, delta: f64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::OutOfRange("sector needs n ≥ 1".into()));
    }
    let c = Complex64::new((n as f64).sqrt(), 0.0);
    ComplexMatrix::new(
        3,
        3,
        vec![
            ZERO,
            omega.conj(),
            ZERO,
            omega,
            Complex64::new(-delta, 0.0),
            c,
            ZERO,
            c,
            ZERO,
        ],
    )
}

/// Zero-energy eigenvector `∝ (−√n/Ω, 0, 1)`. At `Ω = 0` returns the limit
/// `(−1, 0, 0)`.
pub fn dark_state(n: usize, omega: Complex64) -> Result<[Complex64; 3]> {
    if n == 0 {
        return Err(Error::OutOfRange("sector needs n ≥ 1".into()));
    }
    if omega.norm() == 0.0 {
        return Ok([-ONE, ZERO, ZERO]);
    }
    // (−√n, 0, Ω) scaled, which stays finite as Ω → ∞
    let s = (n as f64).sqrt();
    let norm = (n as f64 + omega.norm_sqr()).sqrt();
    let phase = omega.conj() / omega.norm();
    Ok([
        Complex64::new(-s / norm, 0.0) * phase,
        ZERO,
        Complex64::new(omega.norm() / norm, 0.0),
    ])
}

/// Time-dependent pump amplitude (real, in units of `g`).
pub trait Drive {
    fn omega(&self, t: f64) -> f64;
    fn total_time(&self) -> f64;
    /// Interior times where the drive has a kink.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantDrive {
    pub omega: f64,
    pub duration: f64,
}

impl Drive for ConstantDrive {
    fn omega(&self, _t: f64) -> f64 {
        self.omega
    }
    fn total_time(&self) -> f64 {
        self.duration
    }
}

/// Three-segment pump: linear on `[0, t1]`, `Ω₀ (1 − tanh((t − c)/w))/2`
/// on `[t1, t2]`, linear down to zero on `[t2, T]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub total_time: f64,
    pub omega0: f64,
    pub t1: f64,
    pub t2: f64,
    pub center: f64,
    pub width: f64,
}

impl PulseSchedule {
    pub fn new(total_time: f64, omega0: f64, t1: f64, t2: f64, center: f64, width: f64) -> Result<Self> {
        let s = Self {
            total_time,
            omega0,
            t1,
            t2,
            center,
            width,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.total_time, self.omega0, self.t1, self.t2, self.center, self.width]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::OutOfRange("non-finite pulse parameter".into()));
        }
        if self.omega0 < MIN_OMEGA0 {
            return Err(Error::OutOfRange(format!("omega0 = {} below {MIN_OMEGA0}", self.omega0)));
        }
        if !(0.0 < self.t1 && self.t1 < self.t2 && self.t2 < self.total_time) {
            return Err(Error::OutOfRange(format!(
                "need 0 < t1 < t2 < T, got t1 = {}, t2 = {}, T = {}",
                self.t1, self.t2, self.total_time
            )));
        }
        if self.width <= 0.0 {
            return Err(Error::OutOfRange(format!("width = {} must be positive", self.width)));
        }
        Ok(())
    }

    /// Starting guess used by [`optimize_pulse`].
    pub fn default_for(total_time: f64) -> Self {
        Self {
            total_time,
            omega0: 20.0,
            t1: 0.1 * total_time,
            t2: 0.9 * total_time,
            center: 0.5 * total_time,
            width: 0.1 * total_time,
        }
    }

    fn shape(&self, t: f64) -> f64 {
        0.5 * (1.0 - ((t - self.center) / self.width).tanh())
    }
}

impl Drive for PulseSchedule {
    fn omega(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.omega0;
        }
        if t >= self.total_time {
            return 0.0;
        }
        if t < self.t1 {
            let end = self.omega0 * self.shape(self.t1);
            self.omega0 + (end - self.omega0) * (t / self.t1)
        } else if t <= self.t2 {
            self.omega0 * self.shape(t)
        } else {
            let start = self.omega0 * self.shape(self.t2);
            start * (self.total_time - t) / (self.total_time - self.t2)
        }
    }

    fn total_time(&self) -> f64 {
        self.total_time
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.t1, self.t2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorState {
    pub n: usize,
    pub amplitudes: [Complex64; 3],
}

impl SectorState {
    /// `|0, n⟩`: atom in the initial ground state, `n` photons in the cavity.
    pub fn photons_in_cavity(n: usize) -> Self {
        Self {
            n,
            amplitudes: [ZERO, ZERO, ONE],
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn populations(&self) -> [f64; 3] {
        self.amplitudes.map(|a| a.norm_sqr())
    }
}

/// How much of the trajectory [`propagate`] keeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Record {
    /// Every accepted integrator step.
    Steps,
    /// `k + 1` equally spaced times including both ends.
    Grid(usize),
    FinalOnly,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub n: usize,
    pub times: Vec<f64>,
    pub amplitudes: Vec<[Complex64; 3]>,
    pub final_state: SectorState,
    /// Largest `|‖ψ‖ − 1|` seen at any accepted step.
    pub max_norm_drift: f64,
    /// Largest `|e⟩` population seen at any accepted step.
    pub max_excited: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn populations(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.amplitudes.iter().map(|a| a.map(|c| c.norm_sqr()))
    }
}

/// Solves `i dψ/dt = H⁽ⁿ⁾(t) ψ` over `[0, T]`.
pub fn propagate(
    drive: &impl Drive,
    initial: SectorState,
    opts: &IntegratorOptions,
    record: Record,
) -> Result<Trajectory> {
    let n = initial.n;
    if n == 0 {
        return Err(Error::OutOfRange("sector needs n ≥ 1".into()));
    }
    let total = drive.total_time();
    if !(total > 0.0) {
        return Err(Error::OutOfRange(format!("total time {total} must be positive")));
    }
    let coupling = (n as f64).sqrt();
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let om = drive.omega(t);
        let delta = detuning(om);
        // −i H y with H real symmetric
        let h0 = om * y[1];
        let h1 = om * y[0] - delta * y[1] + coupling * y[2];
        let h2 = coupling * y[1];
        dy[0] = Complex64::new(h0.im, -h0.re);
        dy[1] = Complex64::new(h1.im, -h1.re);
        dy[2] = Complex64::new(h2.im, -h2.re);
    };

    let grid_times: Vec<f64> = match record {
        Record::Grid(k) => {
            let k = k.max(1);
            (0..=k).map(|i| if i == k { total } else { total * i as f64 / k as f64 }).collect()
        }
        _ => Vec::new(),
    };
    // stop at kinks and at every sample time
    let mut stops: Vec<f64> = drive.breakpoints().into_iter().filter(|&b| b > 0.0 && b < total).collect();
    stops.extend(grid_times.iter().skip(1));
    stops.push(total);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut y = initial.amplitudes.to_vec();
    let mut times = Vec::new();
    let mut amplitudes = Vec::new();
    if record != Record::FinalOnly {
        times.push(0.0);
        amplitudes.push(initial.amplitudes);
    }
    let mut max_norm_drift = (initial.norm() - 1.0).abs();
    let mut max_excited = initial.amplitudes[LEVEL_E].norm_sqr();

    let mut stepper = Stepper::new(3, rhs, *opts);
    let mut t = 0.0;
    for &stop in &stops {
        stepper.advance(&mut y, t, stop, |ts, ys| {
            let nrm: f64 = ys.iter().map(|a| a.norm_sqr()).sum();
            max_norm_drift = max_norm_drift.max((nrm.sqrt() - 1.0).abs());
            max_excited = max_excited.max(ys[LEVEL_E].norm_sqr());
            if record == Record::Steps {
                times.push(ts);
                amplitudes.push([ys[0], ys[1], ys[2]]);
            }
        })?;
        t = stop;
        if grid_times.contains(&stop) {
            times.push(stop);
            amplitudes.push([y[0], y[1], y[2]]);
        }
    }
    let steps = stepper.accepted;
    Ok(Trajectory {
        n,
        times,
        amplitudes,
        final_state: SectorState {
            n,
            amplitudes: [y[0], y[1], y[2]],
        },
        max_norm_drift,
        max_excited,
        steps,
    })
}

/// Final amplitude of `|1, n−1⟩` after propagating `|0, n⟩`.
pub fn final_amplitude(drive: &impl Drive, n: usize, opts: &IntegratorOptions) -> Result<Complex64> {
    let tr = propagate(drive, SectorState::photons_in_cavity(n), opts, Record::FinalOnly)?;
    Ok(tr.final_state.amplitudes[LEVEL_1])
}

/// Smallest final transfer population over sectors `1..=max_n`.
pub fn transfer_objective(drive: &impl Drive, max_n: usize, opts: &IntegratorOptions) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for n in 1..=max_n {
        worst = worst.min(final_amplitude(drive, n, opts)?.norm_sqr());
    }
    Ok(worst)
}

/// Phase of the final amplitude relative to the adiabatic limit `−1`,
/// in `(−π, π]`.
pub fn dynamical_phase(final_amplitude: Complex64) -> f64 {
    (-final_amplitude).arg()
}

#[derive(Clone, Debug)]
pub struct OptimizeOptions {
    pub simplex: simplex::SimplexOptions,
    /// Integrator settings used inside the search.
    pub integrator: IntegratorOptions,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            simplex: simplex::SimplexOptions {
                f_tolerance: 1e-6,
                x_tolerance: 1e-3,
                ..Default::default()
            },
            integrator: IntegratorOptions {
                tolerance: 1e-8,
                ..Default::default()
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizedPulse {
    pub schedule: PulseSchedule,
    /// Transfer objective at `schedule` under the search's integrator settings.
    pub objective: f64,
    pub evaluations: usize,
    /// False when the evaluation budget ran out first.
    pub converged: bool,
}

fn schedule_from_coords(total_time: f64, u: &[f64]) -> Option<PulseSchedule> {
    let s = PulseSchedule {
        total_time,
        omega0: u[0],
        t1: u[1] * total_time,
        t2: u[2] * total_time,
        center: u[3] * total_time,
        width: u[4].exp() * total_time,
    };
    (s.validate().is_ok() && s.omega0 <= MAX_OMEGA0).then_some(s)
}

/// Maximizes the worst-sector transfer over `n = 1..=objective_n` with a
/// seeded simplex search over `(Ω₀, t1/T, t2/T, c/T, ln(w/T))`.
pub fn optimize_pulse(total_time: f64, objective_n: usize, opts: &OptimizeOptions) -> Result<OptimizedPulse> {
    if !(total_time >= MIN_TOTAL_TIME) {
        return Err(Error::OutOfRange(format!("T = {total_time} below {MIN_TOTAL_TIME}")));
    }
    if objective_n == 0 {
        return Err(Error::OutOfRange("objective needs at least one sector".into()));
    }
    let start = PulseSchedule::default_for(total_time);
    let x0 = [
        start.omega0,
        start.t1 / total_time,
        start.t2 / total_time,
        start.center / total_time,
        (start.width / total_time).ln(),
    ];
    let steps = [4.0, 0.05, 0.05, 0.1, 0.4];
    let cost = |u: &[f64]| match schedule_from_coords(total_time, u) {
        Some(s) => match transfer_objective(&s, objective_n, &opts.integrator) {
            Ok(v) => 1.0 - v,
            Err(_) => f64::INFINITY,
        },
        None => f64::INFINITY,
    };
    let r = simplex::minimize(cost, &x0, &steps, &opts.simplex);
    let schedule = schedule_from_coords(total_time, &r.x).unwrap_or(start);
    Ok(OptimizedPulse {
        schedule,
        objective: 1.0 - r.value,
        evaluations: r.evaluations,
        converged: r.converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPhotonPhase {
    pub a1: Complex64,
    pub a2: Complex64,
    /// `2 arg A₁ − arg A₂` wrapped to `(−π, π]`.
    pub delta: f64,
}

/// Extra phase on the doubly-occupied term after both sites transfer.
pub fn two_photon_phase(drive: &impl Drive, opts: &IntegratorOptions) -> Result<TwoPhotonPhase> {
    let a1 = final_amplitude(drive, 1, opts)?;
    let a2 = final_amplitude(drive, 2, opts)?;
    for (n, a) in [(1, a1), (2, a2)] {
        if a.norm_sqr() < TRANSFER_THRESHOLD {
            return Err(Error::InsufficientTransfer(format!(
                "sector {n} transfers {:.6}, need {TRANSFER_THRESHOLD}",
                a.norm_sqr()
            )));
        }
    }
    Ok(TwoPhotonPhase {
        a1,
        a2,
        delta: wrap_phase(2.0 * a1.arg() - a2.arg()),
    })
}

/// Maps an angle to `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}
