//! Encoder, threshold and source drivers.

use serde_json::{json, Value};
use stellar_qec::bounds::{chernoff_fail_bound, exact_fail_probability, format_threshold, MAX_EXACT_N};
use stellar_qec::encoder::{multiphoton_discriminate, teleport_branches, teleport_capture, vacuum_projection, ProtocolState};
use stellar_qec::qcore::{basis, fidelity, ComplexMatrix};
use stellar_qec::source::{conditioned_state, fock_expansion, one_photon_states, rho_star, two_photon_states, SourceParams};
use stellar_qec::Error;

use crate::config::{ProtocolConfig, SourceConfig, ThresholdConfig};
use crate::output::{csv_header, csv_line, json_header, number, optional};
use crate::CliResult;

/// Capture, parity post-selection, teleportation and multi-photon
/// discrimination for one source setting.
pub fn run_protocol(cfg: &ProtocolConfig) -> CliResult<Value> {
    let params = SourceParams::new(cfg.epsilon, cfg.gamma, cfg.phi)?;
    if !cfg.delta.is_finite() {
        return Err(Error::OutOfRange(format!("delta = {}", cfg.delta)).into());
    }
    let captured = teleport_capture(&rho_star(&params)?)?;
    let (accept, accepted) = vacuum_projection(&captured)?;
    let target = conditioned_state(&params)?.state;
    let fid = fidelity(&accepted, &target)?;

    let branches = teleport_branches(&target)?;
    let mut min_p = f64::INFINITY;
    let mut max_p: f64 = 0.0;
    let mut min_f = f64::INFINITY;
    for b in &branches {
        min_p = min_p.min(b.probability);
        max_p = max_p.max(b.probability);
        min_f = min_f.min(fidelity(&b.state, &target)?);
    }

    let [one_plus, one_minus] = one_photon_states(cfg.phi);
    let [two_0, two_plus, two_minus] = two_photon_states(cfg.phi);
    let inputs = [
        ("vacuum", basis(9, 0)),
        ("one_photon_plus", one_plus),
        ("one_photon_minus", one_minus),
        ("two_photon_0", two_0),
        ("two_photon_plus", two_plus),
        ("two_photon_minus", two_minus),
    ];
    let mut table = Vec::new();
    for (name, v) in inputs {
        let state = ProtocolState::after_transfer(&ComplexMatrix::projector(&v), cfg.delta)?;
        let outcomes: Vec<Value> = multiphoton_discriminate(&state)?
            .iter()
            .map(|o| {
                json!({
                    "tag": o.tag,
                    "level_pair": o.level_pair,
                    "photon_pair": o.photon_pair,
                    "probability": o.probability,
                })
            })
            .collect();
        table.push(json!({ "input": name, "outcomes": outcomes }));
    }

    Ok(json!({
        "header": json_header("protocol", cfg),
        "accept_probability": accept,
        "accept_deviation": (accept - cfg.epsilon).abs(),
        "accepted_fidelity": fid,
        "teleport": {
            "branches": branches.len(),
            "min_probability": min_p,
            "max_probability": max_p,
            "min_fidelity": min_f,
        },
        "discrimination": table,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdRow {
    pub n: u64,
    pub d: f64,
    pub p: f64,
    /// Absent when `p ≥ d/2n`, where the bound says nothing.
    pub chernoff_bound: Option<f64>,
    /// Absent above the exact-evaluation length limit.
    pub exact_tail: Option<f64>,
}

pub const THRESHOLD_COLUMNS: &str = "n,d,p,chernoff_bound,exact_tail";

/// Tolerable per-qubit error rate at relative distance `rate`.
pub fn threshold(rate: f64) -> f64 {
    rate / 2.0
}

pub fn run_threshold(cfg: &ThresholdConfig) -> CliResult<Vec<ThresholdRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.n_values {
        let d = cfg.rate * n as f64;
        for &p in &cfg.p_values {
            let chernoff_bound = match chernoff_fail_bound(n, d, p) {
                Ok(b) => Some(b.bound),
                Err(Error::VacuousBound { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let exact_tail = if n <= MAX_EXACT_N {
                Some(exact_fail_probability(n, d, p)?)
            } else {
                None
            };
            rows.push(ThresholdRow {
                n,
                d,
                p,
                chernoff_bound,
                exact_tail,
            });
        }
    }
    Ok(rows)
}

pub fn threshold_csv(cfg: &ThresholdConfig, rows: &[ThresholdRow]) -> String {
    let t = threshold(cfg.rate);
    let mut out = csv_header(
        "threshold",
        cfg,
        &[("threshold", format!("{} ({})", format_threshold(t), number(t)))],
    );
    out.push_str(THRESHOLD_COLUMNS);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_line(&[
            r.n.to_string(),
            number(r.d),
            number(r.p),
            optional(r.chernoff_bound),
            optional(r.exact_tail),
        ]));
    }
    out
}

pub fn run_source(cfg: &SourceConfig) -> CliResult<Value> {
    let params = SourceParams::new(cfg.epsilon, cfg.gamma, cfg.phi)?;
    let dec = fock_expansion(&params)?;
    Ok(json!({
        "header": json_header("source", cfg),
        "p00": dec.p00,
        "one_photon": dec.one_photon,
        "two_photon": dec.two_photon,
        "n_a": dec.n_a,
        "n_b": dec.n_b,
        "truncated_weight": 1.0 - dec.total_weight(),
    }))
}
