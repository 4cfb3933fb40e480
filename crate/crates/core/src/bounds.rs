//! Failure-probability bounds for codes of growing length.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Asymptotic relative distance `d/n` reachable by random codes.
pub const GV_RELATIVE_DISTANCE: f64 = 0.1893;

/// Largest `n` accepted by [`exact_fail_probability`].
pub const MAX_EXACT_N: u64 = 10_000;

/// `D(x‖y) = x ln(x/y) + (1−x) ln((1−x)/(1−y))` in nats, with `0 ln 0 = 0`.
pub fn kl_divergence(x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::OutOfRange(format!("y = {y} must lie strictly inside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("x = {x} not in [0, 1]")));
    }
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    Ok(term(x, y) + term(1.0 - x, 1.0 - y))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureBound {
    pub n: u64,
    /// Distance; real-valued so that `d = 0.1893 n` can be used directly.
    pub d: f64,
    pub p: f64,
    pub bound: f64,
}

/// `exp(−n D(d/2n ‖ p))`, a bound on the chance that at least `d/2` of `n`
/// independent qubits fail.
pub fn chernoff_fail_bound(n: u64, d: f64, p: f64) -> Result<FailureBound> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if !(d > 0.0 && d <= 2.0 * n as f64) {
        return Err(Error::OutOfRange(format!("d = {d} must lie in (0, 2n]")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} not in [0, 1]")));
    }
    let threshold = d / (2.0 * n as f64);
    if p >= threshold {
        return Err(Error::VacuousBound { p, threshold });
    }
    let bound = if p == 0.0 {
        0.0
    } else {
        (-(n as f64) * kl_divergence(threshold, p)?).exp()
    };
    Ok(FailureBound { n, d, p, bound })
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `P[X ≥ ⌈d/2⌉]` for `X ~ Binomial(n, p)`, summed in log space.
pub fn exact_fail_probability(n: u64, d: f64, p: f64) -> Result<f64> {
    if n > MAX_EXACT_N {
        return Err(Error::OutOfRange(format!("n = {n} exceeds {MAX_EXACT_N}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("p = {p} not in [0, 1]")));
    }
    if !(d >= 0.0) {
        return Err(Error::OutOfRange(format!("d = {d} must be non-negative")));
    }
    let k0 = (d / 2.0).ceil() as u64;
    if k0 > n {
        return Ok(0.0);
    }
    if p == 0.0 {
        return Ok(if k0 == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    // running ln C(n, k) avoids recomputing factorials for each term
    let mut lc = ln_choose(n, k0);
    let mut terms = Vec::with_capacity((n - k0 + 1) as usize);
    for k in k0..=n {
        terms.push(lc + k as f64 * lp + (n - k) as f64 * lq);
        lc += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    Ok((max + sum.ln()).exp().min(1.0))
}

/// Per-qubit error rate tolerable by codes at the random-code relative
/// distance: `0.1893 / 2`.
pub fn gv_threshold() -> f64 {
    GV_RELATIVE_DISTANCE / 2.0
}

/// Percentage with one decimal, truncated (`0.09465 → "9.4%"`).
pub fn format_threshold(value: f64) -> String {
    let tenths = (value * 1000.0 + 1e-9).floor() / 10.0;
    format!("{tenths:.1}%")
}

/// Phase-variance bound `1/(γ²(1 − 2ε_fail)²)`, or `1/(γ²(1 − ε_fail)²)`
/// when the residual logical noise is diagonal.
pub fn variance_bound_from_fail(gamma: f64, eps_fail: f64, diagonal_noise: bool) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::OutOfRange(format!("gamma = {gamma} must be positive")));
    }
    if !(0.0..=0.5).contains(&eps_fail) {
        return Err(Error::OutOfRange(format!("eps_fail = {eps_fail} not in [0, 1/2]")));
    }
    let shrink = if diagonal_noise { 1.0 - eps_fail } else { 1.0 - 2.0 * eps_fail };
    Ok(1.0 / (gamma * gamma * shrink * shrink))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kl_identity_and_value() {
        assert_eq!(kl_divergence(0.3, 0.3).unwrap(), 0.0);
        let want = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((kl_divergence(0.5, 0.25).unwrap() - want).abs() < 1e-15);
        assert!(kl_divergence(0.5, 0.0).is_err());
        assert!(kl_divergence(0.5, 1.0).is_err());
    }

    #[test]
    fn small_exact_tail() {
        let want = 3.0 * 0.01 * 0.9 + 0.001;
        assert!((exact_fail_probability(3, 3.0, 0.1).unwrap() - want).abs() < 1e-14);
        assert_eq!(exact_fail_probability(10, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(exact_fail_probability(10, 3.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn vacuous_bound_signalled() {
        assert!(matches!(
            chernoff_fail_bound(10, 2.0, 0.1),
            Err(Error::VacuousBound { .. })
        ));
        assert_eq!(chernoff_fail_bound(10, 2.0, 0.0).unwrap().bound, 0.0);
    }

    #[test]
    fn threshold_display() {
        assert_eq!(gv_threshold(), 0.09465);
        assert_eq!(format_threshold(gv_threshold()), "9.4%");
    }

    #[test]
    fn variance_bounds() {
        assert_eq!(variance_bound_from_fail(1.0, 0.0, false).unwrap(), 1.0);
        assert_eq!(variance_bound_from_fail(1.0, 0.25, false).unwrap(), 4.0);
        assert_eq!(variance_bound_from_fail(1.0, 0.5, true).unwrap(), 4.0);
        assert!(variance_bound_from_fail(1.0, 0.6, false).is_err());
    }
}
