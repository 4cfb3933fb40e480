//! Dormand–Prince 5(4) for `i dψ/dt = H(t) ψ` on small complex systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions {
    /// Bound on the estimated local error (max-norm) of each accepted step.
    pub tolerance: f64,
    pub max_step: f64,
    pub min_step: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_step: 0.5,
            min_step: 1e-12,
        }
    }
}

impl IntegratorOptions {
    /// Half the step size: max step halved and the local tolerance reduced
    /// by `2⁵` to match the method's order.
    pub fn halved(&self) -> Self {
        Self {
            tolerance: self.tolerance / 32.0,
            max_step: self.max_step / 2.0,
            min_step: self.min_step,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive integrator state for a fixed-dimension system.
///
/// `rhs(t, y, dy)` must write `dy = −i H(t) y`.
pub struct Stepper<F> {
    rhs: F,
    opts: IntegratorOptions,
    h: f64,
    k: [Vec<Complex64>; 7],
    tmp: Vec<Complex64>,
    y_new: Vec<Complex64>,
    fsal_valid: bool,
    pub accepted: usize,
    pub rejected: usize,
}

impl<F: FnMut(f64, &[Complex64], &mut [Complex64])> Stepper<F> {
    pub fn new(dim: usize, rhs: F, opts: IntegratorOptions) -> Self {
        let z = vec![Complex64::default(); dim];
        Self {
            rhs,
            opts,
            h: opts.max_step.min(1e-3),
            k: std::array::from_fn(|_| z.clone()),
            tmp: z.clone(),
            y_new: z,
            fsal_valid: false,
            accepted: 0,
            rejected: 0,
        }
    }

    fn stage(&mut self, t: f64, y: &[Complex64], h: f64, coeffs: &[f64], out: usize) {
        for i in 0..y.len() {
            let mut acc = y[i];
            for (j, &c) in coeffs.iter().enumerate() {
                if c != 0.0 {
                    acc += self.k[j][i] * (h * c);
                }
            }
            self.tmp[i] = acc;
        }
        let (tmp, k) = (&self.tmp, &mut self.k[out]);
        (self.rhs)(t, tmp, k);
    }

    /// Advances `y` from `t0` to exactly `t1`, calling `observe` after each
    /// accepted step.
    pub fn advance(
        &mut self,
        y: &mut [Complex64],
        t0: f64,
        t1: f64,
        mut observe: impl FnMut(f64, &[Complex64]),
    ) -> Result<()> {
        let mut t = t0;
        self.fsal_valid = false;
        while t < t1 {
            if !self.fsal_valid {
                let (k0, rhs) = (&mut self.k[0], &mut self.rhs);
                rhs(t, y, k0);
                self.fsal_valid = true;
            }
            let mut h = self.h.min(self.opts.max_step);
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            self.stage(t + C2 * h, y, h, &[A21], 1);
            self.stage(t + C3 * h, y, h, &[A31, A32], 2);
            self.stage(t + C4 * h, y, h, &[A41, A42, A43], 3);
            self.stage(t + C5 * h, y, h, &[A51, A52, A53, A54], 4);
            self.stage(t + h, y, h, &[A61, A62, A63, A64, A65], 5);
            for i in 0..y.len() {
                self.y_new[i] = y[i]
                    + (self.k[0][i] * B1
                        + self.k[2][i] * B3
                        + self.k[3][i] * B4
                        + self.k[4][i] * B5
                        + self.k[5][i] * B6)
                        * h;
            }
            {
                let (y_new, k6, rhs) = (&self.y_new, &mut self.k[6], &mut self.rhs);
                rhs(t + h, y_new, k6);
            }
            let mut err: f64 = 0.0;
            for i in 0..y.len() {
                let e = (self.k[0][i] * E1
                    + self.k[2][i] * E3
                    + self.k[3][i] * E4
                    + self.k[4][i] * E5
                    + self.k[5][i] * E6
                    + self.k[6][i] * E7)
                    * h;
                err = err.max(e.norm());
            }
            let ratio = err / self.opts.tolerance;
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            if ratio <= 1.0 {
                y.copy_from_slice(&self.y_new);
                t = if last { t1 } else { t + h };
                self.k.swap(0, 6);
                self.accepted += 1;
                observe(t, y);
                if !last {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * factor.min(1.0);
                if self.h < self.opts.min_step {
                    return Err(Error::StepUnderflow(t));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_hamiltonian_matches_exponential() {
        // H = ω σ_x on a qubit: ψ(t) = cos(ωt)|0⟩ − i sin(ωt)|1⟩
        let w = 3.0;
        let rhs = |_t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            dy[0] = Complex64::new(0.0, -w) * y[1];
            dy[1] = Complex64::new(0.0, -w) * y[0];
        };
        let mut st = Stepper::new(2, rhs, IntegratorOptions::default());
        let mut y = vec![Complex64::new(1.0, 0.0), Complex64::default()];
        st.advance(&mut y, 0.0, 2.0, |_, _| {}).unwrap();
        assert!((y[0] - Complex64::new((2.0 * w).cos(), 0.0)).norm() < 1e-8);
        assert!((y[1] - Complex64::new(0.0, -(2.0 * w).sin())).norm() < 1e-8);
    }
}
