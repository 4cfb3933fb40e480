//! Symmetric logarithmic derivatives, quantum and classical Fisher
//! information, and the observables that attain them.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{eig_hermitian, ComplexMatrix, HERMITIAN_TOLERANCE, ZERO};
use crate::recovery::BranchFamily;
use crate::source::{ParamDerivativeFamily, Parameter};

/// Eigenvalue pairs with `pₙ + pₘ` at or below this are left out of the SLD.
pub const SLD_CUTOFF: f64 = 1e-12;

/// Outcomes with probability at or below this are skipped in classical FI.
const PROBABILITY_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct SldResult {
    pub sld: ComplexMatrix,
    pub qfi: f64,
    pub rank_cutoff_used: f64,
}

/// SLD of `d_rho` at `rho` from the eigendecomposition of `rho`.
///
/// `rho` need not be normalized; for a subnormalized branch `σ = p ρ` the
/// result is `p J(ρ) + (∂p)²/p`.
pub fn sld(rho: &ComplexMatrix, d_rho: &ComplexMatrix) -> Result<SldResult> {
    let dev = d_rho.hermitian_deviation();
    if dev > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(dev));
    }
    let eig = eig_hermitian(rho)?;
    let v = &eig.eigenvectors;
    let d_eig = v.adjoint().matmul(d_rho).matmul(v);
    let n = rho.rows();
    let p = &eig.eigenvalues;
    let l_eig = ComplexMatrix::from_fn(n, n, |i, j| {
        let s = p[i] + p[j];
        if s > SLD_CUTOFF {
            d_eig[(i, j)] * (2.0 / s)
        } else {
            ZERO
        }
    });
    let sld = v.matmul(&l_eig).matmul(&v.adjoint());
    let qfi = rho.trace_product(&sld.matmul(&sld)).re;
    Ok(SldResult {
        sld,
        qfi,
        rank_cutoff_used: SLD_CUTOFF,
    })
}

pub fn sld_and_qfi(family: &ParamDerivativeFamily, which: Parameter) -> Result<SldResult> {
    sld(family.state.matrix(), family.derivative(which))
}

pub fn qfi(family: &ParamDerivativeFamily, which: Parameter) -> Result<f64> {
    Ok(sld_and_qfi(family, which)?.qfi)
}

/// `Σ_s J(σ_s)` over unnormalized syndrome branches.
pub fn syndrome_resolved_qfi(branches: &[BranchFamily], which: Parameter) -> Result<f64> {
    let mut total = 0.0;
    for b in branches {
        if b.probability() <= PROBABILITY_FLOOR {
            continue;
        }
        let d = match which {
            Parameter::Phi => &b.d_phi,
            Parameter::Gamma => &b.d_gamma,
        };
        total += sld(&b.state, d)?.qfi;
    }
    Ok(total)
}

/// `Tr(ρ [L_φ, L_γ])`; zero when the two SLDs admit a common optimal
/// measurement at this point.
pub fn compatibility(family: &ParamDerivativeFamily) -> Result<Complex64> {
    let lp = sld_and_qfi(family, Parameter::Phi)?.sld;
    let lg = sld_and_qfi(family, Parameter::Gamma)?.sld;
    Ok(family.state.matrix().trace_product(&lp.commutator(&lg)))
}

/// Cramér-Rao variance `1/(N J)`.
pub fn crb_variance(qfi: f64, n_probes: u64) -> Result<f64> {
    if !(qfi > 0.0) {
        return Err(Error::Unidentifiable);
    }
    if n_probes == 0 {
        return Err(Error::OutOfRange("at least one probe is needed".into()));
    }
    Ok(1.0 / (n_probes as f64 * qfi))
}

/// `(|0⟩ + sign·e^{−iθ}|1⟩)/√2`
fn phased_plus(sign: f64, theta: f64) -> Vec<Complex64> {
    vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::from_polar(sign * FRAC_1_SQRT_2, -theta),
    ]
}

/// Product basis `(|0⟩ ± e^{−iθ}|1⟩)/√2 ⊗ (|0⟩ ± |1⟩)/√2`, ordered
/// `(+,+), (+,−), (−,+), (−,−)`.
pub fn local_measurement_basis(theta: f64) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(4);
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            out.push(crate::qcore::kron_vec(&phased_plus(sa, theta), &phased_plus(sb, 0.0)));
        }
    }
    out
}

/// Classical Fisher information `Σ (∂P)²/P` of a projective measurement.
pub fn classical_fi(family: &ParamDerivativeFamily, basis: &[Vec<Complex64>], which: Parameter) -> f64 {
    let d = family.derivative(which);
    basis
        .iter()
        .map(|v| {
            let p = family.state.matrix().expectation(v).re;
            if p <= PROBABILITY_FLOOR {
                return 0.0;
            }
            let dp = d.expectation(v).re;
            dp * dp / p
        })
        .sum()
}

/// Fisher information for `(φ, γ)` of the local product measurement at `θ`.
///
/// In the noiseless case `θ = π/2 − φ` is optimal for `φ` and `θ = −φ` for `γ`.
pub fn local_measurement_fi(family: &ParamDerivativeFamily, theta: f64) -> (f64, f64) {
    let basis = local_measurement_basis(theta);
    (
        classical_fi(family, &basis, Parameter::Phi),
        classical_fi(family, &basis, Parameter::Gamma),
    )
}

/// A Hermitian observable with the phase it was built for.
#[derive(Clone, Debug)]
pub struct ObservableSpec {
    pub matrix: ComplexMatrix,
    pub adjustable_phase: f64,
}

/// `(⟨X²⟩ − ⟨X⟩²)/|∂⟨X⟩|²`.
pub fn error_propagation_variance(
    family: &ParamDerivativeFamily,
    obs: &ObservableSpec,
    which: Parameter,
) -> Result<f64> {
    let rho = family.state.matrix();
    let x = &obs.matrix;
    let mean = rho.trace_product(x).re;
    let second = rho.trace_product(&x.matmul(x)).re;
    let slope = family.derivative(which).trace_product(x).re;
    if slope.abs() <= 1e-12 {
        return Err(Error::VanishingSensitivity(slope.abs()));
    }
    Ok((second - mean * mean) / (slope * slope))
}

/// `P = |χ+⟩⟨χ+| − |χ−⟩⟨χ−|` with `χ± = (|10⟩ ± e^{iα}|01⟩)/√2`, for which
/// `Tr(ρ′P) = γ cos(α + φ)`.
pub fn sld_observable(alpha: f64) -> ObservableSpec {
    let chi = |sign: f64| {
        vec![
            ZERO,
            Complex64::from_polar(sign * FRAC_1_SQRT_2, alpha),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            ZERO,
        ]
    };
    let matrix = &ComplexMatrix::projector(&chi(1.0)) - &ComplexMatrix::projector(&chi(-1.0));
    ObservableSpec {
        matrix,
        adjustable_phase: alpha,
    }
}

/// Product-basis parity `Σ s_A s_B |s_A^α, s_B⟩⟨s_A^α, s_B|` over the basis of
/// [`local_measurement_basis`] at `θ = α`; `Tr(ρ′P_sep) = γ cos(α + φ)`.
pub fn separable_observable(alpha: f64) -> ObservableSpec {
    let basis = local_measurement_basis(alpha);
    let signs = [1.0, -1.0, -1.0, 1.0];
    let mut matrix = ComplexMatrix::zeros(4, 4);
    for (v, s) in basis.iter().zip(signs) {
        matrix += &ComplexMatrix::projector(v).scale_real(s);
    }
    ObservableSpec {
        matrix,
        adjustable_phase: alpha,
    }
}

/// `θ I + L/J`, unbiased at `theta_ref` with variance `1/J`.
pub fn optimal_estimator(theta_ref: f64, sld: &SldResult) -> Result<ObservableSpec> {
    if !(sld.qfi > 0.0) {
        return Err(Error::Unidentifiable);
    }
    let n = sld.sld.rows();
    let matrix = &ComplexMatrix::identity(n).scale_real(theta_ref) + &sld.sld.scale_real(1.0 / sld.qfi);
    Ok(ObservableSpec {
        matrix,
        adjustable_phase: theta_ref,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{conditioned_state, SourceParams};

    #[test]
    fn noiseless_closed_forms() {
        let f = conditioned_state(&SourceParams::new(0.0, 0.5, 0.3).unwrap()).unwrap();
        assert!((qfi(&f, Parameter::Phi).unwrap() - 0.25).abs() < 1e-12);
        assert!((qfi(&f, Parameter::Gamma).unwrap() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_information_is_unidentifiable() {
        assert!(matches!(crb_variance(0.0, 1), Err(Error::Unidentifiable)));
        assert_eq!(crb_variance(1.0, 1).unwrap(), 1.0);
    }

    #[test]
    fn identity_observable_has_no_slope() {
        let f = conditioned_state(&SourceParams::new(0.0, 0.5, 0.3).unwrap()).unwrap();
        let obs = ObservableSpec {
            matrix: ComplexMatrix::identity(4),
            adjustable_phase: 0.0,
        };
        assert!(matches!(
            error_propagation_variance(&f, &obs, Parameter::Phi),
            Err(Error::VanishingSensitivity(_))
        ));
    }

    #[test]
    fn anti_hermitian_derivative_rejected() {
        let mut d = ComplexMatrix::zeros(2, 2);
        d[(0, 1)] = Complex64::new(1.0, 0.0);
        d[(1, 0)] = Complex64::new(-1.0, 0.0);
        assert!(matches!(
            sld(&ComplexMatrix::identity(2).scale_real(0.5), &d),
            Err(Error::NotHermitian(_))
        ));
    }
}
