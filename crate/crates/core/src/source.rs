//! Two-mode weak thermal light from a distant source.
//!
//! Single-photon states use the dual-rail convention: a photon at site A is
//! `|10⟩`, a photon at site B is `|01⟩` (first qubit = site A). The family
//!
//! ```text
//! ψ±(φ) = (|01⟩ ± e^{iφ}|10⟩)/√2
//! ```
//!
//! is used verbatim across the crate, so `⟨01|ρ|10⟩ = γ e^{−iφ}/2` and the
//! first-order moment `⟨a†b⟩ = γ ε e^{−iφ}/2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, ONE, ZERO};

/// Largest mean photon number accepted by [`fock_expansion`].
pub const MAX_FOCK_EPSILON: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceParams {
    /// Mean total photon number over both modes.
    pub epsilon: f64,
    /// Mutual coherence, in `[0, 1]`.
    pub gamma: f64,
    /// Interferometric phase in radians.
    pub phi: f64,
}

impl SourceParams {
    pub fn new(epsilon: f64, gamma: f64, phi: f64) -> Result<Self> {
        let p = Self {
            epsilon,
            gamma,
            phi,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::OutOfRange(format!("epsilon = {}", self.epsilon)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::OutOfRange(format!("gamma = {} not in [0, 1]", self.gamma)));
        }
        if !self.phi.is_finite() {
            return Err(Error::OutOfRange(format!("phi = {}", self.phi)));
        }
        Ok(())
    }

    /// Occupations `((1+γ)ε/2, (1−γ)ε/2)` of the two decoupled thermal modes.
    pub fn mode_occupations(&self) -> (f64, f64) {
        let ge = self.gamma * self.epsilon;
        ((self.epsilon + ge) / 2.0, (self.epsilon - ge) / 2.0)
    }
}

/// Symmetrized second moments in the operator basis `{a, a†, b, b†}`.
pub fn covariance_matrix(params: &SourceParams) -> ComplexMatrix {
    let diag = Complex64::new(params.epsilon / 2.0 + 0.5, 0.0);
    let c = Complex64::from_polar(params.gamma * params.epsilon / 2.0, params.phi);
    let cc = c.conj();
    let z = ZERO;
    ComplexMatrix::new(
        4,
        4,
        vec![
            z, diag, z, c, //
            diag, z, cc, z, //
            z, cc, z, diag, //
            c, z, diag, z,
        ],
    )
    .expect("4x4")
}

/// Phase shift on mode b followed by a balanced beam splitter, and the
/// resulting block form `S Σ Sᵀ`.
///
/// The phase-shifter angle is `−φ`; with that choice the cross terms vanish
/// and the decoupled modes are `a′₁ = (a + e^{iφ} b)/√2`,
/// `a′₂ = (a − e^{iφ} b)/√2`.
pub fn diagonalize_source(params: &SourceParams) -> (ComplexMatrix, ComplexMatrix) {
    let s = FRAC_1_SQRT_2;
    let bs = ComplexMatrix::from_real(
        4,
        &[
            s, 0.0, s, 0.0, //
            0.0, s, 0.0, s, //
            s, 0.0, -s, 0.0, //
            0.0, s, 0.0, -s,
        ],
    );
    let alpha = -params.phi;
    let shifter = ComplexMatrix::from_diagonal(&[
        ONE,
        ONE,
        Complex64::from_polar(1.0, -alpha),
        Complex64::from_polar(1.0, alpha),
    ]);
    let (na, nb) = params.mode_occupations();
    let z = 0.0;
    let sigma = ComplexMatrix::from_real(
        4,
        &[
            z, na + 0.5, z, z, //
            na + 0.5, z, z, z, //
            z, z, z, nb + 0.5, //
            z, z, nb + 0.5, z,
        ],
    );
    (bs.matmul(&shifter), sigma)
}

/// Probability weight of one Fock sector and its split over the sector's states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonSector {
    pub weight: f64,
    /// Normalized mixture weights, in the order of the sector's state list.
    pub mixture: Vec<f64>,
}

impl PhotonSector {
    fn from_unnormalized(parts: &[f64]) -> Self {
        let weight: f64 = parts.iter().sum();
        let mixture = if weight > 0.0 {
            parts.iter().map(|w| w / weight).collect()
        } else {
            vec![0.0; parts.len()]
        };
        Self { weight, mixture }
    }

    /// Absolute weight of component `k`.
    pub fn component(&self, k: usize) -> f64 {
        self.weight * self.mixture[k]
    }
}

/// Fock-sector expansion of the two-mode thermal state truncated at two photons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonSectorDecomposition {
    pub p00: f64,
    /// Mixture over `[ψ+, ψ−]`.
    pub one_photon: PhotonSector,
    /// Mixture over `[Ψ²₀, Ψ²₊, Ψ²₋]`, see [`two_photon_states`].
    pub two_photon: PhotonSector,
    pub n_a: f64,
    pub n_b: f64,
}

impl PhotonSectorDecomposition {
    pub fn total_weight(&self) -> f64 {
        self.p00 + self.one_photon.weight + self.two_photon.weight
    }
}

pub fn fock_expansion(params: &SourceParams) -> Result<PhotonSectorDecomposition> {
    params.validate()?;
    if params.epsilon >= MAX_FOCK_EPSILON {
        return Err(Error::OutOfRange(format!(
            "epsilon = {} too large for a two-photon truncation (limit {MAX_FOCK_EPSILON})",
            params.epsilon
        )));
    }
    let (na, nb) = params.mode_occupations();
    let p00 = 1.0 / ((na + 1.0) * (nb + 1.0));
    let x = na / (na + 1.0);
    let y = nb / (nb + 1.0);
    Ok(PhotonSectorDecomposition {
        p00,
        one_photon: PhotonSector::from_unnormalized(&[p00 * x, p00 * y]),
        two_photon: PhotonSector::from_unnormalized(&[p00 * x * y, p00 * x * x, p00 * y * y]),
        n_a: na,
        n_b: nb,
    })
}

/// Dual-rail `ψ+(φ)` (`sign = +1`) or `ψ−(φ)` (`sign = −1`) on two qubits.
pub fn psi(sign: f64, phi: f64) -> Vec<Complex64> {
    let s = FRAC_1_SQRT_2;
    vec![
        ZERO,
        Complex64::new(s, 0.0),
        Complex64::from_polar(sign * s, phi),
        ZERO,
    ]
}

/// Index of `|n_a, n_b⟩` in the 3×3 truncated Fock space.
pub fn fock_index(n_a: usize, n_b: usize) -> usize {
    3 * n_a + n_b
}

/// One-photon states `[ψ+, ψ−]` in the 3×3 Fock space (mode a outermost).
pub fn one_photon_states(phi: f64) -> [Vec<Complex64>; 2] {
    [1.0, -1.0].map(|sign| {
        let mut v = vec![ZERO; 9];
        v[fock_index(0, 1)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        v[fock_index(1, 0)] = Complex64::from_polar(sign * FRAC_1_SQRT_2, phi);
        v
    })
}

/// Two-photon states `[Ψ²₀, Ψ²₊, Ψ²₋]` in the 3×3 Fock space:
///
/// ```text
/// Ψ²₀ = (|20⟩ − e^{−2iφ}|02⟩)/√2
/// Ψ²± = (|20⟩ ± √2 e^{−iφ}|11⟩ + e^{−2iφ}|02⟩)/2
/// ```
pub fn two_photon_states(phi: f64) -> [Vec<Complex64>; 3] {
    let s = FRAC_1_SQRT_2;
    let e1 = Complex64::from_polar(1.0, -phi);
    let e2 = Complex64::from_polar(1.0, -2.0 * phi);
    let mut zero = vec![ZERO; 9];
    zero[fock_index(2, 0)] = Complex64::new(s, 0.0);
    zero[fock_index(0, 2)] = -e2 * s;
    let pm = |sign: f64| {
        let mut v = vec![ZERO; 9];
        v[fock_index(2, 0)] = Complex64::new(0.5, 0.0);
        v[fock_index(1, 1)] = e1 * (sign * s);
        v[fock_index(0, 2)] = e2 * 0.5;
        v
    };
    [zero, pm(1.0), pm(-1.0)]
}

/// Truncated Fock-space state (9×9, modes a and b up to two photons each).
///
/// Its trace falls short of one by the discarded three-or-more photon weight.
pub fn truncated_fock_state(params: &SourceParams) -> Result<ComplexMatrix> {
    let dec = fock_expansion(params)?;
    let mut rho = ComplexMatrix::zeros(9, 9);
    rho[(0, 0)] = Complex64::new(dec.p00, 0.0);
    for (k, v) in one_photon_states(params.phi).iter().enumerate() {
        rho += &ComplexMatrix::projector(v).scale_real(dec.one_photon.component(k));
    }
    for (k, v) in two_photon_states(params.phi).iter().enumerate() {
        rho += &ComplexMatrix::projector(v).scale_real(dec.two_photon.component(k));
    }
    Ok(rho)
}

/// Annihilation operator truncated to `levels` Fock states.
pub fn annihilation(levels: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(levels, levels, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// A state together with its analytic derivatives in `φ` and `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamDerivativeFamily {
    pub state: DensityMatrix,
    pub d_phi: ComplexMatrix,
    pub d_gamma: ComplexMatrix,
}

/// Which parameter a derivative or Fisher information refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Phi,
    Gamma,
}

impl ParamDerivativeFamily {
    pub fn derivative(&self, which: Parameter) -> &ComplexMatrix {
        match which {
            Parameter::Phi => &self.d_phi,
            Parameter::Gamma => &self.d_gamma,
        }
    }
}

/// `(1+γ)/2 |ψ+⟩⟨ψ+| + (1−γ)/2 |ψ−⟩⟨ψ−|` on the two logical qubits.
pub fn conditioned_state(params: &SourceParams) -> Result<ParamDerivativeFamily> {
    params.validate()?;
    let (g, phi) = (params.gamma, params.phi);
    let half = Complex64::new(0.5, 0.0);
    // ⟨01|ρ|10⟩ = γ e^{−iφ}/2
    let coh = Complex64::from_polar(0.5, -phi);
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(1, 1)] = half;
    rho[(2, 2)] = half;
    rho[(1, 2)] = coh * g;
    rho[(2, 1)] = coh.conj() * g;
    let mut d_gamma = ComplexMatrix::zeros(4, 4);
    d_gamma[(1, 2)] = coh;
    d_gamma[(2, 1)] = coh.conj();
    let mut d_phi = ComplexMatrix::zeros(4, 4);
    d_phi[(1, 2)] = coh * Complex64::new(0.0, -g);
    d_phi[(2, 1)] = coh.conj() * Complex64::new(0.0, g);
    Ok(ParamDerivativeFamily {
        state: DensityMatrix::new(rho, vec![2, 2])?,
        d_phi,
        d_gamma,
    })
}

/// `(1−ε)|00⟩⟨00| + ε ρ′` on the dual-rail presence qubits of both sites.
pub fn rho_star(params: &SourceParams) -> Result<DensityMatrix> {
    Ok(rho_star_family(params)?.state)
}

/// [`rho_star`] with its derivatives, which are `ε` times those of `ρ′`.
pub fn rho_star_family(params: &SourceParams) -> Result<ParamDerivativeFamily> {
    if params.epsilon > 1.0 {
        return Err(Error::OutOfRange(format!(
            "epsilon = {} exceeds one photon on average",
            params.epsilon
        )));
    }
    let cond = conditioned_state(params)?;
    let eps = params.epsilon;
    let mut rho = cond.state.matrix().scale_real(eps);
    rho[(0, 0)] += Complex64::new(1.0 - eps, 0.0);
    Ok(ParamDerivativeFamily {
        state: DensityMatrix::new(rho, vec![2, 2])?,
        d_phi: cond.d_phi.scale_real(eps),
        d_gamma: cond.d_gamma.scale_real(eps),
    })
}
