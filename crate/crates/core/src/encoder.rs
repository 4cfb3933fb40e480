//! Capture of the photon into the logical registers and the parity checks
//! that select the photon-number sector.
//!
//! Logical qubits are simulated as single qubits. Adiabatic transfer is
//! idealized here; `stirap` quantifies how close a real pulse comes.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{basis, kron_vec, pauli_matrix, tensor, ComplexMatrix, DensityMatrix, ONE, ZERO};

/// Below this an outcome is treated as impossible and gets no post-state.
const OUTCOME_FLOOR: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Register,
    Green,
    Red,
    /// Dual-rail photon presence at the telescope.
    Presence,
    /// Atomic level after transfer (multi-photon model).
    Level,
    /// Photon left in the cavity after transfer (multi-photon model).
    Photon,
    /// Half of the shared Bell pair used to check level parity.
    LevelBell,
    /// Half of the shared Bell pair used to check photon parity.
    PhotonBell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitLabel {
    pub role: Role,
    pub site: Site,
}

impl QubitLabel {
    pub const fn new(role: Role, site: Site) -> Self {
        Self { role, site }
    }
}

/// A multi-qubit state with one label per qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolState {
    labels: Vec<QubitLabel>,
    state: DensityMatrix,
}

impl ProtocolState {
    pub fn new(labels: Vec<QubitLabel>, state: DensityMatrix) -> Result<Self> {
        if state.dims().len() != labels.len() || state.dims().iter().any(|&d| d != 2) {
            return Err(Error::MalformedProtocol(format!(
                "{} labels for a register with dims {:?}",
                labels.len(),
                state.dims()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::MalformedProtocol(format!("label {l:?} used twice")));
            }
        }
        Ok(Self { labels, state })
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn position(&self, label: QubitLabel) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    fn require(&self, role: Role, site: Site) -> Result<usize> {
        self.position(QubitLabel::new(role, site))
            .ok_or_else(|| Error::MalformedProtocol(format!("missing {role:?} qubit at site {site:?}")))
    }

    /// Multi-photon model after ideal transfer at both sites, with fresh
    /// `Φ⁺` pairs for the level and photon parity checks.
    ///
    /// `fock` is a 9×9 state over `|n_a, n_b⟩`, `n ≤ 2`. A site holding `n`
    /// photons ends with level `1` and `n − 1` photons in the cavity;
    /// terms with one photon at each site pick up `e^{iδ}`.
    /// Qubit order: level A, photon A, level B, photon B, then the Bell
    /// halves (level A, level B, photon A, photon B).
    pub fn after_transfer(fock: &ComplexMatrix, delta: f64) -> Result<Self> {
        if fock.rows() != 9 || fock.cols() != 9 {
            return Err(Error::DimensionMismatch(format!(
                "expected a 9x9 Fock-space matrix, got {}x{}",
                fock.rows(),
                fock.cols()
            )));
        }
        let site_index = |n: usize| match n {
            0 => 0b00,
            1 => 0b10,
            _ => 0b11,
        };
        let mut w = ComplexMatrix::zeros(16, 9);
        for na in 0..3 {
            for nb in 0..3 {
                let phase = if na == 1 && nb == 1 {
                    Complex64::from_polar(1.0, delta)
                } else {
                    ONE
                };
                w[(4 * site_index(na) + site_index(nb), 3 * na + nb)] = phase;
            }
        }
        let sites = DensityMatrix::new(w.matmul(fock).matmul(&w.adjoint()), vec![2; 4])?;
        let pair = DensityMatrix::from_pure(&bell_phi(1.0), vec![2, 2])?;
        let state = sites.tensor(&pair).tensor(&pair);
        use Role::*;
        use Site::*;
        let labels = vec![
            QubitLabel::new(Level, A),
            QubitLabel::new(Photon, A),
            QubitLabel::new(Level, B),
            QubitLabel::new(Photon, B),
            QubitLabel::new(LevelBell, A),
            QubitLabel::new(LevelBell, B),
            QubitLabel::new(PhotonBell, A),
            QubitLabel::new(PhotonBell, B),
        ];
        Self::new(labels, state)
    }
}

/// `(|00⟩ + sign |11⟩)/√2`
pub fn bell_phi(sign: f64) -> Vec<Complex64> {
    vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        ZERO,
        ZERO,
        Complex64::new(sign * FRAC_1_SQRT_2, 0.0),
    ]
}

/// `(|01⟩ + sign |10⟩)/√2`
pub fn bell_psi(sign: f64) -> Vec<Complex64> {
    vec![
        ZERO,
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(sign * FRAC_1_SQRT_2, 0.0),
        ZERO,
    ]
}

pub fn cz() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[ONE, ONE, ONE, -ONE])
}

pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_real(
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ],
    )
}

/// `(I + sign·X⊗X)/2`: projector onto even (`+1`) or odd (`−1`) X parity.
pub fn x_parity_projector(sign: f64) -> ComplexMatrix {
    let xx = tensor(&pauli_matrix('X'), &pauli_matrix('X'));
    (&ComplexMatrix::identity(4) + &xx.scale_real(sign)).scale_real(0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn state(self) -> Vec<Complex64> {
        match self {
            Self::PhiPlus => bell_phi(1.0),
            Self::PhiMinus => bell_phi(-1.0),
            Self::PsiPlus => bell_psi(1.0),
            Self::PsiMinus => bell_psi(-1.0),
        }
    }

    /// Pauli correction applied to the register after this outcome.
    pub fn correction(self) -> ComplexMatrix {
        match self {
            Self::PhiPlus => ComplexMatrix::identity(2),
            Self::PhiMinus => pauli_matrix('Z'),
            Self::PsiPlus => pauli_matrix('X'),
            Self::PsiMinus => pauli_matrix('Z').matmul(&pauli_matrix('X')),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TeleportBranch {
    pub outcome_a: BellOutcome,
    pub outcome_b: BellOutcome,
    pub probability: f64,
    /// Corrected register state, normalized.
    pub state: DensityMatrix,
}

// register, green, red per site, then presence A, presence B
const L_A: usize = 0;
const G_A: usize = 1;
const R_A: usize = 2;
const L_B: usize = 3;
const G_B: usize = 4;
const R_B: usize = 5;
const P_A: usize = 6;
const P_B: usize = 7;

/// All sixteen Bell-measurement branches of the capture circuit.
///
/// `photon` is a two-qubit state over the presence qubits (A, B).
pub fn teleport_branches(photon: &DensityMatrix) -> Result<Vec<TeleportBranch>> {
    if photon.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "photon state must be two qubits, got dims {:?}",
            photon.dims()
        )));
    }
    // Φ₀ on (register, green) and red in |0⟩, per site
    let site = DensityMatrix::from_pure(&kron_vec(&bell_phi(1.0), &basis(2, 0)), vec![2; 3])?;
    let mut rho = site.tensor(&site).tensor(photon);
    // photon present: red |0⟩ → |1⟩ and the cavity empties
    let sw = swap();
    rho = rho.apply_unitary(&sw, &[R_A, P_A])?;
    rho = rho.apply_unitary(&sw, &[R_B, P_B])?;

    let dims = rho.dims().to_vec();
    let mut out = Vec::with_capacity(16);
    for oa in BellOutcome::ALL {
        let pa = ComplexMatrix::projector(&oa.state());
        let (ma, _) = crate::qcore::tensor::conjugate(rho.matrix(), &dims, &[R_A, G_A], &pa)?;
        for ob in BellOutcome::ALL {
            let pb = ComplexMatrix::projector(&ob.state());
            let (mut m, _) = crate::qcore::tensor::conjugate(&ma, &dims, &[R_B, G_B], &pb)?;
            m = crate::qcore::tensor::conjugate(&m, &dims, &[L_A], &oa.correction())?.0;
            m = crate::qcore::tensor::conjugate(&m, &dims, &[L_B], &ob.correction())?.0;
            let (reg, reg_dims) = crate::qcore::tensor::partial_trace(&m, &dims, &[L_A, L_B])?;
            let p = reg.trace().re;
            if p <= OUTCOME_FLOOR {
                continue;
            }
            out.push(TeleportBranch {
                outcome_a: oa,
                outcome_b: ob,
                probability: p,
                state: DensityMatrix::new(reg.scale_real(1.0 / p), reg_dims)?,
            });
        }
    }
    Ok(out)
}

/// Register state after capture, averaged over Bell outcomes.
pub fn teleport_capture(photon: &DensityMatrix) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::zeros(4, 4);
    for b in teleport_branches(photon)? {
        m += &b.state.matrix().scale_real(b.probability);
    }
    DensityMatrix::new(m, vec![2, 2])
}

/// Unnormalized pieces of the odd/even X-parity measurement after the two CZs.
#[derive(Clone, Debug)]
pub struct ParitySplit {
    pub accept_probability: f64,
    /// Register part of the odd-parity branch (trace = accept probability).
    pub accepted: ComplexMatrix,
    /// Register part of the even-parity branch.
    pub rejected: ComplexMatrix,
    /// Register plus ancilla pair after the CZs, before measurement.
    pub evolved: ComplexMatrix,
    /// Odd- and even-parity projections on the full four-qubit register.
    pub accepted_full: ComplexMatrix,
    pub rejected_full: ComplexMatrix,
}

/// CZ from each register qubit onto its half of a fresh `Φ⁺` pair, then an
/// X-basis measurement of both halves.
pub fn parity_split(rho_ab: &DensityMatrix) -> Result<ParitySplit> {
    if rho_ab.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "register must be two logical qubits, got dims {:?}",
            rho_ab.dims()
        )));
    }
    // qubits: register A, register B, ancilla A, ancilla B
    let pair = DensityMatrix::from_pure(&bell_phi(1.0), vec![2, 2])?;
    let rho = rho_ab.tensor(&pair);
    let evolved = rho.apply_unitary(&cz(), &[0, 2])?.apply_unitary(&cz(), &[1, 3])?;
    let dims = evolved.dims().to_vec();
    let project = |sign: f64| -> Result<(ComplexMatrix, ComplexMatrix)> {
        let (full, _) = crate::qcore::tensor::conjugate(evolved.matrix(), &dims, &[2, 3], &x_parity_projector(sign))?;
        let (reg, _) = crate::qcore::tensor::partial_trace(&full, &dims, &[0, 1])?;
        Ok((full, reg))
    };
    let (accepted_full, accepted) = project(-1.0)?;
    let (rejected_full, rejected) = project(1.0)?;
    Ok(ParitySplit {
        accept_probability: accepted.trace().re,
        accepted,
        rejected,
        evolved: evolved.into_matrix(),
        accepted_full,
        rejected_full,
    })
}

/// Keeps only the odd-parity outcome, which removes the vacuum.
///
/// Returns the acceptance probability and the normalized register state.
pub fn vacuum_projection(rho_ab: &DensityMatrix) -> Result<(f64, DensityMatrix)> {
    let split = parity_split(rho_ab)?;
    let p = split.accept_probability;
    if p <= OUTCOME_FLOOR {
        return Err(Error::ZeroAcceptance);
    }
    Ok((p, DensityMatrix::new(split.accepted.scale_real(1.0 / p), vec![2, 2])?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscriminationTag {
    ZeroOrContaminated,
    OnePhoton,
    TwoPhoton,
    /// Even level parity with odd photon parity; no rule covers it.
    Unassigned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairSign {
    Plus,
    Minus,
}

impl PairSign {
    fn x_parity(self) -> f64 {
        match self {
            PairSign::Plus => 1.0,
            PairSign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscriminationOutcome {
    pub tag: DiscriminationTag,
    /// Which of `Φ±` the level pair was found in.
    pub level_pair: PairSign,
    pub photon_pair: PairSign,
    pub probability: f64,
    /// Remaining qubits (Bell halves traced out), normalized; absent when
    /// the outcome cannot occur.
    pub post_state: Option<DensityMatrix>,
}

pub fn tag_for(level_pair: PairSign, photon_pair: PairSign) -> DiscriminationTag {
    match (level_pair, photon_pair) {
        (PairSign::Plus, PairSign::Plus) => DiscriminationTag::ZeroOrContaminated,
        (PairSign::Minus, PairSign::Plus) => DiscriminationTag::OnePhoton,
        (PairSign::Minus, PairSign::Minus) => DiscriminationTag::TwoPhoton,
        (PairSign::Plus, PairSign::Minus) => DiscriminationTag::Unassigned,
    }
}

/// Four CZs (level and photon qubit of each site onto their Bell halves),
/// then X-basis measurement of both pairs. Returns all four outcomes.
pub fn multiphoton_discriminate(state: &ProtocolState) -> Result<Vec<DiscriminationOutcome>> {
    use Role::*;
    let mut pairs = Vec::new();
    for (data, anc) in [(Level, LevelBell), (Photon, PhotonBell)] {
        for site in [Site::A, Site::B] {
            pairs.push((state.require(data, site)?, state.require(anc, site)?));
        }
    }
    let mut rho = state.state().clone();
    for &(c, t) in &pairs {
        rho = rho.apply_unitary(&cz(), &[c, t])?;
    }
    let dims = rho.dims().to_vec();
    let level_bell = [pairs[0].1, pairs[1].1];
    let photon_bell = [pairs[2].1, pairs[3].1];
    let keep: Vec<usize> = (0..dims.len())
        .filter(|q| !level_bell.contains(q) && !photon_bell.contains(q))
        .collect();

    let mut out = Vec::with_capacity(4);
    for lp in [PairSign::Plus, PairSign::Minus] {
        let (ml, _) =
            crate::qcore::tensor::conjugate(rho.matrix(), &dims, &level_bell, &x_parity_projector(lp.x_parity()))?;
        for pp in [PairSign::Plus, PairSign::Minus] {
            let (m, _) = crate::qcore::tensor::conjugate(&ml, &dims, &photon_bell, &x_parity_projector(pp.x_parity()))?;
            let (rest, rest_dims) = crate::qcore::tensor::partial_trace(&m, &dims, &keep)?;
            let p = rest.trace().re;
            let post_state = if p > OUTCOME_FLOOR {
                Some(DensityMatrix::new(rest.scale_real(1.0 / p), rest_dims)?)
            } else {
                None
            };
            out.push(DiscriminationOutcome {
                tag: tag_for(lp, pp),
                level_pair: lp,
                photon_pair: pp,
                probability: p.max(0.0),
                post_state,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{fock_index, rho_star, SourceParams};

    #[test]
    fn bell_states_are_orthonormal() {
        for a in BellOutcome::ALL {
            for b in BellOutcome::ALL {
                let ip = crate::qcore::inner(&a.state(), &b.state()).norm();
                assert!((ip - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn vacuum_capture_leaves_register_in_zero() {
        let vac = DensityMatrix::from_pure(&basis(4, 0), vec![2, 2]).unwrap();
        let out = teleport_capture(&vac).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        let split = parity_split(&out).unwrap();
        assert_eq!(split.accept_probability, 0.0);
        assert!(matches!(vacuum_projection(&out), Err(Error::ZeroAcceptance)));
    }

    #[test]
    fn capture_reproduces_photon_state() {
        let p = SourceParams::new(0.02, 0.6, 0.9).unwrap();
        let rho = rho_star(&p).unwrap();
        let out = teleport_capture(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        let l = QubitLabel::new(Role::Level, Site::A);
        assert!(matches!(ProtocolState::new(vec![l, l], rho), Err(Error::MalformedProtocol(_))));
    }

    #[test]
    fn missing_ancilla_is_malformed() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        let st = ProtocolState::new(
            vec![QubitLabel::new(Role::Level, Site::A), QubitLabel::new(Role::Level, Site::B)],
            rho,
        )
        .unwrap();
        assert!(matches!(multiphoton_discriminate(&st), Err(Error::MalformedProtocol(_))));
    }

    #[test]
    fn vacuum_lands_in_plus_plus() {
        let mut v = vec![ZERO; 9];
        v[fock_index(0, 0)] = ONE;
        let st = ProtocolState::after_transfer(&ComplexMatrix::projector(&v), 0.0).unwrap();
        let out = multiphoton_discriminate(&st).unwrap();
        let zero = out.iter().find(|o| o.tag == DiscriminationTag::ZeroOrContaminated).unwrap();
        assert!((zero.probability - 1.0).abs() < 1e-12);
    }
}
