//! Single-qubit noise channels and their i.i.d. application to registers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{check_completeness, pauli_matrix, tensor, ComplexMatrix, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
}

impl ChannelKind {
    pub fn build(self, strength: f64) -> Result<KrausChannel> {
        match self {
            ChannelKind::Dephasing => dephasing(strength),
            ChannelKind::Depolarizing => depolarizing(strength),
            ChannelKind::AmplitudeDamping => amplitude_damping(strength),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Dephasing => "dephasing",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
        }
    }
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dephasing" => Ok(Self::Dephasing),
            "depolarizing" => Ok(Self::Depolarizing),
            "amplitude-damping" => Ok(Self::AmplitudeDamping),
            other => Err(Error::OutOfRange(format!("unknown channel {other:?}"))),
        }
    }
}

/// A complete set of 2×2 Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    pub kraus_ops: Vec<ComplexMatrix>,
    pub label: String,
    pub strength: f64,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>, label: &str, strength: f64) -> Result<Self> {
        check_completeness(&kraus_ops)?;
        if kraus_ops.iter().any(|k| k.rows() != 2 || k.cols() != 2) {
            return Err(Error::DimensionMismatch("single-qubit Kraus operators must be 2x2".into()));
        }
        Ok(Self {
            kraus_ops,
            label: label.to_string(),
            strength,
        })
    }

    pub fn identity() -> Self {
        Self {
            kraus_ops: vec![ComplexMatrix::identity(2)],
            label: "identity".into(),
            strength: 0.0,
        }
    }

    /// `Σ_k K ρ K†` on a single-qubit matrix (not necessarily a state).
    pub fn apply_single(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2, 2);
        for k in &self.kraus_ops {
            out += &k.matmul(rho).matmul(&k.adjoint());
        }
        out
    }

    /// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let mut e = ComplexMatrix::zeros(2, 2);
                e[(i, j)] = Complex64::new(1.0, 0.0);
                out += &tensor(&e, &self.apply_single(&e));
            }
        }
        out
    }

    /// True when every Kraus operator is proportional to a Pauli matrix.
    pub fn is_pauli(&self) -> bool {
        self.kraus_ops.iter().all(|k| {
            ['I', 'X', 'Y', 'Z'].iter().any(|&l| {
                let p = pauli_matrix(l);
                let c = p.matmul(k).trace() * 0.5;
                k.max_abs_diff(&p.scale(c)) < 1e-14
            })
        })
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("{name} = {p} not in [0, 1]")));
    }
    Ok(())
}

/// `{√(1−p) I, √p Z}`.
pub fn dephasing(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    KrausChannel::new(
        vec![
            ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
            pauli_matrix('Z').scale_real(p.sqrt()),
        ],
        "dephasing",
        p,
    )
}

/// `{√(1−3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}`, i.e. `ρ ↦ (1−p)ρ + p I/2`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_probability("p", p)?;
    let s = (p / 4.0).sqrt();
    KrausChannel::new(
        vec![
            ComplexMatrix::identity(2).scale_real((1.0 - 0.75 * p).sqrt()),
            pauli_matrix('X').scale_real(s),
            pauli_matrix('Y').scale_real(s),
            pauli_matrix('Z').scale_real(s),
        ],
        "depolarizing",
        p,
    )
}

/// `D₀ = diag(1, √(1−η))`, `D₁ = √η |g⟩⟨e|`, with `|g⟩ = |0⟩`, `|e⟩ = |1⟩`.
pub fn amplitude_damping(eta: f64) -> Result<KrausChannel> {
    check_probability("eta", eta)?;
    let d0 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0 - eta).sqrt()]);
    let d1 = ComplexMatrix::from_real(2, &[0.0, eta.sqrt(), 0.0, 0.0]);
    KrausChannel::new(vec![d0, d1], "amplitude-damping", eta)
}

/// Applies `channel` to each listed qubit in turn.
pub fn apply_iid(rho: &DensityMatrix, channel: &KrausChannel, qubits: &[usize]) -> Result<DensityMatrix> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(Error::DuplicateIndex(*q));
        }
    }
    let mut out = rho.clone();
    for &q in qubits {
        out = out.apply_local_kraus(&channel.kraus_ops, q)?;
    }
    Ok(out)
}

/// [`apply_iid`] on an arbitrary operator (linear extension), e.g. a derivative.
pub fn apply_iid_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    channel: &KrausChannel,
    qubits: &[usize],
) -> Result<ComplexMatrix> {
    let mut out = m.clone();
    for &q in qubits {
        out = crate::qcore::tensor::apply_qubit_kraus(&out, dims, q, &channel.kraus_ops)?;
    }
    Ok(out)
}
