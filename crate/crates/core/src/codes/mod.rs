//! Single-logical-qubit stabilizer codes and the two-block encoder.

mod pauli;

pub use pauli::{combinations, paulis_by_weight, Pauli, PauliString};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{basis, inner, kron_vec, normalized, tensor, ComplexMatrix, DensityMatrix, MAX_QUBITS};

/// An `[[n, 1, d]]` stabilizer code with explicit codewords.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    /// Distance against the error family the code targets (phase flips for
    /// the repetition codes).
    pub d: usize,
    pub stabilizers: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub codeword0: Vec<Complex64>,
    pub codeword1: Vec<Complex64>,
}

impl StabilizerCode {
    /// Builds a code, deriving `|0_L⟩` by projecting `|0…0⟩` onto the
    /// joint +1 eigenspace of the stabilizers and `logical_z`, and
    /// `|1_L⟩ = logical_x |0_L⟩`.
    fn from_generators(
        name: &str,
        d: usize,
        stabilizers: &[&str],
        logical_x: &str,
        logical_z: &str,
        seed_state: Vec<Complex64>,
    ) -> Self {
        let stabilizers: Vec<PauliString> =
            stabilizers.iter().map(|s| s.parse().expect("valid Pauli")).collect();
        let logical_x: PauliString = logical_x.parse().expect("valid Pauli");
        let logical_z: PauliString = logical_z.parse().expect("valid Pauli");
        let mut v = seed_state;
        for g in stabilizers.iter().chain([&logical_z]) {
            let gv = g.apply(&v);
            v = v.iter().zip(&gv).map(|(a, b)| (a + b) * 0.5).collect();
        }
        let codeword0 = normalized(&v);
        let codeword1 = logical_x.apply(&codeword0);
        Self {
            name: name.to_string(),
            n: logical_x.len(),
            d,
            stabilizers,
            logical_x,
            logical_z,
            codeword0,
            codeword1,
        }
    }

    /// Bare qubit: codewords `|0⟩`, `|1⟩`, no stabilizers.
    pub fn unencoded() -> Self {
        Self {
            name: "none".into(),
            n: 1,
            d: 1,
            stabilizers: Vec::new(),
            logical_x: "X".parse().expect("valid"),
            logical_z: "Z".parse().expect("valid"),
            codeword0: basis(2, 0),
            codeword1: basis(2, 1),
        }
    }

    pub fn block_dim(&self) -> usize {
        1 << self.n
    }

    /// Encoding isometry `[|0_L⟩ |1_L⟩]` as a `2ⁿ × 2` matrix.
    pub fn isometry(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.block_dim(), 2, |i, j| {
            if j == 0 {
                self.codeword0[i]
            } else {
                self.codeword1[i]
            }
        })
    }

    /// One bit per stabilizer, set where `error` anticommutes with it.
    /// Bit `k` of the result is stabilizer `k`.
    pub fn syndrome(&self, error: &PauliString) -> u32 {
        self.stabilizers
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.commutes_with(error))
            .fold(0, |acc, (k, _)| acc | (1 << k))
    }

    pub fn syndrome_count(&self) -> usize {
        1 << self.stabilizers.len()
    }

    /// Smallest weight of a Pauli string mapping `|0_L⟩` onto `|1_L⟩`
    /// (up to phase), by exhaustive search.
    pub fn connecting_distance(&self) -> Option<usize> {
        paulis_by_weight(self.n, self.n)
            .into_iter()
            .find(|p| inner(&self.codeword1, &p.apply(&self.codeword0)).norm() > 1.0 - 1e-9)
            .map(|p| p.weight())
    }

    /// Smallest weight of a Pauli string that preserves the codespace and acts
    /// on it as something other than a multiple of the identity.
    pub fn logical_distance(&self) -> Option<usize> {
        paulis_by_weight(self.n, self.n)
            .into_iter()
            .filter(|p| p.weight() > 0 && self.stabilizers.iter().all(|s| s.commutes_with(p)))
            .find(|p| {
                let m00 = inner(&self.codeword0, &p.apply(&self.codeword0));
                let m11 = inner(&self.codeword1, &p.apply(&self.codeword1));
                let m01 = inner(&self.codeword0, &p.apply(&self.codeword1));
                m01.norm() > 1e-9 || (m00 - m11).norm() > 1e-9
            })
            .map(|p| p.weight())
    }
}

/// `[[n,1,n]]` phase-flip code: `|0_L⟩ = |+⟩^⊗n`, `|1_L⟩ = |−⟩^⊗n`,
/// stabilizers `X_i X_{i+1}`.
pub fn repetition_code(n: usize) -> Result<StabilizerCode> {
    if n == 0 {
        return Err(Error::OutOfRange("repetition code needs n ≥ 1".into()));
    }
    if 2 * n > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(2 * n));
    }
    let stabilizers: Vec<PauliString> = (0..n - 1)
        .map(|i| PauliString::on(n, &[i, i + 1], Pauli::X))
        .collect();
    let plus = crate::qcore::plus_minus(1.0);
    let minus = crate::qcore::plus_minus(-1.0);
    let mut c0 = vec![Complex64::new(1.0, 0.0)];
    let mut c1 = c0.clone();
    for _ in 0..n {
        c0 = kron_vec(&c0, &plus);
        c1 = kron_vec(&c1, &minus);
    }
    Ok(StabilizerCode {
        name: format!("rep-{n}"),
        n,
        d: n,
        stabilizers,
        logical_x: PauliString::on(n, &(0..n).collect::<Vec<_>>(), Pauli::Z),
        logical_z: PauliString::on(n, &[0], Pauli::X),
        codeword0: c0,
        codeword1: c1,
    })
}

/// `[[4,1,2]]` code with codewords `(|0000⟩+|1111⟩)/√2`, `(|0011⟩+|1100⟩)/√2`.
pub fn four_qubit_code() -> StabilizerCode {
    StabilizerCode::from_generators(
        "four-qubit",
        2,
        &["XXXX", "ZZII", "IIZZ"],
        "XXII",
        "ZIZI",
        basis(16, 0),
    )
}

/// `[[5,1,3]]` code with cyclic generators `XZZXI` and shifts.
pub fn five_qubit_code() -> StabilizerCode {
    StabilizerCode::from_generators(
        "five-one-three",
        3,
        &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        "XXXXX",
        "ZZZZZ",
        basis(32, 0),
    )
}

/// Applies the encoding isometry to both qubits of a two-qubit logical
/// state. The output is a `2n`-qubit register, block A first.
pub fn encode_pair(code: &StabilizerCode, logical: &DensityMatrix) -> Result<DensityMatrix> {
    if logical.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "logical state has dimension {}, expected 4",
            logical.dim()
        )));
    }
    if 2 * code.n > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(2 * code.n));
    }
    let m = encode_pair_matrix(code, logical.matrix());
    DensityMatrix::new(m, vec![2; 2 * code.n])
}

/// [`encode_pair`] on an arbitrary 4×4 operator (used for derivatives).
pub fn encode_pair_matrix(code: &StabilizerCode, logical: &ComplexMatrix) -> ComplexMatrix {
    let v = code.isometry();
    let vv = tensor(&v, &v);
    vv.matmul(logical).matmul(&vv.adjoint())
}
