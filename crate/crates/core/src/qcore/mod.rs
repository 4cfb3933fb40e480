//! Dense complex linear algebra and tensor-product machinery.

mod density;
mod eigen;
mod matrix;
pub mod tensor;

use num_complex::Complex64;

pub use density::{check_completeness, fidelity, DensityMatrix};
pub use eigen::{eig_hermitian, HermitianEigensystem, HERMITIAN_TOLERANCE};
pub use matrix::{basis, inner, kron_vec, norm, normalized, ComplexMatrix, I, ONE, ZERO};
pub use tensor::{partial_trace, tensor, tensor_all};

use crate::error::Result;

/// Largest supported qubit register.
pub const MAX_QUBITS: usize = 12;
pub const MAX_DIM: usize = 1 << MAX_QUBITS;

/// Single-qubit Pauli matrix for `'I'`, `'X'`, `'Y'` or `'Z'`.
///
/// # Panics
/// On any other letter.
pub fn pauli_matrix(letter: char) -> ComplexMatrix {
    let z = ZERO;
    let o = ONE;
    let data = match letter {
        'I' => vec![o, z, z, o],
        'X' => vec![z, o, o, z],
        'Y' => vec![z, -I, I, z],
        'Z' => vec![o, z, z, -o],
        other => panic!("not a Pauli letter: {other:?}"),
    };
    ComplexMatrix::new(2, 2, data).expect("2x2")
}

/// `Σ_k (I⊗K_k⊗I) ρ (I⊗K_k⊗I)†` on one qubit of `rho`.
pub fn apply_local_kraus(
    rho: &DensityMatrix,
    kraus: &[ComplexMatrix],
    qubit: usize,
) -> Result<DensityMatrix> {
    rho.apply_local_kraus(kraus, qubit)
}

/// `|+⟩` and `|−⟩` amplitudes.
pub fn plus_minus(sign: f64) -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![Complex64::new(s, 0.0), Complex64::new(sign * s, 0.0)]
}
