use num_complex::Complex64;

use super::eigen::eig_hermitian;
use super::matrix::{inner, ComplexMatrix};
use super::tensor;
use super::MAX_DIM;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
/// Above this dimension the spectrum check is skipped on construction;
/// call [`DensityMatrix::validate_spectrum`] explicitly when needed.
const SPECTRUM_CHECK_MAX_DIM: usize = 256;

/// Unit-trace positive semidefinite matrix over a tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), trace (1e-10) and, up to dimension 256,
    /// the smallest eigenvalue (≥ −1e-10).
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_shape(&matrix, &dims)?;
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let rho = Self { matrix, dims };
        if rho.dim() <= SPECTRUM_CHECK_MAX_DIM {
            rho.validate_spectrum()?;
        }
        Ok(rho)
    }

    /// Skips validation; for outputs of maps already known to be CPTP.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self { matrix, dims }
    }

    pub fn from_pure(state: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let n = inner(state, state).re.sqrt();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("statevector norm is {n}")));
        }
        let m = ComplexMatrix::projector(state);
        check_shape(&m, &dims)?;
        Ok(Self { matrix: m, dims })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        let m = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        check_shape(&m, &dims)?;
        Ok(Self { matrix: m, dims })
    }

    /// Qubit register of the given matrix, `n` inferred from its size.
    pub fn qubits(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.rows().trailing_zeros() as usize;
        if 1usize << n != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "dimension {} is not a power of two",
                matrix.rows()
            )));
        }
        Self::new(matrix, vec![2; n])
    }

    pub fn validate_spectrum(&self) -> Result<()> {
        let eig = eig_hermitian(&self.matrix)?;
        let min = eig.eigenvalues[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn fidelity_with_pure(&self, state: &[Complex64]) -> f64 {
        self.matrix.expectation(state).re
    }

    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        self.matrix.trace_product(observable).re
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (m, dims) = tensor::partial_trace(&self.matrix, &self.dims, keep)?;
        Ok(Self::from_trusted(m, dims))
    }

    /// `Σ_k K_k ρ K_k†` with the Kraus set acting on a single qubit.
    pub fn apply_local_kraus(&self, kraus: &[ComplexMatrix], qubit: usize) -> Result<Self> {
        check_completeness(kraus)?;
        let m = tensor::apply_qubit_kraus(&self.matrix, &self.dims, qubit, kraus)?;
        Ok(Self::from_trusted(m, self.dims.clone()))
    }

    /// `U ρ U†` with `U` acting on `targets`.
    pub fn apply_unitary(&self, u: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        let (m, dims) = tensor::conjugate(&self.matrix, &self.dims, targets, u)?;
        Ok(Self::from_trusted(m, dims))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(tensor::tensor(&self.matrix, &other.matrix), dims)
    }
}

/// `Σ K†K = I` to 1e-10.
pub fn check_completeness(kraus: &[ComplexMatrix]) -> Result<()> {
    let Some(first) = kraus.first() else {
        return Err(Error::IncompleteKraus(1.0));
    };
    let d = first.cols();
    let mut sum = ComplexMatrix::zeros(d, d);
    for k in kraus {
        if k.cols() != d {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        sum += &k.adjoint().matmul(k);
    }
    let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
    if dev > 1e-10 {
        return Err(Error::IncompleteKraus(dev));
    }
    Ok(())
}

/// Eigenvalues of `ρ` at or below this are treated as zero in [`fidelity`].
const SUPPORT_CUTOFF: f64 = 1e-12;

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two density matrices.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    // work on the support of ρ so that round-off in its null space is not
    // amplified by the square roots
    let e = eig_hermitian(rho.matrix())?;
    let support: Vec<usize> = (0..rho.dim()).filter(|&k| e.eigenvalues[k] > SUPPORT_CUTOFF).collect();
    let vecs: Vec<Vec<Complex64>> = support.iter().map(|&k| e.eigenvector(k)).collect();
    let roots: Vec<f64> = support.iter().map(|&k| e.eigenvalues[k].sqrt()).collect();
    let k = support.len();
    let inner_m = ComplexMatrix::from_fn(k, k, |a, b| {
        sigma.matrix().expectation_between(&vecs[a], &vecs[b]) * (roots[a] * roots[b])
    })
    .hermitian_part();
    let s: f64 = eig_hermitian(&inner_m)?
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum();
    Ok(s * s)
}

fn check_shape(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let total: usize = dims.iter().product();
    if total != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "factor dimensions {dims:?} do not multiply to {}",
            m.rows()
        )));
    }
    if total > MAX_DIM {
        let qubits = (total as f64).log2().ceil() as usize;
        return Err(Error::RegisterTooLarge(qubits));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{basis, kron_vec};

    #[test]
    fn bell_pair_reduces_to_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell: Vec<Complex64> = [s, 0.0, 0.0, s].iter().map(|&x| x.into()).collect();
        let rho = DensityMatrix::from_pure(&bell, vec![2, 2]).unwrap();
        for keep in [0, 1] {
            let r = rho.partial_trace(&[keep]).unwrap();
            assert!(r.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_trace_and_negative_spectrum() {
        let m = ComplexMatrix::from_real(2, &[0.7, 0.0, 0.0, 0.7]);
        assert!(DensityMatrix::new(m, vec![2]).is_err());
        let m = ComplexMatrix::from_real(2, &[1.2, 0.0, 0.0, -0.2]);
        assert!(DensityMatrix::new(m, vec![2]).is_err());
    }

    #[test]
    fn rejects_oversize_register() {
        let v = basis(1 << 13, 0);
        assert!(matches!(
            DensityMatrix::from_pure(&v, vec![2; 13]),
            Err(Error::RegisterTooLarge(13))
        ));
    }

    #[test]
    fn product_state_partial_trace() {
        let a = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let b = basis(3, 2);
        let rho = DensityMatrix::from_pure(&kron_vec(&a, &b), vec![2, 3]).unwrap();
        let ra = rho.partial_trace(&[0]).unwrap();
        assert!(ra.matrix().max_abs_diff(&ComplexMatrix::projector(&a)) < 1e-12);
        assert_eq!(ra.dims(), &[2]);
    }
}
