//! Index arithmetic for operators on tensor-product spaces.
//!
//! Subsystems are positional. Subsystem 0 is the leftmost Kronecker factor,
//! i.e. the most significant digit of a flat index; for qubits, qubit 0 is
//! the highest bit of the computational-basis label `|q0 q1 ... q(n-1)⟩`.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Kronecker product with `a`'s indices outermost.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Kronecker product of a list of factors, first factor outermost.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| tensor(&acc, f))
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

pub(crate) fn check_targets(dims: &[usize], targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: t,
                count: dims.len(),
            });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateIndex(t));
        }
    }
    Ok(())
}

/// Flat offsets of every local index of `targets` (first target most significant).
fn target_offsets(dims: &[usize], strides: &[usize], targets: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for &t in targets {
        let mut next = Vec::with_capacity(offs.len() * dims[t]);
        for &o in &offs {
            for d in 0..dims[t] {
                next.push(o + d * strides[t]);
            }
        }
        offs = next;
    }
    offs
}

/// Flat offsets of every assignment of the non-target subsystems.
fn rest_offsets(dims: &[usize], strides: &[usize], targets: &[usize]) -> Vec<usize> {
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !targets.contains(k)).collect();
    target_offsets(dims, strides, &rest)
}

/// Layout bookkeeping for an operator acting on `targets`, possibly changing
/// the dimension of a single target subsystem.
struct MapLayout {
    in_targets: Vec<usize>,
    out_targets: Vec<usize>,
    in_rest: Vec<usize>,
    out_rest: Vec<usize>,
    out_dims: Vec<usize>,
    out_total: usize,
}

impl MapLayout {
    fn new(dims: &[usize], targets: &[usize], op: &ComplexMatrix) -> Result<Self> {
        check_targets(dims, targets)?;
        let d_in: usize = targets.iter().map(|&t| dims[t]).product();
        if op.cols() != d_in {
            return Err(Error::DimensionMismatch(format!(
                "operator with {} columns on subsystems of total dimension {d_in}",
                op.cols()
            )));
        }
        let mut out_dims = dims.to_vec();
        if op.rows() != d_in {
            if targets.len() != 1 {
                return Err(Error::DimensionMismatch(
                    "dimension-changing maps must act on a single subsystem".into(),
                ));
            }
            out_dims[targets[0]] = op.rows();
        }
        let s_in = strides(dims);
        let s_out = strides(&out_dims);
        Ok(Self {
            in_targets: target_offsets(dims, &s_in, targets),
            out_targets: target_offsets(&out_dims, &s_out, targets),
            in_rest: rest_offsets(dims, &s_in, targets),
            out_rest: rest_offsets(&out_dims, &s_out, targets),
            out_total: out_dims.iter().product(),
            out_dims,
        })
    }
}

/// `(op on targets) · m`, with `m`'s rows factored by `row_dims`.
pub fn apply_left(
    m: &ComplexMatrix,
    row_dims: &[usize],
    targets: &[usize],
    op: &ComplexMatrix,
) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_total(row_dims, m.rows())?;
    let lay = MapLayout::new(row_dims, targets, op)?;
    let cols = m.cols();
    let mut out = ComplexMatrix::zeros(lay.out_total, cols);
    let src = m.data();
    let dst = out.data_mut();
    for (rb_in, rb_out) in lay.in_rest.iter().zip(&lay.out_rest) {
        for (b, ob) in lay.out_targets.iter().enumerate() {
            let r_out = rb_out + ob;
            for (a, oa) in lay.in_targets.iter().enumerate() {
                let c = op[(b, a)];
                if c == ZERO {
                    continue;
                }
                let r_in = rb_in + oa;
                let s = &src[r_in * cols..(r_in + 1) * cols];
                let d = &mut dst[r_out * cols..(r_out + 1) * cols];
                for (x, y) in d.iter_mut().zip(s) {
                    *x += c * y;
                }
            }
        }
    }
    Ok((out, lay.out_dims))
}

/// `m · (op on targets)†`, with `m`'s columns factored by `col_dims`.
pub fn apply_right_adjoint(
    m: &ComplexMatrix,
    col_dims: &[usize],
    targets: &[usize],
    op: &ComplexMatrix,
) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_total(col_dims, m.cols())?;
    let lay = MapLayout::new(col_dims, targets, op)?;
    let rows = m.rows();
    let in_cols = m.cols();
    let mut out = ComplexMatrix::zeros(rows, lay.out_total);
    let op_conj: Vec<Complex64> = op.data().iter().map(|z| z.conj()).collect();
    let op_cols = op.cols();
    let dst_cols = lay.out_total;
    let src = m.data();
    let dst = out.data_mut();
    for r in 0..rows {
        let s = &src[r * in_cols..(r + 1) * in_cols];
        let d = &mut dst[r * dst_cols..(r + 1) * dst_cols];
        for (cb_in, cb_out) in lay.in_rest.iter().zip(&lay.out_rest) {
            for (b, ob) in lay.out_targets.iter().enumerate() {
                let mut acc = ZERO;
                for (a, oa) in lay.in_targets.iter().enumerate() {
                    let c = op_conj[b * op_cols + a];
                    if c != ZERO {
                        acc += s[cb_in + oa] * c;
                    }
                }
                d[cb_out + ob] += acc;
            }
        }
    }
    Ok((out, lay.out_dims))
}

/// `op · m · op†` with `op` acting on `targets` of a square matrix factored by `dims`.
pub fn conjugate(
    m: &ComplexMatrix,
    dims: &[usize],
    targets: &[usize],
    op: &ComplexMatrix,
) -> Result<(ComplexMatrix, Vec<usize>)> {
    let (left, out_dims) = apply_left(m, dims, targets, op)?;
    apply_right_adjoint(&left, dims, targets, op).map(|(m, _)| (m, out_dims))
}

/// Applies a single-qubit superoperator given in Kraus form to `qubit`.
pub fn apply_qubit_kraus(
    m: &ComplexMatrix,
    dims: &[usize],
    qubit: usize,
    kraus: &[ComplexMatrix],
) -> Result<ComplexMatrix> {
    check_total(dims, m.rows())?;
    check_targets(dims, &[qubit])?;
    if dims[qubit] != 2 {
        return Err(Error::DimensionMismatch(format!(
            "subsystem {qubit} has dimension {}, expected a qubit",
            dims[qubit]
        )));
    }
    // transfer[(i,j),(k,l)] = Σ_K K_ik conj(K_jl)
    let mut transfer = [[ZERO; 4]; 4];
    for k in kraus {
        if k.rows() != 2 || k.cols() != 2 {
            return Err(Error::DimensionMismatch("Kraus operator must be 2x2".into()));
        }
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        transfer[2 * i + j][2 * a + b] += k[(i, a)] * k[(j, b)].conj();
                    }
                }
            }
        }
    }
    let n = m.rows();
    let st = strides(dims)[qubit];
    let bases = rest_offsets(dims, &strides(dims), &[qubit]);
    let mut out = m.clone();
    let src = m.data();
    let dst = out.data_mut();
    for &r in &bases {
        for &c in &bases {
            let idx = [r * n + c, r * n + c + st, (r + st) * n + c, (r + st) * n + c + st];
            let v = [src[idx[0]], src[idx[1]], src[idx[2]], src[idx[3]]];
            for (row, &id) in transfer.iter().zip(&idx) {
                dst[id] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            }
        }
    }
    Ok(out)
}

/// Reduced matrix over `keep` (returned in ascending subsystem order).
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_total(dims, m.rows())?;
    check_targets(dims, keep)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    let st = strides(dims);
    let keep_offs = target_offsets(dims, &st, &keep);
    let trace_offs = rest_offsets(dims, &st, &keep);
    let n = m.rows();
    let d = keep_offs.len();
    let src = m.data();
    let out = ComplexMatrix::from_fn(d, d, |a, b| {
        let (ra, cb) = (keep_offs[a], keep_offs[b]);
        trace_offs.iter().map(|&t| src[(ra + t) * n + cb + t]).sum()
    });
    Ok((out, keep.iter().map(|&k| dims[k]).collect()))
}

/// Applies an operator on `targets` to a statevector.
pub fn apply_to_vector(
    v: &[Complex64],
    dims: &[usize],
    targets: &[usize],
    op: &ComplexMatrix,
) -> Result<(Vec<Complex64>, Vec<usize>)> {
    let col = ComplexMatrix::new(v.len(), 1, v.to_vec())?;
    let (out, d) = apply_left(&col, dims, targets, op)?;
    Ok((out.into_data(), d))
}

fn check_total(dims: &[usize], n: usize) -> Result<()> {
    let total: usize = dims.iter().product();
    if total != n {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix side is {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pauli_matrix;

    #[test]
    fn left_and_right_agree_with_full_kron() {
        let x = pauli_matrix('X');
        let z = pauli_matrix('Z');
        let m = ComplexMatrix::from_fn(8, 8, |i, j| Complex64::new((i * 8 + j) as f64, i as f64));
        let full = tensor_all([&ComplexMatrix::identity(2), &x, &ComplexMatrix::identity(2)]);
        let (l, _) = apply_left(&m, &[2, 2, 2], &[1], &x).unwrap();
        assert!(l.max_abs_diff(&full.matmul(&m)) < 1e-12);
        let xz = tensor(&x, &z);
        let full2 = tensor_all([&z, &ComplexMatrix::identity(2), &x]);
        // targets listed out of order: op acts as X on 2 and Z on 0
        let (r, _) = apply_right_adjoint(&m, &[2, 2, 2], &[2, 0], &xz).unwrap();
        assert!(r.max_abs_diff(&m.matmul(&full2.adjoint())) < 1e-12);
    }

    #[test]
    fn dimension_changing_map() {
        let iso = ComplexMatrix::from_fn(4, 2, |i, j| if i == 3 * j { 1.0.into() } else { ZERO });
        let m = ComplexMatrix::identity(4);
        let (out, dims) = conjugate(&m, &[2, 2], &[1], &iso).unwrap();
        assert_eq!(dims, vec![2, 4]);
        assert_eq!(out.rows(), 8);
        assert!((out.trace().re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_and_duplicate_targets() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[2]),
            Err(Error::SubsystemOutOfRange { .. })
        ));
        assert!(matches!(
            apply_left(&m, &[2, 2], &[0, 0], &ComplexMatrix::identity(4)),
            Err(Error::DuplicateIndex(0))
        ));
    }
}
