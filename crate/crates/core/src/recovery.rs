//! Syndrome extraction, minimum-weight correction and decoding.
//!
//! For a code with syndrome table `{C_s}`, the vectors `C_s|j_L⟩` form an
//! orthonormal basis of the block. Syndrome measurement followed by the
//! correction `C_s` and decoding is therefore the channel with Kraus
//! operators `R_s = Σ_j |j⟩⟨j_L| C_s`, one per syndrome, mapping the `2ⁿ`
//! block onto a single logical qubit.

use crate::channels::KrausChannel;
use crate::codes::{paulis_by_weight, PauliString, StabilizerCode};
use crate::error::{Error, Result};
use crate::qcore::tensor::{apply_left, apply_qubit_kraus, apply_right_adjoint, conjugate};
use crate::qcore::{ComplexMatrix, DensityMatrix, MAX_QUBITS};
use crate::source::ParamDerivativeFamily;

/// Relative trace allowed outside the codespace in [`decode_pair`].
pub const LEAKAGE_TOLERANCE: f64 = 1e-8;

/// Largest block handled by the exhaustive table search.
pub const MAX_TABLE_QUBITS: usize = MAX_QUBITS / 2;

/// Minimum-weight correction for every syndrome, indexed by syndrome bits.
#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeTable {
    corrections: Vec<PauliString>,
}

impl SyndromeTable {
    pub fn correction(&self, syndrome: u32) -> &PauliString {
        &self.corrections[syndrome as usize]
    }

    pub fn len(&self) -> usize {
        self.corrections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corrections.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &PauliString)> {
        self.corrections.iter().enumerate().map(|(s, c)| (s as u32, c))
    }
}

/// Exhaustive search by ascending weight; the first Pauli string reaching a
/// syndrome becomes its correction. Within a weight, supports are visited
/// lexicographically (lowest qubits first), so ties such as the even-length
/// repetition code's `n/2`-flip patterns resolve toward the lowest indices.
pub fn build_syndrome_table(code: &StabilizerCode) -> Result<SyndromeTable> {
    if code.n > MAX_TABLE_QUBITS {
        return Err(Error::RegisterTooLarge(code.n));
    }
    let count = code.syndrome_count();
    let mut slots: Vec<Option<PauliString>> = vec![None; count];
    let mut filled = 0;
    for p in paulis_by_weight(code.n, code.n) {
        let s = code.syndrome(&p) as usize;
        if slots[s].is_none() {
            slots[s] = Some(p);
            filled += 1;
            if filled == count {
                break;
            }
        }
    }
    let corrections = slots
        .into_iter()
        .enumerate()
        .map(|(s, c)| c.ok_or_else(|| Error::MalformedProtocol(format!("syndrome {s:b} unreachable"))))
        .collect::<Result<_>>()?;
    Ok(SyndromeTable { corrections })
}

/// A code with its table and per-syndrome recover-and-decode operators.
#[derive(Clone, Debug)]
pub struct BlockDecoder {
    pub code: StabilizerCode,
    pub table: SyndromeTable,
    /// `R_s` (2 × 2ⁿ), indexed by syndrome.
    decode_ops: Vec<ComplexMatrix>,
}

impl BlockDecoder {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let table = build_syndrome_table(code)?;
        let decode_ops = table
            .iter()
            .map(|(_, c)| {
                let w0 = c.apply(&code.codeword0);
                let w1 = c.apply(&code.codeword1);
                ComplexMatrix::from_fn(2, code.block_dim(), |j, i| {
                    if j == 0 {
                        w0[i].conj()
                    } else {
                        w1[i].conj()
                    }
                })
            })
            .collect();
        Ok(Self {
            code: code.clone(),
            table,
            decode_ops,
        })
    }

    pub fn decode_op(&self, syndrome: u32) -> &ComplexMatrix {
        &self.decode_ops[syndrome as usize]
    }

    pub fn syndrome_count(&self) -> usize {
        self.decode_ops.len()
    }

    /// `R_s M R_s†` on subsystem `target` (of dimension `2ⁿ`) of `dims`.
    fn branch(&self, m: &ComplexMatrix, dims: &[usize], target: usize, s: usize) -> Result<(ComplexMatrix, Vec<usize>)> {
        let r = &self.decode_ops[s];
        let (left, out_dims) = apply_left(m, dims, &[target], r)?;
        let (out, _) = apply_right_adjoint(&left, dims, &[target], r)?;
        Ok((out, out_dims))
    }

    /// `Σ_s R_s M R_s†` on subsystem `target`.
    fn decode_sum(&self, m: &ComplexMatrix, dims: &[usize], target: usize) -> Result<(ComplexMatrix, Vec<usize>)> {
        let mut acc: Option<(ComplexMatrix, Vec<usize>)> = None;
        for s in 0..self.syndrome_count() {
            let (b, d) = self.branch(m, dims, target, s)?;
            match acc.as_mut() {
                Some((a, _)) => *a += &b,
                None => acc = Some((b, d)),
            }
        }
        Ok(acc.expect("at least one syndrome"))
    }
}

/// One syndrome outcome of a block recovery.
#[derive(Clone, Debug)]
pub struct SyndromeBranch {
    pub syndrome: u32,
    pub probability: f64,
    /// Post-correction state, normalized.
    pub state: DensityMatrix,
}

#[derive(Clone, Debug)]
pub struct RecoveryOutput {
    pub averaged_state: DensityMatrix,
    /// Branches with nonzero probability, when requested.
    pub syndrome_branches: Option<Vec<SyndromeBranch>>,
}

fn merged_dims(dims: &[usize], offset: usize, n: usize) -> Result<Vec<usize>> {
    if offset + n > dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: offset + n - 1,
            count: dims.len(),
        });
    }
    if dims[offset..offset + n].iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch("code block must consist of qubits".into()));
    }
    let mut out = dims[..offset].to_vec();
    out.push(1 << n);
    out.extend_from_slice(&dims[offset + n..]);
    Ok(out)
}

/// Measures the block's syndrome, applies the table correction and returns
/// the syndrome-averaged state (and optionally each branch). The output stays
/// on the physical register and lies in the block's codespace.
pub fn recover_block(
    rho: &DensityMatrix,
    code: &StabilizerCode,
    block_offset: usize,
    keep_branches: bool,
) -> Result<RecoveryOutput> {
    let dec = BlockDecoder::new(code)?;
    let dims = merged_dims(rho.dims(), block_offset, code.n)?;
    let iso = code.isometry();
    let reencode = |m: &ComplexMatrix, d: &[usize]| conjugate(m, d, &[block_offset], &iso).map(|(m, _)| m);
    let mut total: Option<ComplexMatrix> = None;
    let mut branches = Vec::new();
    let mut logical_dims = Vec::new();
    for s in 0..dec.syndrome_count() {
        let (m, d) = dec.branch(rho.matrix(), &dims, block_offset, s)?;
        logical_dims = d;
        if keep_branches {
            let p = m.trace().re;
            if p > 1e-15 {
                let state = reencode(&m.scale_real(1.0 / p), &logical_dims)?;
                branches.push(SyndromeBranch {
                    syndrome: s as u32,
                    probability: p,
                    state: DensityMatrix::from_trusted(state, rho.dims().to_vec()),
                });
            }
        }
        match total.as_mut() {
            Some(t) => *t += &m,
            None => total = Some(m),
        }
    }
    let averaged = reencode(&total.expect("nonempty"), &logical_dims)?;
    Ok(RecoveryOutput {
        averaged_state: DensityMatrix::from_trusted(averaged, rho.dims().to_vec()),
        syndrome_branches: keep_branches.then_some(branches),
    })
}

/// Inverse of [`crate::codes::encode_pair`] on a register supported in the
/// two-block codespace.
pub fn decode_pair(rho: &DensityMatrix, code: &StabilizerCode) -> Result<DensityMatrix> {
    let n = code.n;
    if rho.dims().len() != 2 * n || rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {}-qubit register, got dims {:?}",
            2 * n,
            rho.dims()
        )));
    }
    let dims = [1 << n, 1 << n];
    let vdag = code.isometry().adjoint();
    let (a, d) = conjugate(rho.matrix(), &dims, &[0], &vdag)?;
    let (m, _) = conjugate(&a, &d, &[1], &vdag)?;
    let kept = m.trace().re;
    let leak = rho.trace() - kept;
    if leak > LEAKAGE_TOLERANCE * rho.trace() {
        return Err(Error::CodespaceLeakage(leak));
    }
    DensityMatrix::new(m.scale_real(1.0 / kept), vec![2, 2])
}

/// Encodes the logical qubit at `target` of a two-subsystem operator,
/// applies `channel` to each of its physical qubits, then recovers and
/// decodes it, leaving the other logical qubit untouched.
fn process_block(
    m: &ComplexMatrix,
    target: usize,
    dec: &BlockDecoder,
    channel: &KrausChannel,
) -> Result<Vec<ComplexMatrix>> {
    let n = dec.code.n;
    let (enc, _) = conjugate(m, &[2, 2], &[target], &dec.code.isometry())?;
    // physical-qubit view: the block's n qubits replace subsystem `target`
    let qdims = vec![2; n + 1];
    let first = if target == 0 { 0 } else { 1 };
    let mut noisy = enc;
    for q in first..first + n {
        noisy = apply_qubit_kraus(&noisy, &qdims, q, &channel.kraus_ops)?;
    }
    let block_dims = if target == 0 { [1 << n, 2] } else { [2, 1 << n] };
    (0..dec.syndrome_count())
        .map(|s| dec.branch(&noisy, &block_dims, target, s).map(|(b, _)| b))
        .collect()
}

fn sum(ms: Vec<ComplexMatrix>) -> ComplexMatrix {
    let mut it = ms.into_iter();
    let mut acc = it.next().expect("nonempty");
    for m in it {
        acc += &m;
    }
    acc
}

fn check_register(code: &StabilizerCode) -> Result<()> {
    if 2 * code.n > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(2 * code.n));
    }
    Ok(())
}

/// Logical-level image of `m` under encode, i.i.d. noise on all `2n`
/// physical qubits, recovery of both blocks and decoding.
///
/// The two blocks are processed one after the other, which is exact because
/// every step acts on a single block.
pub fn pipeline_map(
    dec: &BlockDecoder,
    channel: &KrausChannel,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_register(&dec.code)?;
    let after_b = sum(process_block(m, 1, dec, channel)?);
    Ok(sum(process_block(&after_b, 0, dec, channel)?))
}

/// `Decode ∘ Recover_A ∘ Recover_B ∘ Channel^⊗2n ∘ Encode` applied to the
/// state and both derivatives.
pub fn qec_pipeline(
    code: &StabilizerCode,
    channel: &KrausChannel,
    family: &ParamDerivativeFamily,
) -> Result<ParamDerivativeFamily> {
    let dec = BlockDecoder::new(code)?;
    qec_pipeline_with(&dec, channel, family)
}

/// [`qec_pipeline`] reusing a prebuilt decoder.
pub fn qec_pipeline_with(
    dec: &BlockDecoder,
    channel: &KrausChannel,
    family: &ParamDerivativeFamily,
) -> Result<ParamDerivativeFamily> {
    let state = pipeline_map(dec, channel, family.state.matrix())?;
    Ok(ParamDerivativeFamily {
        state: DensityMatrix::new(state, vec![2, 2])?,
        d_phi: pipeline_map(dec, channel, &family.d_phi)?,
        d_gamma: pipeline_map(dec, channel, &family.d_gamma)?,
    })
}

/// The same pipeline evaluated on the full `2n`-qubit register.
pub fn qec_pipeline_full_register(
    code: &StabilizerCode,
    channel: &KrausChannel,
    family: &ParamDerivativeFamily,
) -> Result<ParamDerivativeFamily> {
    check_register(code)?;
    let dec = BlockDecoder::new(code)?;
    let n = code.n;
    let qubits: Vec<usize> = (0..2 * n).collect();
    let map = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
        let enc = crate::codes::encode_pair_matrix(code, m);
        let noisy = crate::channels::apply_iid_matrix(&enc, &vec![2; 2 * n], channel, &qubits)?;
        let (b, d) = dec.decode_sum(&noisy, &[1 << n, 1 << n], 1)?;
        let (a, _) = dec.decode_sum(&b, &d, 0)?;
        Ok(a)
    };
    Ok(ParamDerivativeFamily {
        state: DensityMatrix::new(map(family.state.matrix())?, vec![2, 2])?,
        d_phi: map(&family.d_phi)?,
        d_gamma: map(&family.d_gamma)?,
    })
}

/// Unnormalized logical state and derivatives for one joint syndrome.
#[derive(Clone, Debug)]
pub struct BranchFamily {
    pub syndrome_a: u32,
    pub syndrome_b: u32,
    pub state: ComplexMatrix,
    pub d_phi: ComplexMatrix,
    pub d_gamma: ComplexMatrix,
}

impl BranchFamily {
    pub fn probability(&self) -> f64 {
        self.state.trace().re
    }
}

/// Per-syndrome outputs of [`qec_pipeline`]; they sum to its result.
pub fn qec_pipeline_branches(
    code: &StabilizerCode,
    channel: &KrausChannel,
    family: &ParamDerivativeFamily,
) -> Result<Vec<BranchFamily>> {
    check_register(code)?;
    let dec = BlockDecoder::new(code)?;
    let split = |m: &ComplexMatrix| -> Result<Vec<Vec<ComplexMatrix>>> {
        process_block(m, 1, &dec, channel)?
            .iter()
            .map(|b| process_block(b, 0, &dec, channel))
            .collect()
    };
    let states = split(family.state.matrix())?;
    let d_phi = split(&family.d_phi)?;
    let d_gamma = split(&family.d_gamma)?;
    let mut out = Vec::new();
    for (sb, row) in states.into_iter().enumerate() {
        for (sa, state) in row.into_iter().enumerate() {
            out.push(BranchFamily {
                syndrome_a: sa as u32,
                syndrome_b: sb as u32,
                state,
                d_phi: d_phi[sb][sa].clone(),
                d_gamma: d_gamma[sb][sa].clone(),
            });
        }
    }
    Ok(out)
}
