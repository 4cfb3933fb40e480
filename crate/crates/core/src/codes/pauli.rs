use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{pauli_matrix, tensor_all, ComplexMatrix, I, ONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }
}

/// Tensor product of single-qubit Paulis; position 0 is qubit 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        Self { ops }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            ops: vec![Pauli::I; n],
        }
    }

    /// `letter` on each listed qubit, identity elsewhere.
    pub fn on(n: usize, qubits: &[usize], letter: Pauli) -> Self {
        let mut p = Self::identity(n);
        for &q in qubits {
            p.ops[q] = letter;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&q| self.ops[q] != Pauli::I).collect()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        assert_eq!(self.len(), other.len());
        let anti = self
            .ops
            .iter()
            .zip(&other.ops)
            .filter(|(a, b)| (a.has_x() && b.has_z()) ^ (a.has_z() && b.has_x()))
            .count();
        anti % 2 == 0
    }

    /// Product up to a global phase.
    pub fn mul_unsigned(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(&a, &b)| match (a.has_x() ^ b.has_x(), a.has_z() ^ b.has_z()) {
                (false, false) => Pauli::I,
                (true, false) => Pauli::X,
                (true, true) => Pauli::Y,
                (false, true) => Pauli::Z,
            })
            .collect();
        Self { ops }
    }

    fn masks(&self) -> (usize, usize, usize) {
        let n = self.len();
        let (mut xm, mut zm, mut ny) = (0, 0, 0);
        for (q, p) in self.ops.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            if p.has_x() {
                xm |= bit;
            }
            if p.has_z() {
                zm |= bit;
            }
            if *p == Pauli::Y {
                ny += 1;
            }
        }
        (xm, zm, ny)
    }

    /// Applies the string to a `2ⁿ` statevector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), 1 << self.len());
        let (xm, zm, ny) = self.masks();
        let global = I.powu(ny as u32);
        let mut out = vec![Complex64::default(); v.len()];
        for (i, &a) in v.iter().enumerate() {
            let sign = if (i & zm).count_ones() % 2 == 1 { -ONE } else { ONE };
            out[i ^ xm] = a * sign * global;
        }
        out
    }

    /// Dense `2ⁿ × 2ⁿ` matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let mats: Vec<ComplexMatrix> = self.ops.iter().map(|p| pauli_matrix(p.letter())).collect();
        tensor_all(mats.iter())
    }

    /// Single-qubit factors as 2×2 matrices paired with their qubit index,
    /// skipping identities.
    pub fn factors(&self) -> Vec<(usize, ComplexMatrix)> {
        self.support()
            .into_iter()
            .map(|q| (q, pauli_matrix(self.ops[q].letter())))
            .collect()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::OutOfRange(format!("not a Pauli letter: {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self { ops })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.ops {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// All Pauli strings on `n` qubits ordered by weight, then by support
/// (lexicographic, lowest qubit first), then by letters with `Z < X < Y` at
/// each position.
pub fn paulis_by_weight(n: usize, max_weight: usize) -> Vec<PauliString> {
    const ORDER: [Pauli; 3] = [Pauli::Z, Pauli::X, Pauli::Y];
    let mut out = vec![PauliString::identity(n)];
    for w in 1..=max_weight.min(n) {
        for support in combinations(n, w) {
            for m in 0..3usize.pow(w as u32) {
                let mut p = PauliString::identity(n);
                // first support position is the most significant digit
                for (k, &q) in support.iter().enumerate() {
                    let digit = (m / 3usize.pow((w - 1 - k) as u32)) % 3;
                    p.ops[q] = ORDER[digit];
                }
                out.push(p);
            }
        }
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_matches_dense_matrix() {
        let p: PauliString = "XYZ".parse().unwrap();
        let v: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let dense = p.matrix().apply(&v);
        let fast = p.apply(&v);
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn enumeration_counts() {
        // Σ_{w≤2} C(4,w) 3^w = 1 + 12 + 54
        assert_eq!(paulis_by_weight(4, 2).len(), 67);
        assert_eq!(paulis_by_weight(3, 3).len(), 64);
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn enumeration_order() {
        let ps = paulis_by_weight(2, 2);
        let names: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        assert_eq!(&names[..5], &["II", "ZI", "XI", "YI", "IZ"]);
        assert_eq!(names[7], "ZZ");
        assert_eq!(names[8], "ZX");
    }

    #[test]
    fn commutation() {
        let a: PauliString = "XX".parse().unwrap();
        let b: PauliString = "ZZ".parse().unwrap();
        let c: PauliString = "ZI".parse().unwrap();
        assert!(a.commutes_with(&b));
        assert!(!a.commutes_with(&c));
        assert_eq!(a.mul_unsigned(&b).to_string(), "YY");
    }
}
