//! Shared oracles for the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stellar_qec::codes::{Pauli, PauliString, StabilizerCode};
use stellar_qec::qcore::{inner, tensor, ComplexMatrix};
use stellar_qec::recovery::build_syndrome_table;

/// Per-qubit probabilities of `I, X, Y, Z`.
#[derive(Clone, Copy, Debug)]
pub struct PauliNoise(pub [f64; 4]);

impl PauliNoise {
    pub fn dephasing(p: f64) -> Self {
        Self([1.0 - p, 0.0, 0.0, p])
    }

    pub fn depolarizing(p: f64) -> Self {
        Self([1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Pauli {
        let u: f64 = rng.random();
        let [pi, px, py, _] = self.0;
        if u < pi {
            Pauli::I
        } else if u < pi + px {
            Pauli::X
        } else if u < pi + px + py {
            Pauli::Y
        } else {
            Pauli::Z
        }
    }
}

/// Sample mean and standard error of a matrix-valued estimator, entrywise
/// for real and imaginary parts.
pub struct MatrixEstimate {
    pub mean: ComplexMatrix,
    pub stderr_re: Vec<f64>,
    pub stderr_im: Vec<f64>,
}

impl MatrixEstimate {
    /// Largest `|exact − mean|` in units of the standard error (entries with
    /// zero spread must agree to `1e-12`).
    pub fn worst_sigma(&self, exact: &ComplexMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, (e, m)) in exact.data().iter().zip(self.mean.data()).enumerate() {
            for (d, se) in [((e.re - m.re).abs(), self.stderr_re[k]), ((e.im - m.im).abs(), self.stderr_im[k])] {
                let z = if se > 0.0 {
                    d / se
                } else if d <= 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                };
                worst = worst.max(z);
            }
        }
        worst
    }
}

/// Logical action of error `e` followed by the table correction on one
/// block, as `⟨i_L| C E |j_L⟩`.
fn logical_action(code: &StabilizerCode, correction: &PauliString, e: &PauliString) -> ComplexMatrix {
    let words = [&code.codeword0, &code.codeword1];
    ComplexMatrix::from_fn(2, 2, |i, j| {
        let v = correction.apply(&e.apply(words[j]));
        inner(words[i], &v)
    })
}

/// Kraus-trajectory estimate of the encode, noise, recover, decode map
/// applied to each operator in `ops`. Each sample draws an i.i.d. Pauli
/// error pattern on both blocks and propagates the codewords through it.
pub fn trajectory_estimate(
    code: &StabilizerCode,
    noise: PauliNoise,
    ops: &[&ComplexMatrix],
    samples: usize,
    seed: u64,
) -> Vec<MatrixEstimate> {
    let table = build_syndrome_table(code).expect("table");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = code.n;
    let mut sums: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); 16]; ops.len()];
    let mut sq_re = vec![vec![0.0; 16]; ops.len()];
    let mut sq_im = vec![vec![0.0; 16]; ops.len()];
    for _ in 0..samples {
        let mut blocks = Vec::with_capacity(2);
        for _ in 0..2 {
            let e = PauliString::new((0..n).map(|_| noise.draw(&mut rng)).collect());
            let c = table.correction(code.syndrome(&e));
            blocks.push(logical_action(code, c, &e));
        }
        let k = tensor(&blocks[0], &blocks[1]);
        let kd = k.adjoint();
        for (idx, op) in ops.iter().enumerate() {
            let out = k.matmul(op).matmul(&kd);
            for (j, v) in out.data().iter().enumerate() {
                sums[idx][j] += v;
                sq_re[idx][j] += v.re * v.re;
                sq_im[idx][j] += v.im * v.im;
            }
        }
    }
    let nf = samples as f64;
    (0..ops.len())
        .map(|idx| {
            let mean: Vec<Complex64> = sums[idx].iter().map(|s| s / nf).collect();
            let se = |sq: &[f64], part: &dyn Fn(&Complex64) -> f64| -> Vec<f64> {
                mean.iter()
                    .zip(sq)
                    .map(|(m, s)| ((s / nf - part(m).powi(2)).max(0.0) / nf).sqrt())
                    .collect()
            };
            MatrixEstimate {
                stderr_re: se(&sq_re[idx], &|c| c.re),
                stderr_im: se(&sq_im[idx], &|c| c.im),
                mean: ComplexMatrix::new(4, 4, mean).expect("4x4"),
            }
        })
        .collect()
}

/// Random complex matrix with entries uniform in the unit square.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    random_matrix(n, n, seed).hermitian_part()
}

/// Full-rank random density matrix `G G† / Tr(G G†)`.
pub fn random_density_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let g = random_matrix(n, n, seed);
    let w = g.matmul(&g.adjoint());
    let t = w.trace().re;
    w.scale_real(1.0 / t)
}

/// Random CPTP map on `dim` given by `count` Kraus operators: the columns of
/// an isometry obtained by Gram–Schmidt on a random `count·dim × dim` matrix.
pub fn random_kraus(dim: usize, count: usize, seed: u64) -> Vec<ComplexMatrix> {
    let g = random_matrix(count * dim, dim, seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for c in &cols {
            let overlap = inner(c, &v);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= overlap * ci;
            }
        }
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / nv).collect());
    }
    (0..count)
        .map(|k| ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][k * dim + i]))
        .collect()
}

pub fn kraus_apply(kraus: &[ComplexMatrix], m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for k in kraus {
        out += &k.matmul(m).matmul(&k.adjoint());
    }
    out
}
