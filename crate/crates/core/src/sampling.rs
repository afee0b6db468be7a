//! Seeded random generators used by property harnesses and the
//! falsification searches: Clifford words, Haar-random unitaries, and
//! diagonal hierarchy gates.

use crate::clifford::CliffordGate;
use crate::matrix::DenseUnitary;
use ndarray::Array2;
use num::complex::Complex64;
use rand::Rng;

/// A random Clifford word over {H, S, CNOT} of fixed length.
pub fn random_clifford_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> Vec<CliffordGate> {
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let pick = rng.gen_range(0..if n > 1 { 3 } else { 2 });
        match pick {
            0 => word.push(CliffordGate::H(rng.gen_range(0..n))),
            1 => word.push(CliffordGate::S(rng.gen_range(0..n))),
            _ => {
                let c = rng.gen_range(0..n);
                let mut t = rng.gen_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                word.push(CliffordGate::Cnot(c, t));
            }
        }
    }
    word
}

pub fn random_clifford<R: Rng>(n: usize, rng: &mut R) -> DenseUnitary {
    let word = random_clifford_word(n, 12 * n, rng);
    crate::clifford::word_to_matrix(&word, n)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_haar_unitary<R: Rng>(n: usize, rng: &mut R) -> DenseUnitary {
    let dim = 1usize << n;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        for prev in &cols {
            let overlap: Complex64 = prev
                .iter()
                .zip(v.iter())
                .map(|(p, w)| p.conj() * w)
                .sum();
            for (w, p) in v.iter_mut().zip(prev.iter()) {
                *w -= overlap * p;
            }
        }
        let norm: f64 = v.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
        for w in v.iter_mut() {
            *w /= norm;
        }
        cols.push(v);
    }
    let mut m = Array2::zeros((dim, dim));
    for (c, col) in cols.iter().enumerate() {
        for (r, val) in col.iter().enumerate() {
            m[(r, c)] = *val;
        }
    }
    DenseUnitary::from_array(n, m, 1e-8).expect("Gram-Schmidt output is unitary")
}

/// Random diagonal gate from the level-k diagonal group on n qubits:
/// a product of powers of the S_k-type single-qubit rotations and their
/// controlled descendants (phase-polynomial sampling).
pub fn random_diagonal_ck<R: Rng>(n: usize, k: u32, rng: &mut R) -> DenseUnitary {
    let pf = crate::phase_fn::PhaseFn::random_ck(n, k, rng);
    pf.to_matrix()
}
