//! Shared dense-matrix oracle for the simulator integration tests:
//! explicit matrices for Pauli sums and a Taylor scaling-and-squaring
//! matrix exponential.

#![allow(dead_code)] // each test binary uses a different subset

use encoding::{Pauli, PauliSum};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const IM: Complex64 = Complex64::new(0.0, 1.0);

pub type Matrix = Vec<Vec<Complex64>>;

/// Action of one Pauli word on a basis column: |col> -> phase * |row>.
pub fn word_action(word: &[Pauli], col: usize) -> (usize, Complex64) {
    let mut row = col;
    let mut phase = ONE;
    for (k, &p) in word.iter().enumerate() {
        let bit = (col >> k) & 1;
        match p {
            Pauli::I => {}
            Pauli::X => row ^= 1 << k,
            Pauli::Y => {
                row ^= 1 << k;
                phase *= if bit == 0 { IM } else { -IM };
            }
            Pauli::Z => {
                if bit == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (row, phase)
}

/// Dense matrix of a PauliSum, row-major.
pub fn dense(sum: &PauliSum) -> Matrix {
    let dim = 1usize << sum.n_qubits();
    let mut m = vec![vec![ZERO; dim]; dim];
    for term in sum.terms() {
        for col in 0..dim {
            let (row, phase) = word_action(&term.word, col);
            m[row][col] += term.coefficient * phase;
        }
    }
    m
}

pub fn mat_vec(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    let dim = m.len();
    let mut out = vec![ZERO; dim];
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if v[j] != ZERO {
                out[i] += x * v[j];
            }
        }
    }
    out
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut out = vec![vec![ZERO; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == ZERO {
                continue;
            }
            for j in 0..dim {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// exp(M) by scaling and squaring with a Taylor series on the scaled block.
pub fn expm(m: &Matrix) -> Matrix {
    let dim = m.len();
    let norm: f64 = m
        .iter()
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scale = 1.0 / 2f64.powi(squarings as i32);

    let scaled: Matrix = m
        .iter()
        .map(|row| row.iter().map(|&c| c * scale).collect())
        .collect();

    let mut result: Matrix = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let mut power = result.clone();
    for k in 1..=24u32 {
        power = mat_mul(&power, &scaled);
        let inv_fact = 1.0 / (1..=k).map(|x| x as f64).product::<f64>();
        for (row_r, row_p) in result.iter_mut().zip(power.iter()) {
            for (r, &p) in row_r.iter_mut().zip(row_p.iter()) {
                *r += p * inv_fact;
            }
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

/// Random PauliSum with the given number of draws (like words merge).
pub fn random_sum(rng: &mut ChaCha12Rng, n_qubits: usize, n_terms: usize) -> PauliSum {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut sum = PauliSum::zero(n_qubits);
    for _ in 0..n_terms {
        let word: Vec<Pauli> = (0..n_qubits).map(|_| letters[rng.gen_range(0..4)]).collect();
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        sum.add_term(c, word);
    }
    sum
}

/// Random anti-Hermitian PauliSum: purely imaginary weights on random words.
pub fn random_generator(rng: &mut ChaCha12Rng, n_qubits: usize, n_terms: usize) -> PauliSum {
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut sum = PauliSum::zero(n_qubits);
    for _ in 0..n_terms {
        let word: Vec<Pauli> = (0..n_qubits).map(|_| letters[rng.gen_range(0..4)]).collect();
        sum.add_term(Complex64::new(0.0, rng.gen_range(-1.0..1.0)), word);
    }
    sum
}
