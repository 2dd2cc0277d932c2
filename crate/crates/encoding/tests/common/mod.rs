//! Shared dense-oracle helpers for the encoding integration tests.

#![allow(dead_code)] // each test binary uses a different subset

use encoding::{Pauli, PauliSum};
use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const IM: Complex64 = Complex64::new(0.0, 1.0);

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

/// Apply a PauliSum to a dense state vector.
pub fn apply_sum(sum: &PauliSum, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    for term in sum.terms() {
        for (col, &amp) in v.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let (row, phase) = word_action(&term.word, col);
            out[row] += term.coefficient * phase * amp;
        }
    }
    out
}

/// Matrix element <bra| sum |ket>.
pub fn matrix_element(sum: &PauliSum, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    let applied = apply_sum(sum, ket);
    bra.iter()
        .zip(applied.iter())
        .map(|(b, a)| b.conj() * a)
        .sum()
}

/// Largest coefficient of the difference between two sums.
pub fn sum_distance(a: &PauliSum, b: &PauliSum) -> f64 {
    let diff = a.add(&b.scale(-ONE)).unwrap();
    diff.terms().map(|t| t.coefficient.norm()).fold(0.0, f64::max)
}
