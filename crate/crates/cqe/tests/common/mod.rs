#![allow(dead_code)]

use cqe::pairing_projection;
use encoding::{a_operator, symmetrize_over_bosons, QubitLayout};
use model::ModelSpec;
use ndarray::{Array2, Array4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use simulator::{apply_pauli_sum, evolve, StateVector};

pub fn spec(n_bosons: usize, n_orbitals: usize, force_constant: f64) -> ModelSpec {
    ModelSpec {
        n_bosons,
        n_orbitals,
        force_constant,
    }
}

/// Bitstring for the product state with every boson in orbital 0.
pub fn ground_label(layout: &QubitLayout) -> String {
    let n = layout.n_qubits();
    let mut chars = vec!['0'; n];
    for boson in 1..=layout.n_bosons {
        let qubit = layout.qubit_index(boson, 1).expect("orbital 1 exists");
        chars[n - 1 - qubit] = '1';
    }
    chars.into_iter().collect()
}

/// Random tensor satisfying the anti-Hermitian pairing
/// `A[pqst] = -conj(A[stpq])`.
pub fn random_paired_tensor(n_orbitals: usize, seed: u64) -> Array4<Complex64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let r = n_orbitals;
    let mut raw = Array4::<Complex64>::zeros((r, r, r, r));
    for value in raw.iter_mut() {
        *value = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    pairing_projection(&raw)
}

/// Random normalized state supported on the exchange-symmetric physical
/// sector (each boson register one-hot).
pub fn random_physical_state(layout: &QubitLayout, seed: u64) -> StateVector {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let r = layout.n_orbitals;
    let n = layout.n_bosons;
    let dim = 1usize << layout.n_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let assignments = r.pow(n as u32);
    for combo in 0..assignments {
        let mut index = 0usize;
        let mut rest = combo;
        for boson in 1..=n {
            let orbital = rest % r;
            rest /= r;
            index |= 1 << layout.qubit_index(boson, orbital + 1).expect("orbital in range");
        }
        amps[index] += Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let projected = symmetrize_over_bosons(layout, &amps).expect("symmetric part survives");
    StateVector::from_amplitudes(projected).expect("normalizable")
}

/// Generic entangled state: the all-in-orbital-0 product state evolved by a
/// random paired generator.
pub fn random_evolved_state(layout: &QubitLayout, seed: u64) -> StateVector {
    let start = StateVector::from_bitstring(&ground_label(layout)).expect("valid label");
    let tensor = random_paired_tensor(layout.n_orbitals, seed);
    let generator = a_operator(&tensor, layout).expect("paired tensor encodes");
    evolve(&start, &generator, 0.37).expect("evolution succeeds")
}

/// Dense matrix of a PauliSum in the computational basis; asserts the result
/// is real symmetric so it can feed the Jacobi eigensolver.
pub fn dense_real_matrix(op: &encoding::PauliSum) -> Array2<f64> {
    let n = op.n_qubits();
    let dim = 1usize << n;
    let mut dense = Array2::<f64>::zeros((dim, dim));
    for col in 0..dim {
        let basis = StateVector::basis(n, col);
        let image = apply_pauli_sum(&basis, op).expect("matching registers");
        for (row, amp) in image.amplitudes().iter().enumerate() {
            assert!(
                amp.im.abs() <= 1e-14,
                "operator has imaginary matrix element {:.3e} at ({row}, {col})",
                amp.im
            );
            dense[[row, col]] = amp.re;
        }
    }
    for i in 0..dim {
        for j in 0..i {
            assert!(
                (dense[[i, j]] - dense[[j, i]]).abs() <= 1e-12,
                "operator matrix is not symmetric at ({i}, {j})"
            );
        }
    }
    dense
}

/// Rebuild the full register state of column `which` of a symmetric-subspace
/// spectrum: eigenvector components weight the symmetrized one-hot vectors,
/// one per occupation pattern in Fock order.
pub fn subspace_vector(
    layout: &QubitLayout,
    eigenvectors: &Array2<f64>,
    which: usize,
) -> StateVector {
    let basis = reference::fock_basis(layout.n_bosons, layout.n_orbitals);
    let dim = 1usize << layout.n_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (k, occ) in basis.occupations().iter().enumerate() {
        let mut index = 0usize;
        let mut boson = 1usize;
        for (orbital, &count) in occ.iter().enumerate() {
            for _ in 0..count {
                index |= 1 << layout.qubit_index(boson, orbital + 1).expect("orbital in range");
                boson += 1;
            }
        }
        let mut raw = vec![Complex64::new(0.0, 0.0); dim];
        raw[index] = Complex64::new(1.0, 0.0);
        let projected = symmetrize_over_bosons(layout, &raw).expect("one-hot symmetrizes");
        for (a, p) in amps.iter_mut().zip(projected.iter()) {
            *a += eigenvectors[[k, which]] * p;
        }
    }
    StateVector::from_amplitudes(amps).expect("eigenvector normalizes")
}
