//! The energy functional E = sum K[pqst] D[pqst] must agree with the direct
//! calibrated Hamiltonian expectation and with the benchmark spectra.

mod common;

use cqe::{energy, CqeConfig, CqeError, GammaSet, TwoRdm};
use encoding::{calibration_factor, qubit_hamiltonian, QubitLayout};
use model::reduced_hamiltonian;
use ndarray::Array4;
use num_complex::Complex64;
use reference::{encoded_subspace_diag, full_ci};
use simulator::{expectation_exact, StateVector};

#[test]
fn rdm_trace_energy_equals_hamiltonian_expectation() {
    for (z, seed) in [(2.2, 2u64), (10.0, 4)] {
        let spec = common::spec(2, 2, z);
        let k = reduced_hamiltonian(&spec);
        let layout = QubitLayout::new(2, 2);
        let hamiltonian = qubit_hamiltonian(&k, &layout).unwrap();
        let gammas = GammaSet::new(&layout).unwrap();
        let cal = calibration_factor(2);

        let states = [
            StateVector::from_bitstring("0101").unwrap(),
            common::random_evolved_state(&layout, seed),
            common::random_physical_state(&layout, seed + 100),
        ];
        for state in &states {
            let rdm = gammas.measure_rdm2(state, &CqeConfig::default()).unwrap();
            let via_rdm = energy(&rdm, &k).unwrap();
            let direct = cal * expectation_exact(state, &hamiltonian).unwrap().re;
            assert!(
                (via_rdm - direct).abs() <= 1e-10,
                "Z={z}: trace route {via_rdm:.12} disagrees with direct route {direct:.12}"
            );
        }
    }
}

#[test]
fn subspace_eigenvectors_reproduce_benchmark_energies() {
    for (z, expected) in [(10.0, 5.990719), (5.0, 3.968379)] {
        let spec = common::spec(2, 2, z);
        let k = reduced_hamiltonian(&spec);
        let layout = QubitLayout::new(2, 2);
        let spectrum = encoded_subspace_diag(&k, &layout, true).unwrap();
        let gammas = GammaSet::new(&layout).unwrap();

        let psi = common::subspace_vector(&layout, &spectrum.eigenvectors, 0);
        let rdm = gammas.measure_rdm2(&psi, &CqeConfig::default()).unwrap();
        let e = energy(&rdm, &k).unwrap();
        assert!(
            (e - expected).abs() <= 1e-6,
            "Z={z}: ground energy via the 2-RDM should be {expected}, got {e:.7}"
        );
        let fci = full_ci(&k).ground_energy();
        assert!(
            (e - fci).abs() <= 1e-10,
            "Z={z}: 2-RDM energy {e:.12} must match full CI {fci:.12}"
        );
    }
}

#[test]
fn zero_rdm_has_zero_energy() {
    let spec = common::spec(2, 2, 5.0);
    let k = reduced_hamiltonian(&spec);
    let rdm = TwoRdm {
        elements: Array4::<Complex64>::zeros((2, 2, 2, 2)),
        calibrated: true,
    };
    assert_eq!(energy(&rdm, &k).unwrap(), 0.0);
}

#[test]
fn unpaired_imaginary_component_is_rejected() {
    let spec = common::spec(2, 2, 5.0);
    let k = reduced_hamiltonian(&spec);
    let mut elements = Array4::<Complex64>::zeros((2, 2, 2, 2));
    // D[0101] pairs with itself, so an imaginary value breaks Hermiticity
    // and leaks into the energy trace.
    elements[[0, 1, 0, 1]] = Complex64::new(0.0, 1.0);
    let rdm = TwoRdm {
        elements,
        calibrated: true,
    };
    assert!(
        matches!(energy(&rdm, &k), Err(CqeError::EnergyNotReal { .. })),
        "an imaginary self-paired element must be rejected"
    );
}

#[test]
fn orbital_mismatch_is_rejected() {
    let spec = common::spec(2, 2, 5.0);
    let k = reduced_hamiltonian(&spec);
    let rdm = TwoRdm {
        elements: Array4::<Complex64>::zeros((3, 3, 3, 3)),
        calibrated: true,
    };
    assert!(matches!(
        energy(&rdm, &k),
        Err(CqeError::OrbitalMismatch {
            got: 3,
            expected: 2
        })
    ));
}
