//! Exact reference solvers: bosonic full configuration interaction in the
//! truncated orbital basis, natural-occupation analysis, cross-validation of
//! the qubit encoding by direct subspace diagonalization, two-particle
//! exchange-sector spectra, and parameter scans over the coupling strength.

use encoding::{qubit_hamiltonian, symmetrize_over_bosons, EncodingError, QubitLayout};
use model::{exact_energy, mean_field_energy, one_body_matrix, reduced_hamiltonian, two_body_tensor,
    ModelError, ModelSpec, ReducedHamiltonian};
use ndarray::{Array2, Array4};
use num_complex::Complex64;
use rayon::prelude::*;
use simulator::{apply_pauli_sum, SimulatorError, StateVector};
use thiserror::Error;

pub mod linalg;

use linalg::eigh_symmetric;

/// Errors raised by the reference solvers.
#[derive(Debug, Error)]
pub enum ReferenceError {
    /// State index past the spectrum dimension.
    #[error("state index {which} out of range for a {dim}-state spectrum")]
    StateIndexOutOfRange { which: usize, dim: usize },
    /// Dense subspace diagonalization is capped at 12 qubits.
    #[error("register of {n_qubits} qubits exceeds the dense-diagonalization cap of {max}")]
    CapacityExceeded { n_qubits: usize, max: usize },
    /// Scan grid values must define bound systems.
    #[error("grid value {value} outside (0, 1): N/Z must be positive and Z must exceed N")]
    GridOutOfRange { value: f64 },
    /// The pair problem needs a positive basis scale.
    #[error("basis scale gamma must be positive, got {gamma}")]
    InvalidGamma { gamma: f64 },
    /// A model constructed inside a scan failed validation.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// Encoding failures propagated from subspace diagonalization.
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    /// Simulator failures propagated from subspace diagonalization.
    #[error(transparent)]
    Simulation(#[from] SimulatorError),
}

/// Occupation-number basis of the truncated bosonic Fock space: all vectors
/// (n_0, ..., n_{R-1}) with sum N, enumerated with the leading orbital's
/// occupation descending — (2,0), (1,1), (0,2) for two bosons in two
/// orbitals.  Dimension C(N+R-1, R-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    pub n_bosons: usize,
    pub n_orbitals: usize,
    occupations: Vec<Vec<usize>>,
}

impl FockBasis {
    pub fn dimension(&self) -> usize {
        self.occupations.len()
    }

    pub fn occupations(&self) -> &[Vec<usize>] {
        &self.occupations
    }
}

fn enumerate_compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        enumerate_compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Enumerate the Fock basis for `n_bosons` in `n_orbitals` orbitals.
pub fn fock_basis(n_bosons: usize, n_orbitals: usize) -> FockBasis {
    assert!(n_bosons >= 1 && n_orbitals >= 1, "Fock basis needs N >= 1 and R >= 1");
    let mut occupations = Vec::new();
    enumerate_compositions(n_bosons, n_orbitals, &mut Vec::new(), &mut occupations);
    FockBasis {
        n_bosons,
        n_orbitals,
        occupations,
    }
}

/// Matrix element <bra| b+_p b+_q b_t b_s |ket> by occupation arithmetic
/// (true bosonic ladder algebra, a+|n> = sqrt(n+1) |n+1>).
pub fn quartic_element(bra: &[usize], ket: &[usize], p: usize, q: usize, s: usize, t: usize) -> f64 {
    let mut occ: Vec<i64> = ket.iter().map(|&x| x as i64).collect();
    let mut amp = 1.0f64;
    for &(idx, raise) in &[(s, false), (t, false), (q, true), (p, true)] {
        if raise {
            occ[idx] += 1;
            amp *= (occ[idx] as f64).sqrt();
        } else {
            if occ[idx] == 0 {
                return 0.0;
            }
            amp *= (occ[idx] as f64).sqrt();
            occ[idx] -= 1;
        }
    }
    let reaches_bra = bra.iter().zip(occ.iter()).all(|(&b, &o)| b as i64 == o);
    if reaches_bra {
        amp
    } else {
        0.0
    }
}

/// Matrix element <bra| b+_p b_s |ket> by occupation arithmetic.
pub fn hop_element(bra: &[usize], ket: &[usize], p: usize, s: usize) -> f64 {
    let mut occ: Vec<i64> = ket.iter().map(|&x| x as i64).collect();
    if occ[s] == 0 {
        return 0.0;
    }
    let mut amp = (occ[s] as f64).sqrt();
    occ[s] -= 1;
    occ[p] += 1;
    amp *= (occ[p] as f64).sqrt();
    let reaches_bra = bra.iter().zip(occ.iter()).all(|(&b, &o)| b as i64 == o);
    if reaches_bra {
        amp
    } else {
        0.0
    }
}

/// Eigen-decomposition of a reference Hamiltonian: eigenvalues ascending,
/// eigenvectors as columns over the accompanying Fock basis.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<f64>,
    pub basis: FockBasis,
    pub model: ModelSpec,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Assemble the second-quantized Hamiltonian sum_pqst K[p,q,s,t] b+_p b+_q
/// b_t b_s in a Fock basis.
fn assemble_fock_matrix(elements: &Array4<f64>, basis: &FockBasis) -> Array2<f64> {
    let dim = basis.dimension();
    let r = basis.n_orbitals;
    let occ = basis.occupations();
    let mut h = Array2::<f64>::zeros((dim, dim));
    for a in 0..dim {
        for b in 0..dim {
            let mut total = 0.0;
            for p in 0..r {
                for q in 0..r {
                    for s in 0..r {
                        for t in 0..r {
                            let k = elements[[p, q, s, t]];
                            if k == 0.0 {
                                continue;
                            }
                            total += k * quartic_element(&occ[a], &occ[b], p, q, s, t);
                        }
                    }
                }
            }
            h[[a, b]] = total;
        }
    }
    h
}

/// Full configuration interaction: exact diagonalization of the reduced
/// Hamiltonian in the complete truncated Fock space.
pub fn full_ci(k: &ReducedHamiltonian) -> SpectrumResult {
    let basis = fock_basis(k.model.n_bosons, k.model.n_orbitals);
    let h = assemble_fock_matrix(&k.elements, &basis);
    let (eigenvalues, eigenvectors) = eigh_symmetric(&h);
    SpectrumResult {
        eigenvalues,
        eigenvectors,
        basis,
        model: k.model,
    }
}

/// Natural-orbital occupation fractions of one eigenstate: eigenvalues of
/// its 1-RDM divided by N, sorted descending.  They sum to 1.
pub fn natural_occupations(result: &SpectrumResult, which: usize) -> Result<Vec<f64>, ReferenceError> {
    let dim = result.basis.dimension();
    if which >= dim {
        return Err(ReferenceError::StateIndexOutOfRange { which, dim });
    }
    let r = result.basis.n_orbitals;
    let occ = result.basis.occupations();
    let state = result.eigenvectors.column(which);
    let mut one_rdm = Array2::<f64>::zeros((r, r));
    for p in 0..r {
        for s in 0..r {
            let mut total = 0.0;
            for a in 0..dim {
                if state[a] == 0.0 {
                    continue;
                }
                for b in 0..dim {
                    if state[b] == 0.0 {
                        continue;
                    }
                    total += state[a] * state[b] * hop_element(&occ[a], &occ[b], p, s);
                }
            }
            one_rdm[[p, s]] = total;
        }
    }
    let (mut evals, _) = eigh_symmetric(&one_rdm);
    let n = result.basis.n_bosons as f64;
    for v in &mut evals {
        *v /= n;
    }
    evals.reverse();
    Ok(evals)
}

/// Maximum register width for the dense encoded-subspace diagonalization.
pub const SUBSPACE_QUBIT_CAP: usize = 12;

/// Cross-validation oracle: project the encoded qubit Hamiltonian onto the
/// exchange-symmetric one-hot subspace and diagonalize the compression.
/// With calibration on, the block is scaled by N^2/2 and its spectrum
/// matches `full_ci`.
pub fn encoded_subspace_diag(
    k: &ReducedHamiltonian,
    layout: &QubitLayout,
    calibrated: bool,
) -> Result<SpectrumResult, ReferenceError> {
    let n_qubits = layout.n_qubits();
    if n_qubits > SUBSPACE_QUBIT_CAP {
        return Err(ReferenceError::CapacityExceeded {
            n_qubits,
            max: SUBSPACE_QUBIT_CAP,
        });
    }
    let h = qubit_hamiltonian(k, layout)?;
    let basis = fock_basis(layout.n_bosons, layout.n_orbitals);
    let dim = basis.dimension();

    // One orthonormal symmetrized one-hot vector per occupation pattern:
    // assign bosons to orbitals in occupation order, then project onto the
    // exchange-symmetric subspace.
    let mut vectors = Vec::with_capacity(dim);
    for occ in basis.occupations() {
        let mut index = 0usize;
        let mut boson = 1usize;
        for (orbital_zero_based, &count) in occ.iter().enumerate() {
            for _ in 0..count {
                index |= 1 << layout.qubit_index(boson, orbital_zero_based + 1)?;
                boson += 1;
            }
        }
        let mut raw = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        raw[index] = Complex64::new(1.0, 0.0);
        let projected = symmetrize_over_bosons(layout, &raw)?;
        vectors.push(StateVector::from_amplitudes(projected)?);
    }

    let factor = if calibrated {
        encoding::calibration_factor(layout.n_bosons)
    } else {
        1.0
    };
    let mut block = Array2::<f64>::zeros((dim, dim));
    for (b, ket) in vectors.iter().enumerate() {
        let applied = apply_pauli_sum(ket, &h)?;
        for (a, bra) in vectors.iter().enumerate() {
            let element = bra.inner(&applied) * factor;
            debug_assert!(element.im.abs() <= 1e-10);
            block[[a, b]] = element.re;
        }
    }

    let (eigenvalues, eigenvectors) = eigh_symmetric(&block);
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        basis,
        model: k.model,
    })
}

/// Spectra of the two-particle problem h(1) + h(2) + u(1,2) in an explicit
/// basis scale, split into boson-exchange sectors.  The symmetric sector
/// reproduces `full_ci` for N = 2; the antisymmetric sector is the spectrum
/// of the exchange-odd pair states.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSpectrum {
    pub symmetric: Vec<f64>,
    pub antisymmetric: Vec<f64>,
}

pub fn pair_spectrum(gamma: f64, z: f64, r: usize) -> Result<PairSpectrum, ReferenceError> {
    if gamma <= 0.0 || !gamma.is_finite() {
        return Err(ReferenceError::InvalidGamma { gamma });
    }
    assert!(r >= 1, "at least one orbital");
    let h = one_body_matrix(gamma, z, r);
    let u = two_body_tensor(gamma, r);

    // Dense pair Hamiltonian on |r1, r2>, index r1 * R + r2.
    let dim = r * r;
    let mut pair = Array2::<f64>::zeros((dim, dim));
    for r1 in 0..r {
        for r2 in 0..r {
            let a = r1 * r + r2;
            for s1 in 0..r {
                for s2 in 0..r {
                    let b = s1 * r + s2;
                    let mut val = u[[r1, r2, s1, s2]];
                    if r2 == s2 {
                        val += h[[r1, s1]];
                    }
                    if r1 == s1 {
                        val += h[[r2, s2]];
                    }
                    pair[[a, b]] = val;
                }
            }
        }
    }

    let compress = |vectors: &[Vec<f64>]| -> Vec<f64> {
        if vectors.is_empty() {
            return vec![];
        }
        let m = vectors.len();
        let mut block = Array2::<f64>::zeros((m, m));
        for (bi, vb) in vectors.iter().enumerate() {
            let mut applied = vec![0.0; dim];
            for (row, slot) in applied.iter_mut().enumerate() {
                for col in 0..dim {
                    *slot += pair[[row, col]] * vb[col];
                }
            }
            for (ai, va) in vectors.iter().enumerate() {
                block[[ai, bi]] = va.iter().zip(applied.iter()).map(|(x, y)| x * y).sum();
            }
        }
        eigh_symmetric(&block).0
    };

    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let mut symmetric_basis = Vec::new();
    let mut antisymmetric_basis = Vec::new();
    for r1 in 0..r {
        for r2 in r1..r {
            let mut v = vec![0.0; dim];
            if r1 == r2 {
                v[r1 * r + r2] = 1.0;
            } else {
                v[r1 * r + r2] = inv_sqrt2;
                v[r2 * r + r1] = inv_sqrt2;
            }
            symmetric_basis.push(v);
            if r1 < r2 {
                let mut w = vec![0.0; dim];
                w[r1 * r + r2] = inv_sqrt2;
                w[r2 * r + r1] = -inv_sqrt2;
                antisymmetric_basis.push(w);
            }
        }
    }

    Ok(PairSpectrum {
        symmetric: compress(&symmetric_basis),
        antisymmetric: compress(&antisymmetric_basis),
    })
}

/// One row of a coupling-strength scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub n_bosons: usize,
    pub z: f64,
    pub n_over_z: f64,
    pub e_mean_field: f64,
    pub e_fci: f64,
    pub e_exact: f64,
    /// Ground-state natural occupation fractions, descending.
    pub occupations: Vec<f64>,
}

/// Sweep the correlation strength N/Z over `grid` for each boson count in
/// `n_list`, computing mean-field, full-CI, and exact energies plus the
/// ground state's natural occupations.  Rows are ordered by (N, grid point);
/// points are evaluated in parallel.
pub fn scan(n_list: &[usize], grid: &[f64], n_orbitals: usize) -> Result<Vec<ScanRow>, ReferenceError> {
    for &x in grid {
        if !(x > 0.0 && x < 1.0) {
            return Err(ReferenceError::GridOutOfRange { value: x });
        }
    }
    let points: Vec<(usize, f64)> = n_list
        .iter()
        .flat_map(|&n| grid.iter().map(move |&x| (n, x)))
        .collect();
    points
        .into_par_iter()
        .map(|(n, x)| {
            let z = n as f64 / x;
            let spec = ModelSpec::new(n, z, n_orbitals)?;
            let k = reduced_hamiltonian(&spec);
            let ci = full_ci(&k);
            let occupations = natural_occupations(&ci, 0)?;
            Ok(ScanRow {
                n_bosons: n,
                z,
                n_over_z: x,
                e_mean_field: mean_field_energy(&spec),
                e_fci: ci.ground_energy(),
                e_exact: exact_energy(&spec),
                occupations,
            })
        })
        .collect()
}

/// Serialize scan rows to CSV with the stable column set
/// `N,Z,N_over_Z,E_MF,E_FCI,E_exact,occ_0..occ_{R-1}`.
pub fn scan_csv(rows: &[ScanRow], n_orbitals: usize) -> String {
    let mut out = String::from("N,Z,N_over_Z,E_MF,E_FCI,E_exact");
    for r in 0..n_orbitals {
        out.push_str(&format!(",occ_{r}"));
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            row.n_bosons, row.z, row.n_over_z, row.e_mean_field, row.e_fci, row.e_exact
        ));
        for occ in &row.occupations {
            out.push_str(&format!(",{occ}"));
        }
        out.push('\n');
    }
    out
}
