//! Closed-form physics of `N` attractively coupled harmonic oscillators.
//!
//! The system is `H = Σ_i (-∂²/∂x_i² + Z x_i²) - Σ_{i<j} (x_i - x_j)²` in units
//! where the kinetic term is exactly `-∂²/∂x²`. This crate provides the exact
//! and mean-field ground-state energies, the normal-mode force constants, the
//! Gaussian one-particle density kernel and its natural-orbital length scale γ,
//! the Hermite-basis integral matrices, and the rank-4 reduced Hamiltonian `²K`
//! that drives everything downstream (encoding, solver, references).

use ndarray::{Array2, Array4};
use thiserror::Error;

/// Errors for invalid model parameters.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    /// The force constant must exceed the boson count or the relative modes
    /// are unbound (√(Z−N) imaginary).
    #[error("unbound system: Z must exceed N (got N = {n_bosons}, Z = {force_constant})")]
    Unbound { n_bosons: usize, force_constant: f64 },
    /// The reduced two-particle operator divides by N−1.
    #[error("at least two bosons required (got N = {0})")]
    TooFewBosons(usize),
    /// The orbital basis cannot be empty.
    #[error("at least one orbital required")]
    NoOrbitals,
}

/// Validated problem definition: `N` bosons, force constant `Z`, `R` orbitals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    /// Number of bosons N (≥ 2).
    pub n_bosons: usize,
    /// Dimensionless force constant Z (> N).
    pub force_constant: f64,
    /// Basis truncation rank R (≥ 1).
    pub n_orbitals: usize,
}

impl ModelSpec {
    /// Builds a spec, enforcing N ≥ 2, Z > N, R ≥ 1.
    pub fn new(n_bosons: usize, force_constant: f64, n_orbitals: usize) -> Result<Self, ModelError> {
        if n_bosons < 2 {
            return Err(ModelError::TooFewBosons(n_bosons));
        }
        if force_constant <= n_bosons as f64 {
            return Err(ModelError::Unbound { n_bosons, force_constant });
        }
        if n_orbitals < 1 {
            return Err(ModelError::NoOrbitals);
        }
        Ok(Self { n_bosons, force_constant, n_orbitals })
    }

    /// Correlation-strength parameter N/Z.
    pub fn correlation_ratio(&self) -> f64 {
        self.n_bosons as f64 / self.force_constant
    }
}

/// Gaussian kernel of the exact one-particle density matrix,
/// `ρ(x, x′) ∝ exp(−(α/2)(x² + x′²) + β x x′)`, and the natural-orbital
/// length scale `γ = (α² − β²)^(1/4)` of its Hermite-function eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianRdm {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Exact ground-state energy `√Z + (N−1)·√(Z−N)`.
pub fn exact_energy(spec: &ModelSpec) -> f64 {
    let n = spec.n_bosons as f64;
    let z = spec.force_constant;
    z.sqrt() + (n - 1.0) * (z - n).sqrt()
}

/// Mean-field (product-state) energy `N·√(Z−N+1)`.
pub fn mean_field_energy(spec: &ModelSpec) -> f64 {
    let n = spec.n_bosons as f64;
    let z = spec.force_constant;
    n * (z - n + 1.0).sqrt()
}

/// Force constants of the decoupled normal modes: `[Z, Z−N, …, Z−N]`
/// (one center-of-mass mode, N−1 degenerate relative modes).
/// The square roots of these sum to `exact_energy`.
pub fn normal_mode_constants(spec: &ModelSpec) -> Vec<f64> {
    let z = spec.force_constant;
    let n = spec.n_bosons;
    let mut constants = vec![z - n as f64; n];
    constants[0] = z;
    constants
}

/// Gaussian 1-RDM kernel for mode frequencies ω₁ (center of mass) and ω₂
/// (relative), marginalizing the N-coordinate Gaussian ground state
/// `exp(−½ xᵀMx)` with `M = ω₂·I + ((ω₁−ω₂)/N)·J` over N−1 coordinates.
///
/// The all-ones structure of the marginalized block makes the Schur complement closed-form:
/// `1ᵀ(aI + bJ)⁻¹1 = n/(a + n·b)`, so
/// `κ = c²(N−1)/(ω₂ + (N−1)c)` with `c = (ω₁−ω₂)/N`, `α = m₁₁ − κ/2`, `β = κ/2`.
pub fn gaussian_rdm_from_frequencies(omega1: f64, omega2: f64, n_bosons: usize) -> GaussianRdm {
    let n = n_bosons as f64;
    let c = (omega1 - omega2) / n;
    let m11 = omega2 + c;
    let kappa = if n_bosons >= 2 {
        c * c * (n - 1.0) / (omega2 + (n - 1.0) * c)
    } else {
        0.0
    };
    let alpha = m11 - 0.5 * kappa;
    let beta = 0.5 * kappa;
    let gamma = (alpha * alpha - beta * beta).powf(0.25);
    GaussianRdm { alpha, beta, gamma }
}

/// Natural-orbital scaling of the exact ground state: diagonalizes the exact
/// 1-RDM analytically via its Gaussian kernel. For N = 2 the result reduces to
/// `γ = (Z(Z−2))^(1/8)`.
pub fn gamma_scaling(spec: &ModelSpec) -> GaussianRdm {
    let omega1 = spec.force_constant.sqrt();
    let omega2 = (spec.force_constant - spec.n_bosons as f64).sqrt();
    gaussian_rdm_from_frequencies(omega1, omega2, spec.n_bosons)
}

/// Position operator in the γ-scaled Hermite basis:
/// `⟨m|x|n⟩ = (1/(γ√2))(√(n+1)·δ_{m,n+1} + √n·δ_{m,n−1})`.
pub fn position_matrix(gamma: f64, r: usize) -> Array2<f64> {
    let mut x = Array2::zeros((r, r));
    for n in 0..r {
        if n + 1 < r {
            let v = ((n + 1) as f64).sqrt() / (gamma * std::f64::consts::SQRT_2);
            x[(n + 1, n)] = v;
            x[(n, n + 1)] = v;
        }
    }
    x
}

/// Exact matrix elements of x² in the γ-scaled Hermite basis:
/// diagonal `(2n+1)/(2γ²)`, second off-diagonal `√((n+1)(n+2))/(2γ²)`.
/// (Equivalently: square the position matrix on an enlarged basis, then
/// truncate — truncated-product elements would be wrong in the last rows.)
pub fn position_squared_matrix(gamma: f64, r: usize) -> Array2<f64> {
    let g2 = gamma * gamma;
    let mut x2 = Array2::zeros((r, r));
    for n in 0..r {
        x2[(n, n)] = (2 * n + 1) as f64 / (2.0 * g2);
        if n + 2 < r {
            let v = (((n + 1) * (n + 2)) as f64).sqrt() / (2.0 * g2);
            x2[(n + 2, n)] = v;
            x2[(n, n + 2)] = v;
        }
    }
    x2
}

/// One-body operator `h = −∂²/∂x² + Z x²` in the γ-scaled Hermite basis:
/// `h = γ²·p̂² + (Z/γ²)·û²` in dimensionless coordinates `u = γx`, where both
/// `p̂²` and `û²` have diagonal `(2n+1)/2` and the `n±2` blocks carry
/// `∓√((n+1)(n+2))/2` and `+√((n+1)(n+2))/2` respectively.
pub fn one_body_matrix(gamma: f64, z: f64, r: usize) -> Array2<f64> {
    let g2 = gamma * gamma;
    let mut h = Array2::zeros((r, r));
    for n in 0..r {
        let diag = (2 * n + 1) as f64 / 2.0;
        h[(n, n)] = g2 * diag + (z / g2) * diag;
        if n + 2 < r {
            let off = (((n + 1) * (n + 2)) as f64).sqrt() / 2.0;
            let v = -g2 * off + (z / g2) * off;
            h[(n + 2, n)] = v;
            h[(n, n + 2)] = v;
        }
    }
    h
}

/// Two-body interaction `u(i,j) = −(x_i − x_j)²` as a rank-4 tensor:
/// `⟨pq|u|st⟩ = −⟨p|x²|s⟩δ_{qt} + 2⟨p|x|s⟩⟨q|x|t⟩ − δ_{ps}⟨q|x²|t⟩`.
pub fn two_body_tensor(gamma: f64, r: usize) -> Array4<f64> {
    let x = position_matrix(gamma, r);
    let x2 = position_squared_matrix(gamma, r);
    let mut u = Array4::zeros((r, r, r, r));
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    let mut v = 2.0 * x[(p, s)] * x[(q, t)];
                    if q == t {
                        v -= x2[(p, s)];
                    }
                    if p == s {
                        v -= x2[(q, t)];
                    }
                    u[(p, q, s, t)] = v;
                }
            }
        }
    }
    u
}

/// Rank-4 reduced Hamiltonian `²K` with the model it was built from.
/// Real-symmetric under `(pq,st) ↔ (st,pq)` and boson-symmetric under
/// `(pq,st) ↔ (qp,ts)`; the total energy is `E = Σ_{pqst} ²K^{pq}_{st} ²D^{pq}_{st}`.
#[derive(Debug, Clone)]
pub struct ReducedHamiltonian {
    pub elements: Array4<f64>,
    pub model: ModelSpec,
}

/// Builds `²K^{pq}_{st} = ½[(1/(N−1))(δ^p_s⟨q|h|t⟩ + δ^q_t⟨p|h|s⟩) + ⟨pq|u|st⟩]`
/// at the natural-orbital scale γ. The overall ½ converts the unordered pair
/// sum `Σ_{i<j}` into the ordered-index trace `E = Σ_{pqst} ²K·²D`, where every
/// index pair appears twice.
pub fn reduced_hamiltonian(spec: &ModelSpec) -> ReducedHamiltonian {
    let gamma = gamma_scaling(spec).gamma;
    let r = spec.n_orbitals;
    let h = one_body_matrix(gamma, spec.force_constant, r);
    let u = two_body_tensor(gamma, r);
    let n1 = (spec.n_bosons - 1) as f64;
    let mut k = Array4::zeros((r, r, r, r));
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    let mut v = u[(p, q, s, t)];
                    if p == s {
                        v += h[(q, t)] / n1;
                    }
                    if q == t {
                        v += h[(p, s)] / n1;
                    }
                    k[(p, q, s, t)] = 0.5 * v;
                }
            }
        }
    }
    ReducedHamiltonian { elements: k, model: *spec }
}
