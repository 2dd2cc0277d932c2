//! The contracted-eigensolver loop: measure the two-particle reduced density
//! matrix, evaluate the contracted residual, follow the steepest-descent
//! A-operator downhill, and track convergence per iteration.

use std::fmt::Write as _;
use std::time::Instant;

use encoding::{
    a_operator, calibration_factor, excitation_operator, qubit_hamiltonian,
    symmetrize_over_bosons, EncodingError, PauliSum, QubitLayout,
};
use model::{exact_energy, reduced_hamiltonian, ModelSpec, ReducedHamiltonian};
use ndarray::Array4;
use num_complex::Complex64;
use reference::full_ci;
use simulator::{
    apply_pauli_sum, depolarize, evolve, expectation_exact, expectation_sampled_tagged,
    ShotConfig, SimulatorError, StateVector,
};
use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Error)]
pub enum CqeError {
    /// Step sizes must be positive and finite.
    #[error("epsilon must be positive and finite, got {value}")]
    InvalidEpsilon { value: f64 },
    /// Convergence tolerances must be positive.
    #[error("{name} must be positive, got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },
    /// At least one iteration must be allowed.
    #[error("max_iterations must be at least 1")]
    ZeroIterationBudget,
    /// Depolarizing strength is a probability.
    #[error("noise strength must lie in [0, 1], got {value}")]
    NoiseStrengthOutOfRange { value: f64 },
    /// Initial bitstring length must match the register.
    #[error("initial state spans {bits} qubits but the register has {qubits}")]
    InitialStateMismatch { bits: usize, qubits: usize },
    /// Rank-4 tensors must match the layout's orbital count.
    #[error("tensor spans {got} orbitals but the layout has {expected}")]
    OrbitalMismatch { got: usize, expected: usize },
    /// The energy trace must be real.
    #[error("energy has imaginary part {imag:.3e} beyond the 1e-10 consistency bound")]
    EnergyNotReal { imag: f64 },
    /// Encoding failures (invalid indices, non-anti-Hermitian generators).
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    /// Simulator failures (shape mismatches, invalid states).
    #[error(transparent)]
    Simulation(#[from] SimulatorError),
}

/// Two-particle reduced density matrix `D[p, q, s, t] = <b+_p b+_q b_t b_s>`
/// over orbital indices, measured on the encoded register.
#[derive(Debug, Clone)]
pub struct TwoRdm {
    pub elements: Array4<Complex64>,
    /// True when the N^2/2 collective-encoding factor has been applied.
    pub calibrated: bool,
}

impl TwoRdm {
    pub fn n_orbitals(&self) -> usize {
        self.elements.dim().0
    }

    /// Pair-counting trace sum_pq D[p, q, p, q]; equals N(N-1) on calibrated
    /// physical states.
    pub fn trace(&self) -> Complex64 {
        let r = self.n_orbitals();
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..r {
            for q in 0..r {
                total += self.elements[[p, q, p, q]];
            }
        }
        total
    }

    /// Largest deviation from Hermitian pairing, max |D[pqst] - conj(D[stpq])|.
    pub fn hermiticity_violation(&self) -> f64 {
        let r = self.n_orbitals();
        let mut worst = 0.0f64;
        for p in 0..r {
            for q in 0..r {
                for s in 0..r {
                    for t in 0..r {
                        let gap = self.elements[[p, q, s, t]] - self.elements[[s, t, p, q]].conj();
                        worst = worst.max(gap.norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest deviation from boson index symmetry (p <-> q and s <-> t).
    pub fn boson_symmetry_violation(&self) -> f64 {
        let r = self.n_orbitals();
        let mut worst = 0.0f64;
        for p in 0..r {
            for q in 0..r {
                for s in 0..r {
                    for t in 0..r {
                        let v = self.elements[[p, q, s, t]];
                        worst = worst.max((v - self.elements[[q, p, s, t]]).norm());
                        worst = worst.max((v - self.elements[[p, q, t, s]]).norm());
                    }
                }
            }
        }
        worst
    }
}

/// Contracted residual `R[p, q, s, t] = <[Gamma_pqst, H]>`; the zero set of
/// this tensor is the stationary condition of the solver.
#[derive(Debug, Clone)]
pub struct ResidualTensor {
    pub elements: Array4<Complex64>,
}

impl ResidualTensor {
    pub fn n_orbitals(&self) -> usize {
        self.elements.dim().0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.elements.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest deviation from anti-Hermitian pairing,
    /// max |R[pqst] + conj(R[stpq])|.
    pub fn pairing_violation(&self) -> f64 {
        let r = self.n_orbitals();
        let mut worst = 0.0f64;
        for p in 0..r {
            for q in 0..r {
                for s in 0..r {
                    for t in 0..r {
                        let gap = self.elements[[p, q, s, t]] + self.elements[[s, t, p, q]].conj();
                        worst = worst.max(gap.norm());
                    }
                }
            }
        }
        worst
    }
}

/// Solver configuration.  Defaults: step 0.10 with automatic halving on
/// noiseless energy increases, 50-iteration budget, |dE| < 1e-8 or residual
/// norm < 1e-6 stopping, exact expectations, no decoherence, calibration on,
/// raw product start "0101".
#[derive(Debug, Clone)]
pub struct CqeConfig {
    pub epsilon: f64,
    pub max_iterations: usize,
    pub energy_tol: f64,
    pub residual_tol: f64,
    /// None evaluates expectations exactly; Some samples the 2-RDM and the
    /// energy with per-word frozen binomial streams.
    pub shots: Option<ShotConfig>,
    /// Per-qubit depolarizing probability applied after every step.  The
    /// kick stream is seeded from the shot seed when sampling is on.
    pub noise_strength: Option<f64>,
    pub calibration: bool,
    pub initial: String,
    /// Project the initial product state onto the boson-exchange symmetric
    /// sector before iterating (needed to reach excited Fock levels).
    pub symmetrize_initial: bool,
}

impl Default for CqeConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.10,
            max_iterations: 50,
            energy_tol: 1e-8,
            residual_tol: 1e-6,
            shots: None,
            noise_strength: None,
            calibration: true,
            initial: String::from("0101"),
            symmetrize_initial: false,
        }
    }
}

impl CqeConfig {
    pub fn validate(&self) -> Result<(), CqeError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(CqeError::InvalidEpsilon { value: self.epsilon });
        }
        if !(self.energy_tol > 0.0) {
            return Err(CqeError::InvalidTolerance {
                name: "energy_tol",
                value: self.energy_tol,
            });
        }
        if !(self.residual_tol > 0.0) {
            return Err(CqeError::InvalidTolerance {
                name: "residual_tol",
                value: self.residual_tol,
            });
        }
        if self.max_iterations == 0 {
            return Err(CqeError::ZeroIterationBudget);
        }
        if let Some(strength) = self.noise_strength {
            if !(0.0..=1.0).contains(&strength) {
                return Err(CqeError::NoiseStrengthOutOfRange { value: strength });
            }
        }
        Ok(())
    }
}

/// One row of the convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    pub residual_norm: f64,
    pub err_vs_fci: f64,
    pub err_vs_exact: f64,
    pub wall_ms: u64,
}

/// Per-iteration convergence history, indexed contiguously from 0 (the
/// initial state's reading).
#[derive(Debug, Clone, Default)]
pub struct ConvergenceTrace {
    records: Vec<IterationRecord>,
}

impl ConvergenceTrace {
    pub fn push(&mut self, record: IterationRecord) {
        debug_assert_eq!(
            record.iteration,
            self.records.len(),
            "iteration indices must be contiguous from 0"
        );
        self.records.push(record);
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    /// Number of steps taken (records minus the initial reading).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.records.last().map(|r| r.energy)
    }

    /// Serialize with the stable column set
    /// `iter,energy,residual_norm,err_vs_fci,err_vs_exact,wall_ms`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,energy,residual_norm,err_vs_fci,err_vs_exact,wall_ms\n");
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.iteration, r.energy, r.residual_norm, r.err_vs_fci, r.err_vs_exact, r.wall_ms
            )
            .expect("string writes cannot fail");
        }
        out
    }
}

/// One canonical excitation index class: p <= q, s <= t, (p,q) <= (s,t).
/// The full rank-4 tensors are reconstructed from these via the boson index
/// symmetry and the (anti-)Hermitian pairing.
struct GammaBlock {
    p: usize,
    q: usize,
    s: usize,
    t: usize,
    op: PauliSum,
}

/// Cache of the collective excitation operators for one register layout.
pub struct GammaSet {
    layout: QubitLayout,
    blocks: Vec<GammaBlock>,
}

impl GammaSet {
    pub fn new(layout: &QubitLayout) -> Result<Self, CqeError> {
        let r = layout.n_orbitals;
        let mut pairs = Vec::new();
        for p in 0..r {
            for q in p..r {
                pairs.push((p, q));
            }
        }
        let mut blocks = Vec::new();
        for (i, &(p, q)) in pairs.iter().enumerate() {
            for &(s, t) in &pairs[i..] {
                blocks.push(GammaBlock {
                    p,
                    q,
                    s,
                    t,
                    op: excitation_operator(layout, p, q, s, t)?,
                });
            }
        }
        Ok(Self {
            layout: *layout,
            blocks,
        })
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    /// Number of canonical index classes, (M^2 + M)/2 for M = R(R+1)/2.
    pub fn canonical_count(&self) -> usize {
        self.blocks.len()
    }

    fn check_state(&self, state: &StateVector) -> Result<(), CqeError> {
        if state.n_qubits() != self.layout.n_qubits() {
            return Err(CqeError::InitialStateMismatch {
                bits: state.n_qubits(),
                qubits: self.layout.n_qubits(),
            });
        }
        Ok(())
    }

    /// Measure the 2-RDM: canonical elements are evaluated (exactly or shot
    /// sampled per `cfg`) and scattered to their symmetric and conjugate
    /// images, so the Hermiticity and boson-symmetry invariants hold by
    /// construction even under sampling.
    pub fn measure_rdm2(&self, state: &StateVector, cfg: &CqeConfig) -> Result<TwoRdm, CqeError> {
        self.check_state(state)?;
        let r = self.layout.n_orbitals;
        let factor = if cfg.calibration {
            calibration_factor(self.layout.n_bosons)
        } else {
            1.0
        };
        let mut elements = Array4::<Complex64>::zeros((r, r, r, r));
        for block in &self.blocks {
            let tag = format!("rdm:{},{},{},{}", block.p, block.q, block.s, block.t);
            let mut value = observe(state, &block.op, cfg.shots.as_ref(), &tag)?;
            value *= factor;
            if (block.p, block.q) == (block.s, block.t) {
                // Self-adjoint class: the exact value is real; drop sampling
                // round-off so the conjugate image is consistent.
                value = Complex64::new(value.re, 0.0);
            }
            scatter(&mut elements, block, value, value.conj());
        }
        Ok(TwoRdm {
            elements,
            calibrated: cfg.calibration,
        })
    }

    /// Exact contracted residual R[pqst] = <psi| Gamma H - H Gamma |psi>.
    pub fn exact_residual(
        &self,
        state: &StateVector,
        hamiltonian: &PauliSum,
    ) -> Result<ResidualTensor, CqeError> {
        self.check_state(state)?;
        let r = self.layout.n_orbitals;
        let h_psi = apply_pauli_sum(state, hamiltonian)?;
        let mut elements = Array4::<Complex64>::zeros((r, r, r, r));
        for block in &self.blocks {
            let gamma_h_psi = apply_pauli_sum(&h_psi, &block.op)?;
            let gamma_psi = apply_pauli_sum(state, &block.op)?;
            let mut value = state.inner(&gamma_h_psi) - h_psi.inner(&gamma_psi);
            if (block.p, block.q) == (block.s, block.t) {
                // Self-adjoint class: the commutator expectation is purely
                // imaginary.
                value = Complex64::new(0.0, value.im);
            }
            scatter(&mut elements, block, value, -value.conj());
        }
        Ok(ResidualTensor { elements })
    }

    /// Shot-sampled contracted residual: each canonical commutator PauliSum
    /// is sampled word by word through the frozen streams.
    pub fn sampled_residual(
        &self,
        state: &StateVector,
        hamiltonian: &PauliSum,
        shots: &ShotConfig,
    ) -> Result<ResidualTensor, CqeError> {
        self.check_state(state)?;
        let r = self.layout.n_orbitals;
        let mut elements = Array4::<Complex64>::zeros((r, r, r, r));
        for block in &self.blocks {
            let commutator = block.op.commutator(hamiltonian)?;
            let tag = format!("residual:{},{},{},{}", block.p, block.q, block.s, block.t);
            let mut value = observe(state, &commutator, Some(shots), &tag)?;
            if (block.p, block.q) == (block.s, block.t) {
                value = Complex64::new(0.0, value.im);
            }
            scatter(&mut elements, block, value, -value.conj());
        }
        Ok(ResidualTensor { elements })
    }
}

/// Write one canonical value onto all four boson-symmetric index images and
/// the paired value onto their conjugate-transposed images.
fn scatter(
    elements: &mut Array4<Complex64>,
    block: &GammaBlock,
    value: Complex64,
    paired: Complex64,
) {
    let (p, q, s, t) = (block.p, block.q, block.s, block.t);
    for (a, b) in [(p, q), (q, p)] {
        for (c, d) in [(s, t), (t, s)] {
            elements[[a, b, c, d]] = value;
            elements[[c, d, a, b]] = paired;
        }
    }
}

/// Expectation of an arbitrary (not necessarily Hermitian) PauliSum.  Exact
/// when `shots` is None.  When sampling, the real and imaginary coefficient
/// parts are Hermitian sums over the same words and share one frozen stream
/// per word — the two quadratures reuse the same simulated counts, as a
/// physical measurement of those words would.
fn observe(
    state: &StateVector,
    op: &PauliSum,
    shots: Option<&ShotConfig>,
    tag: &str,
) -> Result<Complex64, CqeError> {
    match shots {
        None => Ok(expectation_exact(state, op)?),
        Some(cfg) => {
            let n = op.n_qubits();
            let mut real_part = PauliSum::zero(n);
            let mut imag_part = PauliSum::zero(n);
            for term in op.terms() {
                real_part.add_term(Complex64::new(term.coefficient.re, 0.0), term.word.clone());
                imag_part.add_term(Complex64::new(term.coefficient.im, 0.0), term.word);
            }
            let re = expectation_sampled_tagged(state, &real_part, cfg, tag)?;
            let im = expectation_sampled_tagged(state, &imag_part, cfg, tag)?;
            Ok(Complex64::new(re, im))
        }
    }
}

/// Measure the 2-RDM on a freshly built operator cache.  Prefer
/// [`GammaSet::measure_rdm2`] inside loops.
pub fn measure_rdm2(
    state: &StateVector,
    layout: &QubitLayout,
    cfg: &CqeConfig,
) -> Result<TwoRdm, CqeError> {
    GammaSet::new(layout)?.measure_rdm2(state, cfg)
}

/// Energy functional E = sum_pqst K[pqst] * D[pqst].  The imaginary part
/// must vanish to 1e-10 (it does whenever D satisfies Hermitian pairing).
pub fn energy(rdm: &TwoRdm, k: &ReducedHamiltonian) -> Result<f64, CqeError> {
    let r = k.model.n_orbitals;
    if rdm.n_orbitals() != r {
        return Err(CqeError::OrbitalMismatch {
            got: rdm.n_orbitals(),
            expected: r,
        });
    }
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    total += k.elements[[p, q, s, t]] * rdm.elements[[p, q, s, t]];
                }
            }
        }
    }
    if total.im.abs() > 1e-10 {
        return Err(CqeError::EnergyNotReal { imag: total.im });
    }
    Ok(total.re)
}

/// Contracted residual against the encoded Hamiltonian of `k`, exact or
/// sampled per `cfg`.
pub fn acse_residual(
    state: &StateVector,
    k: &ReducedHamiltonian,
    layout: &QubitLayout,
    cfg: &CqeConfig,
) -> Result<ResidualTensor, CqeError> {
    let gammas = GammaSet::new(layout)?;
    let hamiltonian = qubit_hamiltonian(k, layout)?;
    match cfg.shots.as_ref() {
        None => gammas.exact_residual(state, &hamiltonian),
        Some(shots) => gammas.sampled_residual(state, &hamiltonian, shots),
    }
}

/// Pairing violations above this are repaired by projection in
/// [`next_a_operator`].
pub const PAIRING_REPAIR_THRESHOLD: f64 = 1e-6;

/// Project a rank-4 tensor onto the anti-Hermitian-pairing subspace:
/// A'[pqst] = (A[pqst] - conj(A[stpq])) / 2.  Idempotent.
pub fn pairing_projection(elements: &Array4<Complex64>) -> Array4<Complex64> {
    let r = elements.dim().0;
    let mut out = Array4::<Complex64>::zeros((r, r, r, r));
    for p in 0..r {
        for q in 0..r {
            for s in 0..r {
                for t in 0..r {
                    out[[p, q, s, t]] =
                        (elements[[p, q, s, t]] - elements[[s, t, p, q]].conj()) * 0.5;
                }
            }
        }
    }
    out
}

/// The steepest-descent update direction built from a residual.
#[derive(Debug, Clone)]
pub struct AOperatorTensor {
    pub elements: Array4<Complex64>,
    /// True when the residual violated anti-Hermitian pairing beyond
    /// [`PAIRING_REPAIR_THRESHOLD`] and the violating part was projected out.
    pub projection_applied: bool,
}

/// A = R: following the negative energy gradient, with the step size applied
/// at evolution time.  Noisy residuals are conditioned by projection.
pub fn next_a_operator(residual: &ResidualTensor) -> AOperatorTensor {
    if residual.pairing_violation() > PAIRING_REPAIR_THRESHOLD {
        AOperatorTensor {
            elements: pairing_projection(&residual.elements),
            projection_applied: true,
        }
    } else {
        AOperatorTensor {
            elements: residual.elements.clone(),
            projection_applied: false,
        }
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Residual Frobenius norm fell below `residual_tol`.
    ResidualBelowTolerance,
    /// |dE| between consecutive iterations fell below `energy_tol`.
    EnergyStationary,
    /// `max_iterations` steps were taken without meeting either tolerance.
    IterationBudgetExhausted,
}

/// Everything a finished run produces.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub trace: ConvergenceTrace,
    pub final_rdm: TwoRdm,
    pub final_energy: f64,
    pub final_state: StateVector,
    pub converged: bool,
    pub stop: StopReason,
    /// Step size in effect at the end, after any automatic halving.
    pub final_epsilon: f64,
}

fn derive_noise_seed(base: u64, iteration: u64) -> u64 {
    base ^ iteration.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Iterate `state <- evolve(state, A_n, epsilon)` from the configured product
/// state until the energy is stationary, the residual vanishes, or the
/// budget runs out.
///
/// The update direction is always built from the exact residual — at the
/// pinned shot budgets, sampled residual noise overwhelms the gradient near
/// convergence.  The 2-RDM and the energy trace honor `cfg.shots`; with
/// sampling on, the energy is the trace of the sampled 2-RDM against the
/// reduced Hamiltonian, so repeated runs with one seed are bit-identical.
/// Automatic step halving on an energy increase is active only in fully
/// noiseless runs, where the comparison is meaningful; halved steps persist.
pub fn run(spec: &ModelSpec, cfg: &CqeConfig) -> Result<RunResult, CqeError> {
    cfg.validate()?;
    let layout = QubitLayout::new(spec.n_bosons, spec.n_orbitals);
    let k = reduced_hamiltonian(spec);
    let hamiltonian = qubit_hamiltonian(&k, &layout)?;
    let gammas = GammaSet::new(&layout)?;
    let e_fci = full_ci(&k).ground_energy();
    let e_exact = exact_energy(spec);
    let factor = if cfg.calibration {
        calibration_factor(spec.n_bosons)
    } else {
        1.0
    };

    let raw = StateVector::from_bitstring(&cfg.initial)?;
    if raw.n_qubits() != layout.n_qubits() {
        return Err(CqeError::InitialStateMismatch {
            bits: raw.n_qubits(),
            qubits: layout.n_qubits(),
        });
    }
    let mut state = if cfg.symmetrize_initial {
        StateVector::from_amplitudes(symmetrize_over_bosons(&layout, raw.amplitudes())?)?
    } else {
        raw
    };

    let noiseless = cfg.shots.is_none() && cfg.noise_strength.is_none();
    let noise_seed = cfg.shots.as_ref().map(|s| s.seed).unwrap_or(0);
    let energy_of = |st: &StateVector| -> Result<f64, CqeError> {
        if cfg.shots.is_some() {
            energy(&gammas.measure_rdm2(st, cfg)?, &k)
        } else {
            Ok(factor * expectation_exact(st, &hamiltonian)?.re)
        }
    };

    let mut epsilon = cfg.epsilon;
    let mut trace = ConvergenceTrace::default();
    let mut timer = Instant::now();

    let mut current_energy = energy_of(&state)?;
    let mut residual = gammas.exact_residual(&state, &hamiltonian)?;
    let mut residual_norm = residual.frobenius_norm();
    trace.push(IterationRecord {
        iteration: 0,
        energy: current_energy,
        residual_norm,
        err_vs_fci: (current_energy - e_fci).abs(),
        err_vs_exact: (current_energy - e_exact).abs(),
        wall_ms: timer.elapsed().as_millis() as u64,
    });

    let stop = loop {
        if residual_norm < cfg.residual_tol {
            break StopReason::ResidualBelowTolerance;
        }
        let steps_taken = trace.iterations();
        if steps_taken >= cfg.max_iterations {
            break StopReason::IterationBudgetExhausted;
        }
        timer = Instant::now();

        let direction = next_a_operator(&residual);
        let generator = a_operator(&direction.elements, &layout)?;
        let mut candidate = evolve(&state, &generator, epsilon)?;
        if noiseless {
            loop {
                let candidate_energy = energy_of(&candidate)?;
                if candidate_energy <= current_energy + 1e-15 || epsilon < 1e-6 {
                    break;
                }
                epsilon *= 0.5;
                candidate = evolve(&state, &generator, epsilon)?;
            }
        }
        state = candidate;
        if let Some(strength) = cfg.noise_strength {
            state = depolarize(&state, strength, derive_noise_seed(noise_seed, steps_taken as u64))?;
        }

        let new_energy = energy_of(&state)?;
        residual = gammas.exact_residual(&state, &hamiltonian)?;
        residual_norm = residual.frobenius_norm();
        let delta = (new_energy - current_energy).abs();
        current_energy = new_energy;
        trace.push(IterationRecord {
            iteration: steps_taken + 1,
            energy: new_energy,
            residual_norm,
            err_vs_fci: (new_energy - e_fci).abs(),
            err_vs_exact: (new_energy - e_exact).abs(),
            wall_ms: timer.elapsed().as_millis() as u64,
        });
        if delta < cfg.energy_tol {
            break StopReason::EnergyStationary;
        }
    };

    let final_rdm = gammas.measure_rdm2(&state, cfg)?;
    Ok(RunResult {
        trace,
        final_rdm,
        final_energy: current_energy,
        final_state: state,
        converged: !matches!(stop, StopReason::IterationBudgetExhausted),
        stop,
        final_epsilon: epsilon,
    })
}
