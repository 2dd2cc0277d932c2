//! Dense statevector simulator: Pauli-word application, exact and
//! shot-sampled expectation values, first-order Trotter evolution under
//! anti-Hermitian generators, and a seeded depolarizing-noise channel.
//!
//! Amplitudes are stored densely, indexed by the basis integer whose bit `k`
//! is qubit `k`.  Every operation is deterministic: sampling derives one
//! PRNG stream per Pauli word from the caller's seed, so identical inputs
//! give bit-identical outputs.

use encoding::{Pauli, PauliSum, PauliTerm};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use statrs::distribution::{Binomial, DiscreteCDF};
use thiserror::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Errors raised by simulator operations.
#[derive(Debug, Error, PartialEq)]
pub enum SimulatorError {
    /// Word length and state qubit count disagree.
    #[error("word acts on {word} qubits but the state has {state}")]
    WordLengthMismatch { word: usize, state: usize },
    /// Operator and state qubit counts disagree.
    #[error("operator acts on {operator} qubits but the state has {state}")]
    OperatorLengthMismatch { operator: usize, state: usize },
    /// An amplitude vector's length is not a power of two.
    #[error("amplitude vector of length {len} is not a full register")]
    NotARegister { len: usize },
    /// A state vector must have nonzero norm.
    #[error("state has zero norm")]
    ZeroNorm,
    /// A bitstring label could not be parsed.
    #[error("invalid basis label {label:?}: {reason}")]
    InvalidBasisLabel { label: String, reason: String },
    /// Sampled expectation requires a Hermitian operator.
    #[error("operator is not Hermitian: largest imaginary coefficient {violation:.3e}")]
    NotHermitian { violation: f64 },
    /// Evolution requires an anti-Hermitian generator.
    #[error("generator is not anti-Hermitian: largest real coefficient {violation:.3e}")]
    NotAntiHermitian { violation: f64 },
    /// Shot counts must be positive.
    #[error("shot count must be positive")]
    ZeroShots,
    /// Depolarizing strength must lie in [0, 1].
    #[error("depolarizing strength {strength} outside [0, 1]")]
    StrengthOutOfRange { strength: f64 },
}

/// Shot-sampling configuration: number of single-observable measurements per
/// Pauli word and the seed that fixes the whole noise realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotConfig {
    pub shots: u64,
    pub seed: u64,
}

impl ShotConfig {
    /// Default shot budget used by the solver pipeline when sampling is on.
    pub const DEFAULT_SHOTS: u64 = 8192;

    pub fn new(shots: u64, seed: u64) -> Result<Self, SimulatorError> {
        if shots == 0 {
            return Err(SimulatorError::ZeroShots);
        }
        Ok(Self { shots, seed })
    }
}

/// Dense state vector over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
}

impl StateVector {
    /// Computational basis state |index> on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1usize << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes, n_qubits }
    }

    /// Basis state from a little-endian bitstring label: the leftmost
    /// character is the highest qubit, so `"0101"` sets qubits 0 and 2.
    pub fn from_bitstring(label: &str) -> Result<Self, SimulatorError> {
        let n = label.len();
        if n == 0 {
            return Err(SimulatorError::InvalidBasisLabel {
                label: label.to_string(),
                reason: "empty label".to_string(),
            });
        }
        let mut index = 0usize;
        for (pos, ch) in label.chars().enumerate() {
            let bit = match ch {
                '0' => 0usize,
                '1' => 1usize,
                other => {
                    return Err(SimulatorError::InvalidBasisLabel {
                        label: label.to_string(),
                        reason: format!("character {other:?} is not 0 or 1"),
                    })
                }
            };
            index |= bit << (n - 1 - pos);
        }
        Ok(Self::basis(n, index))
    }

    /// Wrap and normalize an amplitude vector (length must be a power of
    /// two, norm must be nonzero).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimulatorError> {
        let len = amplitudes.len();
        if len == 0 || len & (len - 1) != 0 {
            return Err(SimulatorError::NotARegister { len });
        }
        let n_qubits = len.trailing_zeros() as usize;
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-14 {
            return Err(SimulatorError::ZeroNorm);
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(Self { amplitudes, n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Little-endian binary dump: index order, each amplitude as two
    /// consecutive little-endian float64 values (re, im).
    pub fn dump_amplitudes(&self) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(self.amplitudes.len() * 16);
        for c in &self.amplitudes {
            bytes.extend_from_slice(&c.re.to_le_bytes());
            bytes.extend_from_slice(&c.im.to_le_bytes());
        }
        bytes
    }
}

/// Destination index and phase of one Pauli word acting on basis index `i`:
/// `P|i> = phase * |i ^ flip>`.  X and Y flip the qubit; Y and Z pick up
/// phases (i^{#Y} overall, −1 per set bit under the Z-or-Y mask).
#[inline]
fn word_masks(word: &[Pauli]) -> (usize, usize, u32) {
    let mut flip = 0usize; // X | Y
    let mut phase_mask = 0usize; // Z | Y
    let mut n_y = 0u32;
    for (k, &p) in word.iter().enumerate() {
        match p {
            Pauli::I => {}
            Pauli::X => flip |= 1 << k,
            Pauli::Y => {
                flip |= 1 << k;
                phase_mask |= 1 << k;
                n_y += 1;
            }
            Pauli::Z => phase_mask |= 1 << k,
        }
    }
    (flip, phase_mask, n_y)
}

#[inline]
fn i_power(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Write `coefficient * P |state>` into `out` (accumulating).
fn accumulate_word(
    out: &mut [Complex64],
    state: &[Complex64],
    word: &[Pauli],
    coefficient: Complex64,
) {
    let (flip, phase_mask, n_y) = word_masks(word);
    let base = coefficient * i_power(n_y);
    for (i, &amp) in state.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        let sign = if (i & phase_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        out[i ^ flip] += base * sign * amp;
    }
}

/// Apply one weighted Pauli word.  The result is not normalized: it is
/// scaled by the term's coefficient.
pub fn apply_pauli_term(state: &StateVector, term: &PauliTerm) -> Result<StateVector, SimulatorError> {
    if term.word.len() != state.n_qubits {
        return Err(SimulatorError::WordLengthMismatch {
            word: term.word.len(),
            state: state.n_qubits,
        });
    }
    let mut out = vec![ZERO; state.amplitudes.len()];
    accumulate_word(&mut out, &state.amplitudes, &term.word, term.coefficient);
    Ok(StateVector {
        amplitudes: out,
        n_qubits: state.n_qubits,
    })
}

/// Apply a full PauliSum as a linear map (result not normalized).
pub fn apply_pauli_sum(state: &StateVector, op: &PauliSum) -> Result<StateVector, SimulatorError> {
    if op.n_qubits() != state.n_qubits {
        return Err(SimulatorError::OperatorLengthMismatch {
            operator: op.n_qubits(),
            state: state.n_qubits,
        });
    }
    let mut out = vec![ZERO; state.amplitudes.len()];
    for term in op.terms() {
        accumulate_word(&mut out, &state.amplitudes, &term.word, term.coefficient);
    }
    Ok(StateVector {
        amplitudes: out,
        n_qubits: state.n_qubits,
    })
}

/// Exact expectation value <psi| op |psi>.
pub fn expectation_exact(state: &StateVector, op: &PauliSum) -> Result<Complex64, SimulatorError> {
    let applied = apply_pauli_sum(state, op)?;
    Ok(state.inner(&applied))
}

/// Exact expectation of a single Pauli word (always real for unit states).
fn word_expectation(state: &StateVector, word: &[Pauli]) -> f64 {
    let (flip, phase_mask, n_y) = word_masks(word);
    let base = i_power(n_y);
    let mut total = ZERO;
    for (i, &amp) in state.amplitudes.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        let sign = if (i & phase_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        total += state.amplitudes[i ^ flip].conj() * base * sign * amp;
    }
    total.re
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv1a(bytes: impl Iterator<Item = u8>) -> u64 {
    let mut hash = FNV_OFFSET;
    for b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// One PRNG stream per (seed, context tag, Pauli word).  Keying by the word
/// itself (not its position) means the same observable re-measured on a
/// later state reuses the same quantile stream — common random numbers
/// across solver iterations, which keeps sampled trajectories smooth.
fn word_stream(seed: u64, tag: &str, word: &[Pauli]) -> ChaCha12Rng {
    let word_hash = fnv1a(word.iter().map(|p| p.letter() as u8));
    let tag_hash = fnv1a(tag.bytes());
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&word_hash.to_le_bytes());
    key[16..24].copy_from_slice(&tag_hash.to_le_bytes());
    let mixed = word_hash ^ tag_hash.rotate_left(32) ^ 0x9e37_79b9_7f4a_7c15;
    key[24..32].copy_from_slice(&mixed.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}

/// Shot-sampled estimate of one word's expectation: draw a binomial count of
/// +1 outcomes at the exact Born probability through the stream's frozen
/// quantile, and return the sample mean.
fn sampled_word_mean(exact: f64, cfg: &ShotConfig, rng: &mut ChaCha12Rng) -> f64 {
    let clamped = exact.clamp(-1.0, 1.0);
    let p_plus = 0.5 * (1.0 + clamped);
    let u: f64 = rng.gen();
    if p_plus <= 0.0 {
        return -1.0;
    }
    if p_plus >= 1.0 {
        return 1.0;
    }
    let binomial = Binomial::new(p_plus, cfg.shots).expect("probability in (0,1)");
    let successes = binomial.inverse_cdf(u) as f64;
    2.0 * successes / cfg.shots as f64 - 1.0
}

/// Shot-sampled expectation of a Hermitian operator, tagged so that distinct
/// observables draw from distinct streams.
pub fn expectation_sampled_tagged(
    state: &StateVector,
    op: &PauliSum,
    cfg: &ShotConfig,
    tag: &str,
) -> Result<f64, SimulatorError> {
    if op.n_qubits() != state.n_qubits {
        return Err(SimulatorError::OperatorLengthMismatch {
            operator: op.n_qubits(),
            state: state.n_qubits,
        });
    }
    let violation = op.hermiticity_violation();
    if violation > 1e-10 {
        return Err(SimulatorError::NotHermitian { violation });
    }
    let mut total = 0.0f64;
    for term in op.terms() {
        let c = term.coefficient.re;
        if term.weight() == 0 {
            // The identity word has a deterministic +1 outcome.
            total += c;
            continue;
        }
        let exact = word_expectation(state, &term.word);
        let mut rng = word_stream(cfg.seed, tag, &term.word);
        total += c * sampled_word_mean(exact, cfg, &mut rng);
    }
    Ok(total)
}

/// Shot-sampled expectation of a Hermitian operator: per-word binomial
/// sampling at the exact Born probabilities, deterministic per seed.
pub fn expectation_sampled(
    state: &StateVector,
    op: &PauliSum,
    cfg: &ShotConfig,
) -> Result<f64, SimulatorError> {
    expectation_sampled_tagged(state, op, cfg, "")
}

/// First-order Trotter step `exp(epsilon * A)` for an anti-Hermitian
/// generator: terms are visited in canonical word order and each
/// `i*theta*P` factor is applied as the exact rotation
/// `cos(eps*theta) + i*sin(eps*theta)*P`.
pub fn evolve(state: &StateVector, generator: &PauliSum, epsilon: f64) -> Result<StateVector, SimulatorError> {
    if generator.n_qubits() != state.n_qubits {
        return Err(SimulatorError::OperatorLengthMismatch {
            operator: generator.n_qubits(),
            state: state.n_qubits,
        });
    }
    let violation = generator.anti_hermiticity_violation();
    if violation > 1e-10 {
        return Err(SimulatorError::NotAntiHermitian { violation });
    }
    let mut amps = state.amplitudes.clone();
    for term in generator.terms() {
        let theta = term.coefficient.im;
        let angle = epsilon * theta;
        if angle == 0.0 {
            continue;
        }
        if term.weight() == 0 {
            // exp(i*angle*Identity) is a global phase.
            let phase = Complex64::new(angle.cos(), angle.sin());
            for a in &mut amps {
                *a *= phase;
            }
            continue;
        }
        let (cos, sin) = (angle.cos(), angle.sin());
        let mut rotated = vec![ZERO; amps.len()];
        accumulate_word(&mut rotated, &amps, &term.word, Complex64::new(0.0, sin));
        for (a, r) in amps.iter_mut().zip(rotated.into_iter()) {
            *a = *a * cos + r;
        }
    }
    Ok(StateVector {
        amplitudes: amps,
        n_qubits: state.n_qubits,
    })
}

/// Depolarizing trajectory noise: independently for each qubit, with
/// probability `strength`, apply a Pauli kick drawn uniformly from
/// {I, X, Y, Z}.  At strength 1 every qubit is hit by a uniform kick, which
/// averages single-qubit marginals to the maximally mixed state.
pub fn depolarize(state: &StateVector, strength: f64, seed: u64) -> Result<StateVector, SimulatorError> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(SimulatorError::StrengthOutOfRange { strength });
    }
    let mut out = state.clone();
    if strength == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for qubit in 0..state.n_qubits {
        let hit: f64 = rng.gen();
        if hit >= strength {
            continue;
        }
        let letter = match rng.gen_range(0..4u8) {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        };
        if letter == Pauli::I {
            continue;
        }
        let mut word = vec![Pauli::I; state.n_qubits];
        word[qubit] = letter;
        let mut kicked = vec![ZERO; out.amplitudes.len()];
        accumulate_word(&mut kicked, &out.amplitudes, &word, Complex64::new(1.0, 0.0));
        out.amplitudes = kicked;
    }
    Ok(out)
}
