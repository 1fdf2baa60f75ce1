//! Dense statevector simulation.
//!
//! Wire 0 is the most significant bit: basis state `|b0 b1 … b(n-1)⟩` lives at
//! index `Σ b_w · 2^(n-1-w)`, so a two-qubit probability vector reads
//! `[p00, p01, p10, p11]`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::ops::{matrix_of, Gate, Observable, Pauli};

/// Default register-size cap: 2^24 amplitudes is 256 MiB.
pub const DEFAULT_MAX_QUBITS: usize = 24;

const UNITARY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-9;
const IMAG_RESIDUE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` wires, capped at [`DEFAULT_MAX_QUBITS`].
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::zero_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        check_size(n_qubits, max_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    /// Wraps explicit amplitudes; their norm must already be 1 within 1e-9.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits, DEFAULT_MAX_QUBITS)?;
        check_len(n_qubits, amps.len())?;
        let norm = l2_norm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        Ok(Statevector { n_qubits, amps })
    }

    /// Like [`Statevector::from_amplitudes`] but rescales to unit norm first.
    pub fn from_amplitudes_normalized(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits, DEFAULT_MAX_QUBITS)?;
        check_len(n_qubits, amps.len())?;
        let norm = l2_norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate(format!(
                "cannot normalize amplitudes with norm {norm}"
            )));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        inner(&self.amps, &other.amps)
    }

    /// Returns a new state with `unitary` applied to `wires` (one or two).
    pub fn apply_gate(&self, unitary: &CMatrix, wires: &[usize]) -> Result<Statevector> {
        let mut out = self.clone();
        out.apply_gate_mut(unitary, wires)?;
        Ok(out)
    }

    /// In-place variant of [`Statevector::apply_gate`].
    pub fn apply_gate_mut(&mut self, unitary: &CMatrix, wires: &[usize]) -> Result<()> {
        self.check_wires(wires)?;
        if !(1..=2).contains(&wires.len()) {
            return Err(Error::Shape(format!(
                "gates act on 1 or 2 wires, got {}",
                wires.len()
            )));
        }
        if unitary.dim() != 1 << wires.len() {
            return Err(Error::Shape(format!(
                "{0}x{0} matrix on {1} wire(s)",
                unitary.dim(),
                wires.len()
            )));
        }
        if !unitary.is_unitary(UNITARY_TOL) {
            return Err(Error::Validation("matrix is not unitary".into()));
        }
        apply_unchecked(&mut self.amps, self.n_qubits, unitary, wires);
        Ok(())
    }

    /// Applies a catalogue gate in place. Catalogue matrices are unitary by
    /// construction, so only the wires are checked.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        self.check_wires(gate.wires())?;
        apply_unchecked(&mut self.amps, self.n_qubits, &matrix_of(gate), gate.wires());
        Ok(())
    }

    /// Marginal distribution over `wires`, in the order given.
    pub fn probabilities(&self, wires: &[usize]) -> Result<Vec<f64>> {
        if wires.is_empty() {
            return Err(Error::Range("probabilities need at least one wire".into()));
        }
        self.check_wires(wires)?;
        let k = wires.len();
        let mut out = vec![0.0; 1 << k];
        let strides: Vec<usize> = wires.iter().map(|&w| self.stride(w)).collect();
        for (i, a) in self.amps.iter().enumerate() {
            let local = strides
                .iter()
                .fold(0usize, |acc, &s| (acc << 1) | usize::from(i & s != 0));
            out[local] += a.norm_sqr();
        }
        Ok(out)
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        let applied = self.apply_observable(obs)?;
        let value = inner(&self.amps, &applied);
        if value.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::Internal(format!(
                "expectation has imaginary part {}",
                value.im
            )));
        }
        Ok(value.re)
    }

    /// `O|ψ⟩` as a raw (unnormalised) amplitude vector.
    pub fn apply_observable(&self, obs: &Observable) -> Result<Vec<Complex64>> {
        obs.validate()?;
        self.check_wires(&obs.wires())?;
        match obs {
            Observable::Hermitian { matrix, wires } => {
                Ok(apply_dense(&self.amps, self.n_qubits, matrix, wires))
            }
            _ => {
                let factors = obs.pauli_factors().expect("Pauli word");
                let mut out = self.amps.clone();
                apply_pauli_word(&mut out, self.n_qubits, &factors);
                Ok(out)
            }
        }
    }

    /// Draws `shots` samples of `wires`; keys are bitstrings in wire order.
    pub fn sample(&self, wires: &[usize], shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counts = self.sample_counts(wires, shots, &mut rng)?;
        let k = wires.len();
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(idx, c)| (format!("{idx:0k$b}"), c))
            .collect())
    }

    /// Histogram of `shots` samples indexed by local basis index.
    pub(crate) fn sample_counts<R: Rng>(
        &self,
        wires: &[usize],
        shots: u64,
        rng: &mut R,
    ) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::Validation("shots must be at least 1".into()));
        }
        let probs = self.probabilities(wires)?;
        let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        // multinomial draw as a chain of conditional binomials
        let mut counts = vec![0u64; probs.len()];
        let mut remaining = shots;
        let mut mass: f64 = probs.iter().sum();
        for (i, &p) in probs.iter().enumerate() {
            if i == last_nonzero {
                counts[i] = remaining;
                break;
            }
            if p <= 0.0 {
                continue;
            }
            let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 1.0 };
            let k = Binomial::new(remaining, q)
                .map_err(|e| Error::Internal(format!("binomial({remaining}, {q}): {e}")))?
                .sample(rng);
            counts[i] = k;
            remaining -= k;
            mass -= p;
            if remaining == 0 {
                break;
            }
        }
        Ok(counts)
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub(crate) fn check_wires(&self, wires: &[usize]) -> Result<()> {
        for (i, &w) in wires.iter().enumerate() {
            if w >= self.n_qubits {
                return Err(Error::Range(format!(
                    "wire {w} out of range for {} qubit(s)",
                    self.n_qubits
                )));
            }
            if wires[..i].contains(&w) {
                return Err(Error::Range(format!("duplicate wire {w} in {wires:?}")));
            }
        }
        Ok(())
    }

    fn stride(&self, wire: usize) -> usize {
        1 << (self.n_qubits - 1 - wire)
    }
}

fn check_size(n_qubits: usize, max_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > max_qubits {
        return Err(Error::Size(format!(
            "qubit count {n_qubits} outside 1..={max_qubits}"
        )));
    }
    Ok(())
}

fn check_len(n_qubits: usize, len: usize) -> Result<()> {
    if len != 1 << n_qubits {
        return Err(Error::Shape(format!(
            "{len} amplitudes for {n_qubits} qubit(s), expected {}",
            1usize << n_qubits
        )));
    }
    Ok(())
}

pub(crate) fn l2_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    bra.iter().zip(ket).map(|(a, b)| a.conj() * b).sum()
}

/// Strided 1- or 2-qubit update over amplitude pairs / quadruples.
pub(crate) fn apply_unchecked(amps: &mut [Complex64], n: usize, m: &CMatrix, wires: &[usize]) {
    match *wires {
        [w] => {
            let s = 1usize << (n - 1 - w);
            let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            for i in 0..amps.len() {
                if i & s != 0 {
                    continue;
                }
                let (a, b) = (amps[i], amps[i | s]);
                amps[i] = m00 * a + m01 * b;
                amps[i | s] = m10 * a + m11 * b;
            }
        }
        [w0, w1] => {
            let s0 = 1usize << (n - 1 - w0);
            let s1 = 1usize << (n - 1 - w1);
            let idx = |base: usize| [base, base | s1, base | s0, base | s0 | s1];
            for base in 0..amps.len() {
                if base & (s0 | s1) != 0 {
                    continue;
                }
                let ix = idx(base);
                let v = ix.map(|i| amps[i]);
                for (r, &target) in ix.iter().enumerate() {
                    amps[target] = (0..4).map(|c| m[(r, c)] * v[c]).sum();
                }
            }
        }
        _ => unreachable!("catalogue gates act on one or two wires"),
    }
}

/// Dense k-wire operator application (not required to be unitary).
fn apply_dense(amps: &[Complex64], n: usize, m: &CMatrix, wires: &[usize]) -> Vec<Complex64> {
    let k = wires.len();
    let strides: Vec<usize> = wires.iter().map(|&w| 1usize << (n - 1 - w)).collect();
    let mask: usize = strides.iter().sum();
    let offsets: Vec<usize> = (0..1usize << k)
        .map(|local| {
            strides
                .iter()
                .enumerate()
                .filter(|&(j, _)| local & (1 << (k - 1 - j)) != 0)
                .map(|(_, &s)| s)
                .sum()
        })
        .collect();
    let mut out = vec![ZERO; amps.len()];
    for base in (0..amps.len()).filter(|b| b & mask == 0) {
        for (r, &ro) in offsets.iter().enumerate() {
            out[base + ro] = offsets
                .iter()
                .enumerate()
                .map(|(c, &co)| m[(r, c)] * amps[base + co])
                .sum();
        }
    }
    out
}

/// In-place application of a Pauli word `⊗ P_w`.
pub(crate) fn apply_pauli_word(amps: &mut [Complex64], n: usize, factors: &[(Pauli, usize)]) {
    let mut flip = 0usize;
    let mut y_mask = 0usize;
    let mut z_mask = 0usize;
    for &(p, w) in factors {
        let s = 1usize << (n - 1 - w);
        match p {
            Pauli::X => flip |= s,
            Pauli::Y => {
                flip |= s;
                y_mask |= s;
            }
            Pauli::Z => z_mask |= s,
        }
    }
    // Y|0⟩ = i|1⟩, Y|1⟩ = -i|0⟩; Z|1⟩ = -|1⟩.
    let y_count = y_mask.count_ones();
    let base_phase = Complex64::i().powu(y_count);
    let phase = |j: usize| {
        let minus = (j & y_mask).count_ones() + (j & z_mask).count_ones();
        if minus.is_multiple_of(2) {
            base_phase
        } else {
            -base_phase
        }
    };
    if flip == 0 {
        for (j, a) in amps.iter_mut().enumerate() {
            *a *= phase(j);
        }
        return;
    }
    for j in 0..amps.len() {
        let k = j ^ flip;
        if j < k {
            let (aj, ak) = (amps[j], amps[k]);
            amps[k] = phase(j) * aj;
            amps[j] = phase(k) * ak;
        }
    }
}
