//! Dense state-vector simulator, used as a brute-force oracle.
//!
//! Holds all 2ⁿ amplitudes, so it only scales to a handful of qubits — which
//! is the point: it makes no stabilizer-formalism assumptions, so it can
//! independently check the sparse Pauli algebra, the tableau simulator, and
//! small measurement circuits. Qubit `q` is bit `q` of the basis index.

use num_complex::Complex64;
use rand::Rng;

use crate::pauli::{CliffordGate, PauliOperator, Phase};

const EPS: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct StateVec {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVec {
    /// |0…0⟩ on `n` qubits.
    pub fn zero_state(n: usize) -> Self {
        assert!(n <= 20, "dense oracle is for small systems");
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        StateVec { n, amps }
    }

    /// |+…+⟩ on `n` qubits.
    pub fn plus_state(n: usize) -> Self {
        let mut s = StateVec::zero_state(n);
        for q in 0..n {
            s.apply_h(q);
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amps[basis]
    }

    pub fn apply_h(&mut self, q: usize) {
        let mask = 1usize << q;
        let norm = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a, b) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = (a + b) * norm;
                self.amps[i | mask] = (a - b) * norm;
            }
        }
    }

    pub fn apply_s(&mut self, q: usize) {
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask != 0 {
                self.amps[i] *= Complex64::I;
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb != 0 {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    pub fn apply_cnot(&mut self, c: usize, t: usize) {
        let (mc, mt) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
    }

    pub fn apply_gate(&mut self, g: &CliffordGate<usize>) {
        match *g {
            CliffordGate::H(q) => self.apply_h(q),
            CliffordGate::S(q) => self.apply_s(q),
            CliffordGate::Cz(a, b) => self.apply_cz(a, b),
            CliffordGate::Cnot(c, t) => self.apply_cnot(c, t),
        }
    }

    /// Apply a sparse Pauli operator (with its phase) to the state.
    pub fn apply_pauli(&mut self, op: &PauliOperator<usize>) {
        let phase = match op.phase {
            Phase::ONE => Complex64::ONE,
            Phase::I => Complex64::I,
            Phase::NEG_ONE => -Complex64::ONE,
            _ => -Complex64::I,
        };
        let mut xmask = 0usize;
        for &q in &op.xs {
            assert!(q < self.n);
            xmask |= 1 << q;
        }
        let mut zmask = 0usize;
        for &q in &op.zs {
            assert!(q < self.n);
            zmask |= 1 << q;
        }
        // X^x Z^z |i⟩ = (−1)^{|z∧i|} |i ⊕ x⟩
        let mut out = vec![Complex64::ZERO; self.amps.len()];
        for i in 0..self.amps.len() {
            let sign = if (i & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[i ^ xmask] = self.amps[i] * phase * sign;
        }
        self.amps = out;
    }

    pub fn inner(&self, other: &StateVec) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// ⟨ψ| P |ψ⟩ for a Pauli operator.
    pub fn expectation(&self, op: &PauliOperator<usize>) -> Complex64 {
        let mut applied = self.clone();
        applied.apply_pauli(op);
        self.inner(&applied)
    }

    /// Is the state a +1 eigenstate of `op`?
    pub fn stabilized_by(&self, op: &PauliOperator<usize>) -> bool {
        (self.expectation(op) - Complex64::ONE).norm() < EPS
    }

    /// Measure a Hermitian Pauli. Returns `true` for the −1 outcome. If the
    /// state is an eigenstate the outcome is deterministic and `rng` is not
    /// consulted.
    pub fn measure_pauli(&mut self, op: &PauliOperator<usize>, rng: &mut impl Rng) -> bool {
        assert!(op.is_hermitian());
        let exp = self.expectation(op).re;
        let p_minus = (1.0 - exp) / 2.0;
        let minus = if p_minus < EPS {
            false
        } else if p_minus > 1.0 - EPS {
            true
        } else {
            rng.gen_bool(p_minus)
        };
        // Project: |ψ⟩ ← (1 ± P)|ψ⟩ / norm
        let mut applied = self.clone();
        applied.apply_pauli(op);
        let sign = if minus { -1.0 } else { 1.0 };
        for (a, b) in self.amps.iter_mut().zip(&applied.amps) {
            *a = (*a + sign * b) / 2.0;
        }
        let norm: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > EPS, "projected onto the zero vector");
        for a in &mut self.amps {
            *a /= norm;
        }
        minus
    }

    /// Measure qubit `q` in the Z basis; `true` means outcome |1⟩.
    pub fn measure_z(&mut self, q: usize, rng: &mut impl Rng) -> bool {
        self.measure_pauli(&PauliOperator::z_on([q]), rng)
    }
}
