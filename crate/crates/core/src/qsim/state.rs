//! Named-qubit statevector.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("no qubit named `{0}` in the register")]
    UnknownQubit(String),
    #[error("qubit `{0}` is already in the register")]
    DuplicateQubit(String),
    #[error("register limit of {MAX_QUBITS} qubits exceeded")]
    TooManyQubits,
    #[error("input state has zero norm")]
    ZeroState,
    #[error("expected {expected} amplitudes, got {got}")]
    WrongDimension { expected: usize, got: usize },
}

/// Qubit `names[k]` is bit `k` of the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    names: Vec<String>,
    amps: Vec<Complex64>,
}

impl Default for QuantumState {
    fn default() -> Self {
        QuantumState::new()
    }
}

impl QuantumState {
    /// The empty register (a single amplitude 1).
    pub fn new() -> Self {
        QuantumState {
            names: Vec::new(),
            amps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Replaces the whole statevector (normalized here); the qubit names stay.
    pub fn set_amplitudes(&mut self, amps: Vec<Complex64>) -> Result<(), StateError> {
        if amps.len() != self.amps.len() {
            return Err(StateError::WrongDimension {
                expected: self.amps.len(),
                got: amps.len(),
            });
        }
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(StateError::ZeroState);
        }
        self.amps = amps.into_iter().map(|a| a / n).collect();
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn index(&self, name: &str) -> Result<usize, StateError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| StateError::UnknownQubit(name.to_string()))
    }

    /// Appends a qubit in `alpha|0> + beta|1>` (normalized here).
    pub fn allocate_state(&mut self, name: &str, alpha: Complex64, beta: Complex64) -> Result<(), StateError> {
        if self.contains(name) {
            return Err(StateError::DuplicateQubit(name.to_string()));
        }
        if self.names.len() >= MAX_QUBITS {
            return Err(StateError::TooManyQubits);
        }
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if n == 0.0 {
            return Err(StateError::ZeroState);
        }
        let (alpha, beta) = (alpha / n, beta / n);
        let mut amps = Vec::with_capacity(self.amps.len() * 2);
        amps.extend(self.amps.iter().map(|a| a * alpha));
        amps.extend(self.amps.iter().map(|a| a * beta));
        self.amps = amps;
        self.names.push(name.to_string());
        Ok(())
    }

    /// Appends a qubit in `|0>`.
    pub fn allocate(&mut self, name: &str) -> Result<(), StateError> {
        self.allocate_state(name, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Applies a 2x2 unitary `[[u00, u01], [u10, u11]]` to one qubit.
    pub fn apply_1q(&mut self, name: &str, u: [[Complex64; 2]; 2]) -> Result<(), StateError> {
        let bit = 1usize << self.index(name)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn x(&mut self, name: &str) -> Result<(), StateError> {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        self.apply_1q(name, [[z, o], [o, z]])
    }

    pub fn z(&mut self, name: &str) -> Result<(), StateError> {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        self.apply_1q(name, [[o, z], [z, -o]])
    }

    pub fn h(&mut self, name: &str) -> Result<(), StateError> {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_1q(name, [[r, r], [r, -r]])
    }

    pub fn cnot(&mut self, control: &str, target: &str) -> Result<(), StateError> {
        let c = 1usize << self.index(control)?;
        let t = 1usize << self.index(target)?;
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// Probability of reading 1 on `name`.
    pub fn prob_one(&self, name: &str) -> Result<f64, StateError> {
        let bit = 1usize << self.index(name)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Computational-basis measurement; collapses and renormalizes.
    pub fn measure<R: Rng + ?Sized>(&mut self, name: &str, rng: &mut R) -> Result<u8, StateError> {
        let p1 = self.prob_one(name)?;
        let outcome = u8::from(rng.gen::<f64>() < p1);
        self.collapse(name, outcome)?;
        Ok(outcome)
    }

    fn collapse(&mut self, name: &str, outcome: u8) -> Result<(), StateError> {
        let bit = 1usize << self.index(name)?;
        let keep = |i: usize| (i & bit != 0) == (outcome == 1);
        let norm: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = if keep(i) { *a / norm } else { Complex64::new(0.0, 0.0) };
        }
        Ok(())
    }

    /// Measures `name` and removes it from the register.
    pub fn discard<R: Rng + ?Sized>(&mut self, name: &str, rng: &mut R) -> Result<u8, StateError> {
        let outcome = self.measure(name, rng)?;
        let k = self.index(name)?;
        let bit = 1usize << k;
        let low = bit - 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len() / 2];
        for (i, a) in self.amps.iter().enumerate() {
            if (i & bit != 0) == (outcome == 1) {
                amps[(i & low) | ((i >> 1) & !low)] = *a;
            }
        }
        self.amps = amps;
        self.names.remove(k);
        Ok(outcome)
    }

    /// Reduced density matrix of one qubit.
    pub fn reduced(&self, name: &str) -> Result<[[Complex64; 2]; 2], StateError> {
        let bit = 1usize << self.index(name)?;
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                rho[0][0] += a0 * a0.conj();
                rho[0][1] += a0 * a1.conj();
                rho[1][0] += a1 * a0.conj();
                rho[1][1] += a1 * a1.conj();
            }
        }
        Ok(rho)
    }

    /// `<psi| rho |psi>` for `psi = alpha|0> + beta|1>` and the reduced state of `name`.
    pub fn fidelity(&self, name: &str, alpha: Complex64, beta: Complex64) -> Result<f64, StateError> {
        let rho = self.reduced(name)?;
        let psi = [alpha, beta];
        let mut f = Complex64::new(0.0, 0.0);
        for x in 0..2 {
            for y in 0..2 {
                f += psi[x].conj() * rho[x][y] * psi[y];
            }
        }
        Ok(f.re)
    }
}
