//! Two-qubit protocol primitives.
//!
//! Bell outcomes follow `Phi+ -> 00`, `Psi+ -> 01`, `Phi- -> 10`, `Psi- -> 11`;
//! the Pauli for `kl` is `00 -> I`, `01 -> X`, `10 -> Z`, `11 -> X then Z`.

use std::fmt;

use rand::Rng;

use super::state::{QuantumState, StateError};

/// Two classical bits `k` (high) and `l` (low).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kl {
    pub k: u8,
    pub l: u8,
}

impl Kl {
    pub const ALL: [Kl; 4] = [Kl::new(0, 0), Kl::new(0, 1), Kl::new(1, 0), Kl::new(1, 1)];

    pub const fn new(k: u8, l: u8) -> Kl {
        Kl { k, l }
    }
}

impl fmt::Display for Kl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.k, self.l)
    }
}

/// Puts two fresh `|0>` qubits into `(|00> + |11>)/sqrt 2`, allocating them if absent.
pub fn make_epr(s: &mut QuantumState, q1: &str, q2: &str) -> Result<(), StateError> {
    for q in [q1, q2] {
        if !s.contains(q) {
            s.allocate(q)?;
        }
    }
    s.h(q1)?;
    s.cnot(q1, q2)
}

/// Bell-basis measurement of `(q1, q2)`: CNOT, Hadamard, then both qubits in
/// the computational basis. Both qubits stay in the register, collapsed.
pub fn bell_measure<R: Rng + ?Sized>(
    s: &mut QuantumState,
    q1: &str,
    q2: &str,
    rng: &mut R,
) -> Result<Kl, StateError> {
    s.cnot(q1, q2)?;
    s.h(q1)?;
    let k = s.measure(q1, rng)?;
    let l = s.measure(q2, rng)?;
    Ok(Kl::new(k, l))
}

pub fn pauli_correct(s: &mut QuantumState, q: &str, kl: Kl) -> Result<(), StateError> {
    if kl.l == 1 {
        s.x(q)?;
    }
    if kl.k == 1 {
        s.z(q)?;
    }
    Ok(())
}

/// Encodes `kl` on one half of a shared Bell pair.
pub fn superdense_encode(s: &mut QuantumState, q: &str, kl: Kl) -> Result<(), StateError> {
    pauli_correct(s, q, kl)
}

/// Recovers `kl` from the pair `(q1, q2)` where `q1` carries the encoding.
pub fn superdense_decode<R: Rng + ?Sized>(
    s: &mut QuantumState,
    q1: &str,
    q2: &str,
    rng: &mut R,
) -> Result<Kl, StateError> {
    bell_measure(s, q1, q2, rng)
}
