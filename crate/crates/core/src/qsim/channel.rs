//! The noisy channel D with idealized error detection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::state::{QuantumState, StateError};

/// How a corrupted message is produced. Every model sets the detection flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NoiseModel {
    /// The qubit is left intact; only the flag is set (erasure-style).
    DetectableFlag,
    /// An `X` error, detected.
    BitFlip,
    /// A `Z` error, detected.
    PhaseFlip,
}

impl std::str::FromStr for NoiseModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flag" | "detectable-flag" => Ok(NoiseModel::DetectableFlag),
            "bit-flip" => Ok(NoiseModel::BitFlip),
            "phase-flip" => Ok(NoiseModel::PhaseFlip),
            _ => Err(format!("unknown noise model `{s}` (flag, bit-flip, phase-flip)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("corruption probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

/// What the receiver sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Delivery<T> {
    Intact(T),
    Corrupted,
}

/// Deterministic given its seed (ChaCha8).
#[derive(Clone, Debug)]
pub struct NoisyChannel {
    p: f64,
    model: NoiseModel,
    rng: ChaCha8Rng,
}

impl NoisyChannel {
    pub fn new(p: f64, model: NoiseModel, seed: u64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ChannelError::InvalidProbability(p));
        }
        Ok(NoisyChannel {
            p,
            model,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn probability(&self) -> f64 {
        self.p
    }

    pub fn model(&self) -> NoiseModel {
        self.model
    }

    /// One corruption draw. `p = 0` and `p = 1` never consult the generator's outcome.
    pub fn corrupts(&mut self) -> bool {
        let u: f64 = self.rng.gen();
        u < self.p
    }

    /// Sends `payload` carried by `qubit` (if any). On corruption the noise
    /// model is applied to the qubit and the receiver sees only the flag.
    pub fn transmit<T>(
        &mut self,
        state: &mut QuantumState,
        qubit: Option<&str>,
        payload: T,
    ) -> Result<Delivery<T>, ChannelError> {
        if !self.corrupts() {
            return Ok(Delivery::Intact(payload));
        }
        if let Some(q) = qubit {
            match self.model {
                NoiseModel::DetectableFlag => {}
                NoiseModel::BitFlip => state.x(q)?,
                NoiseModel::PhaseFlip => state.z(q)?,
            }
        }
        Ok(Delivery::Corrupted)
    }
}
