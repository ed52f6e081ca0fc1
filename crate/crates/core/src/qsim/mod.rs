//! Statevector simulation of the protocol with a noisy channel.
//!
//! [`run_protocol`] drives Alice and Bob through their state machines and
//! records each move with the label of the abstract model, so a run can be
//! checked against the encapsulated system with [`conforms`].

mod channel;
mod ops;
mod protocol;
mod state;

pub use channel::{ChannelError, Delivery, NoiseModel, NoisyChannel};
pub use ops::{bell_measure, make_epr, pauli_correct, superdense_decode, superdense_encode, Kl};
pub use protocol::{
    run_protocol, DeliveredDatum, QubitData, RunOptions, RunResult, RunTrace, SessionStats, SimError,
    DEFAULT_RETRY_CAP,
};
pub use state::{QuantumState, StateError, MAX_QUBITS};

use crate::equivalence::accepts_trace;
use crate::qaqp::{build_system, encapsulated_term, QaqpConfig};
use crate::semantics::{explore, Semantics, SemanticsError, DEFAULT_BUDGET};

/// Whether `trace` is a path of `encap H in (S(0) || R(0))` over a data
/// domain of size `delta`. Every label, hidden or not, must match exactly.
pub fn conforms(trace: &RunTrace, delta: u32) -> Result<bool, SemanticsError> {
    let model = build_system(&QaqpConfig::with_delta(delta));
    let sem = Semantics::new(&model.spec, &model.comm);
    let ex = explore(&sem, &encapsulated_term(), DEFAULT_BUDGET)?;
    Ok(accepts_trace(&ex.lts, &trace.actions, false))
}
