//! Executes the alternating qubit protocol on the statevector simulator.
//!
//! Alice and Bob follow the `S` and `R` state machines of the abstract model.
//! At each step the first enabled move is taken in this order: Bob's local
//! actions, the joint measurement and Pauli on `M`, a channel-D transfer,
//! Alice reading the next datum. Every move is recorded with the label the
//! encapsulated model uses for it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

use super::channel::{ChannelError, Delivery, NoisyChannel};
use super::ops::{bell_measure, make_epr, pauli_correct, superdense_decode, superdense_encode, Kl};
use super::state::{QuantumState, StateError};
use crate::term::{ActionLabel, Bit, DataValue};

pub const DEFAULT_RETRY_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("session {session} exceeded the retransmission cap of {cap} messages")]
    RetryBudgetExceeded { session: usize, cap: usize },
    #[error("no data to send")]
    NoData,
    #[error("data domain size must be positive")]
    EmptyDomain,
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// A single-qubit input `alpha|0> + beta|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitData {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl QubitData {
    /// Uniform on the Bloch sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> QubitData {
        let cos_theta: f64 = 1.0 - 2.0 * rng.gen::<f64>();
        let theta = cos_theta.clamp(-1.0, 1.0).acos();
        let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        QubitData {
            alpha: Complex64::new((theta / 2.0).cos(), 0.0),
            beta: Complex64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn random_batch(count: usize, seed: u64) -> Vec<QubitData> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| QubitData::random(&mut rng)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Messages allowed per session before giving up.
    pub retry_cap: usize,
    /// Size of the abstract data domain; datum `i` (1-based) is `d{((i-1) % delta) + 1}`.
    pub delta: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            retry_cap: DEFAULT_RETRY_CAP,
            delta: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SessionStats {
    pub index: usize,
    pub bit: u8,
    pub datum: u32,
    /// Channel-D messages sent while Alice worked on this datum.
    pub messages: usize,
    /// Messages beyond the four of an undisturbed session.
    pub retransmissions: usize,
    pub noise_events: usize,
    pub decode_mismatches: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace {
    pub actions: Vec<ActionLabel>,
    pub sessions: Vec<SessionStats>,
}

impl RunTrace {
    /// One label per line, in `.qacp` label syntax.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in &self.actions {
            let _ = writeln!(s, "{a}");
        }
        s
    }

    pub fn total_retransmissions(&self) -> usize {
        self.sessions.iter().map(|s| s.retransmissions).sum()
    }

    pub fn total_noise_events(&self) -> usize {
        self.sessions.iter().map(|s| s.noise_events).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeliveredDatum {
    pub index: usize,
    pub datum: u32,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub delivered: Vec<DeliveredDatum>,
    pub trace: RunTrace,
    /// Largest register size seen during the run.
    pub max_live_qubits: usize,
    /// Largest deviation of the statevector norm from 1.
    pub max_norm_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Alice {
    /// `S(b)`
    Ready,
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bob {
    /// `R(b)`
    Ready,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R2r,
    R3r,
    R4r,
}

/// Message contents on channel D.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Msg {
    Bit(Bit),
    M,
    Err,
}

impl Msg {
    fn value(self) -> DataValue {
        match self {
            Msg::Bit(b) => DataValue::Bit(b),
            Msg::M => DataValue::qubit("M"),
            Msg::Err => DataValue::Err,
        }
    }
}

fn label(name: &str, args: Vec<DataValue>) -> ActionLabel {
    ActionLabel::new(name, args)
}

struct Run<'a> {
    data: &'a [QubitData],
    opts: &'a RunOptions,
    channel: &'a mut NoisyChannel,
    rng: ChaCha8Rng,
    state: QuantumState,
    alice: Alice,
    alice_bit: Bit,
    /// Index into `data` of Alice's current datum.
    alice_index: usize,
    next_index: usize,
    /// Outcome of Alice's Bell measurement in the current session, once taken.
    kl: Option<Kl>,
    bob: Bob,
    bob_bit: Bit,
    bob_index: usize,
    bob_kl: Kl,
    /// What Bob in `R_1` answers: the stale bit he received, or `err`.
    bob_reply: Msg,
    result: RunResult,
}

impl Run<'_> {
    fn datum(&self, index: usize) -> DataValue {
        DataValue::Datum((index as u32 % self.opts.delta) + 1)
    }

    fn emit(&mut self, a: ActionLabel) {
        self.result.trace.actions.push(a);
        self.result.max_live_qubits = self.result.max_live_qubits.max(self.state.num_qubits());
        self.result.max_norm_error = self.result.max_norm_error.max((self.state.norm() - 1.0).abs());
    }

    fn session(&mut self) -> &mut SessionStats {
        self.result.trace.sessions.last_mut().expect("a session is open")
    }

    fn fresh_pair(&mut self, q1: &str, q2: &str) -> Result<(), SimError> {
        for q in [q1, q2] {
            if self.state.contains(q) {
                self.state.discard(q, &mut self.rng)?;
            }
        }
        make_epr(&mut self.state, q1, q2)?;
        Ok(())
    }

    /// Bob's local moves: pair generation, decoding, correction, delivery.
    fn bob_local(&mut self) -> Result<bool, SimError> {
        match self.bob {
            Bob::R2 | Bob::R2r => {
                self.fresh_pair("M", "N")?;
                self.bob = if self.bob == Bob::R2 { Bob::R3 } else { Bob::R3r };
                self.emit(label("GEN", vec![DataValue::qubit("M"), DataValue::qubit("N")]));
            }
            Bob::R8 => {
                let kl = superdense_decode(&mut self.state, "M", "N", &mut self.rng)?;
                self.state.discard("M", &mut self.rng)?;
                self.state.discard("N", &mut self.rng)?;
                if Some(kl) != self.kl {
                    self.session().decode_mismatches += 1;
                }
                self.bob_kl = kl;
                self.bob = Bob::R9;
                self.emit(label("Me", vec![DataValue::qubit("M"), DataValue::qubit("N"), DataValue::Kl]));
            }
            Bob::R9 => {
                pauli_correct(&mut self.state, "B", self.bob_kl)?;
                self.bob = Bob::R10;
                self.emit(label("sigma", vec![DataValue::Kl, DataValue::qubit("B")]));
            }
            Bob::R10 => {
                let input = self.data[self.bob_index];
                let fidelity = self.state.fidelity("B", input.alpha, input.beta)?;
                let d = self.datum(self.bob_index);
                self.emit(label("send_P", vec![d.clone()]));
                self.state.discard("B", &mut self.rng)?;
                let DataValue::Datum(datum) = d else { unreachable!() };
                self.result.delivered.push(DeliveredDatum {
                    index: self.bob_index + 1,
                    datum,
                    fidelity,
                });
                self.bob_bit = self.bob_bit.flip();
                self.bob = Bob::Ready;
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Alice's measurement and Pauli, merged with Bob's shadow constants.
    fn merged(&mut self) -> Result<bool, SimError> {
        match (self.alice, self.bob) {
            (Alice::S3, Bob::R4 | Bob::R4r) => {
                // After a restart from S_1 the pair is already measured; the
                // recorded outcome stands.
                if self.kl.is_none() {
                    self.kl = Some(bell_measure(&mut self.state, "q", "A", &mut self.rng)?);
                    self.state.discard("q", &mut self.rng)?;
                    self.state.discard("A", &mut self.rng)?;
                }
                self.bob_index = self.alice_index;
                self.alice = Alice::S4;
                self.bob = Bob::R5;
                let d = self.datum(self.alice_index);
                self.emit(label("Me", vec![DataValue::qubit("A"), d, DataValue::Kl]).as_merged());
            }
            (Alice::S4, Bob::R5 | Bob::R4r) => {
                let kl = self.kl.ok_or_else(|| SimError::Protocol("encoding before measuring".into()))?;
                superdense_encode(&mut self.state, "M", kl)?;
                self.alice = Alice::S5;
                self.bob = Bob::R6;
                self.emit(label("sigma", vec![DataValue::Kl, DataValue::qubit("M")]).as_merged());
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn alice_sends(&self) -> Option<Msg> {
        match self.alice {
            Alice::S1 => Some(Msg::Bit(self.alice_bit)),
            Alice::S5 => Some(Msg::M),
            _ => None,
        }
    }

    fn bob_sends(&self) -> Option<Msg> {
        match self.bob {
            Bob::R1 => Some(self.bob_reply),
            Bob::R3 | Bob::R3r => Some(Msg::M),
            Bob::R7 => Some(Msg::Bit(self.bob_bit)),
            _ => None,
        }
    }

    fn transfer(&mut self, msg: Msg) -> Result<Msg, SimError> {
        {
            let cap = self.opts.retry_cap;
            let s = self.session();
            s.messages += 1;
            s.retransmissions = s.messages.saturating_sub(4);
            if s.messages > cap {
                return Err(SimError::RetryBudgetExceeded { session: s.index, cap });
            }
        }
        let carrier = match msg {
            Msg::Bit(b) => {
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::new(0.0, 0.0);
                let (a, c) = if b == Bit::Zero { (one, zero) } else { (zero, one) };
                self.state.allocate_state("b", a, c)?;
                Some("b")
            }
            Msg::M => Some("M"),
            Msg::Err => None,
        };
        let got = match self.channel.transmit(&mut self.state, carrier, msg)? {
            Delivery::Intact(m) => m,
            Delivery::Corrupted => {
                self.session().noise_events += 1;
                Msg::Err
            }
        };
        if carrier == Some("b") {
            let read = self.state.discard("b", &mut self.rng)?;
            if let (Msg::Bit(b), Msg::Bit(_)) = (msg, got) {
                if read != b.as_u8() {
                    return Err(SimError::Protocol("acknowledgement qubit read back wrongly".into()));
                }
            }
        }
        self.emit(label("C_D", vec![got.value()]).as_merged());
        Ok(got)
    }

    fn alice_receives(&mut self, m: Msg) -> Result<(), SimError> {
        let b = self.alice_bit;
        self.alice = match (self.alice, m) {
            (Alice::S2, Msg::M) => Alice::S3,
            (Alice::S2 | Alice::S6, Msg::Err) => Alice::S1,
            (Alice::S6, Msg::M) => Alice::S4,
            (Alice::S2 | Alice::S6, Msg::Bit(x)) if x == b => {
                self.alice_bit = b.flip();
                Alice::Ready
            }
            (s, m) => return Err(SimError::Protocol(format!("Alice in {s:?} cannot receive {m:?}"))),
        };
        Ok(())
    }

    fn bob_receives(&mut self, m: Msg) -> Result<(), SimError> {
        let b = self.bob_bit;
        self.bob = match (self.bob, m) {
            (Bob::Ready, Msg::Bit(x)) if x == b => Bob::R2,
            (Bob::Ready, Msg::Err | Msg::Bit(_)) => {
                self.bob_reply = m;
                Bob::R1
            }
            (Bob::R4 | Bob::R4r, Msg::Err) => Bob::R2,
            (Bob::R4 | Bob::R4r, Msg::Bit(x)) if x == b => Bob::R2,
            (Bob::R6, Msg::M) => Bob::R7,
            (Bob::R6, Msg::Err) => Bob::R2r,
            (s, m) => return Err(SimError::Protocol(format!("Bob in {s:?} cannot receive {m:?}"))),
        };
        Ok(())
    }

    fn communicate(&mut self) -> Result<bool, SimError> {
        if let Some(msg) = self.alice_sends() {
            let got = self.transfer(msg)?;
            self.alice = match self.alice {
                Alice::S1 => Alice::S2,
                _ => Alice::S6,
            };
            self.bob_receives(got)?;
            return Ok(true);
        }
        if let Some(msg) = self.bob_sends() {
            let got = self.transfer(msg)?;
            self.bob = match (self.bob, got) {
                (Bob::R1, _) => Bob::Ready,
                (Bob::R3, _) | (Bob::R3r, Msg::Err) => Bob::R4,
                (Bob::R3r, _) => Bob::R4r,
                _ => Bob::R8,
            };
            self.alice_receives(got)?;
            return Ok(true);
        }
        Ok(false)
    }

    fn read(&mut self) -> Result<bool, SimError> {
        if self.alice != Alice::Ready || self.next_index >= self.data.len() {
            return Ok(false);
        }
        let i = self.next_index;
        self.next_index += 1;
        let input = self.data[i];
        self.state.allocate_state("q", input.alpha, input.beta)?;
        make_epr(&mut self.state, "A", "B")?;
        self.alice_index = i;
        self.alice = Alice::S1;
        self.kl = None;
        let d = self.datum(i);
        let DataValue::Datum(datum) = d else { unreachable!() };
        self.result.trace.sessions.push(SessionStats {
            index: i + 1,
            bit: self.alice_bit.as_u8(),
            datum,
            ..Default::default()
        });
        self.emit(label("read_Q", vec![d]));
        Ok(true)
    }

    fn go(mut self) -> Result<RunResult, SimError> {
        loop {
            let moved = self.bob_local()? || self.merged()? || self.communicate()? || self.read()?;
            if !moved {
                break;
            }
        }
        if self.result.delivered.len() != self.data.len() {
            return Err(SimError::Protocol(format!(
                "stopped after delivering {} of {} data",
                self.result.delivered.len(),
                self.data.len()
            )));
        }
        Ok(self.result)
    }
}

/// Sends `data` from Alice to Bob over `channel`. `seed` drives measurement outcomes.
pub fn run_protocol(
    data: &[QubitData],
    channel: &mut NoisyChannel,
    seed: u64,
    opts: &RunOptions,
) -> Result<RunResult, SimError> {
    if data.is_empty() {
        return Err(SimError::NoData);
    }
    if opts.delta == 0 {
        return Err(SimError::EmptyDomain);
    }
    Run {
        data,
        opts,
        channel,
        rng: ChaCha8Rng::seed_from_u64(seed),
        state: QuantumState::new(),
        alice: Alice::Ready,
        alice_bit: Bit::Zero,
        alice_index: 0,
        next_index: 0,
        kl: None,
        bob: Bob::Ready,
        bob_bit: Bit::Zero,
        bob_index: 0,
        bob_kl: Kl::new(0, 0),
        bob_reply: Msg::Err,
        result: RunResult {
            delivered: Vec::new(),
            trace: RunTrace::default(),
            max_live_qubits: 0,
            max_norm_error: 0.0,
        },
    }
    .go()
}
