//! The alternating qubit protocol: built-in model, the reference tables and
//! the verification pipeline.

mod model;
mod tables;
mod verify;

pub use model::{
    abstraction_set, build_alice, build_bob, build_system, communication, encapsulated_term, encapsulation_set,
    external_spec, system_term, Mutation, QaqpConfig,
};
pub use tables::{compare_tables, reference_lts, PrintedCheck, TableReport, REFERENCE_E};
pub use verify::{verify, LtsStats, Verdict, VerificationReport, VerifyError};
