//! Operational semantics: single steps, state-space exploration, explicit
//! LTSs and linearization.

mod aut;
mod explore;
mod linearize;
mod lts;
mod step;

pub use aut::{from_aut, to_aut, AutError};
pub use explore::{explore, Explored, DEFAULT_BUDGET};
pub use linearize::{linearize, LinearSpec, LinearizeError, NamingScheme};
pub use lts::{Lts, Transition};
pub use step::{Semantics, SemanticsError};
