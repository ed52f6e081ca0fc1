//! The process-term language: data, action labels, terms, recursive
//! specifications and communication functions.

mod comm;
mod data;
mod label;
mod process;
mod spec;

pub use comm::{CommFunction, CommRule, LabelTemplate, TemplateArg};
pub use data::{Bit, DataValue};
pub use label::{match_label, ActionLabel, ActionSet, ArgPattern, Label, LabelPattern};
pub use process::{normalize, Term, VarName};
pub use spec::{check_guarded, Guardedness, RecursiveSpec};

pub(crate) use process::{mk_abstract, mk_encap, mk_par, mk_seq};

/// A closed system: equations, the communication function and an entry term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub spec: RecursiveSpec,
    pub comm: CommFunction,
    pub entry: Option<Term>,
}

impl Model {
    pub fn new(spec: RecursiveSpec, comm: CommFunction) -> Self {
        Model {
            spec,
            comm,
            entry: None,
        }
    }

    pub fn with_entry(mut self, entry: Term) -> Self {
        self.entry = Some(entry);
        self
    }
}
