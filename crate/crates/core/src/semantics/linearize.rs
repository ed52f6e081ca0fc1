//! Linearization: from a term to a linear recursive specification with one
//! equation per reachable state.

use std::collections::BTreeSet;

use thiserror::Error;

use super::explore::{explore, Explored};
use super::step::{Semantics, SemanticsError};
use crate::term::{CommFunction, Label, RecursiveSpec, Term, VarName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamingScheme {
    /// `prefix_1`, `prefix_2`, ... in exploration order, the initial state first.
    Indexed { prefix: String },
}

impl Default for NamingScheme {
    fn default() -> Self {
        NamingScheme::Indexed { prefix: "X".into() }
    }
}

impl NamingScheme {
    fn name(&self, index: usize) -> VarName {
        match self {
            NamingScheme::Indexed { prefix } => VarName::plain(format!("{prefix}_{}", index + 1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearizeError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("linearized specification is not isomorphic to the input: {0}")]
    NotIsomorphic(String),
}

#[derive(Clone, Debug)]
pub struct LinearSpec {
    pub spec: RecursiveSpec,
    pub initial: VarName,
    /// Variable for each state of `source`, `None` for the terminated state.
    pub names: Vec<Option<VarName>>,
    pub source: Explored,
}

/// Explores `t` and writes every state as `X_i = Σ label . X_j`.
pub fn linearize(
    sem: &Semantics<'_>,
    t: &Term,
    scheme: &NamingScheme,
    budget: usize,
) -> Result<LinearSpec, LinearizeError> {
    let explored = explore(sem, t, budget)?;
    let lts = &explored.lts;

    let mut names = Vec::with_capacity(lts.num_states());
    let mut next = 0;
    for s in 0..lts.num_states() {
        if lts.terminal[s] {
            names.push(None);
        } else {
            names.push(Some(scheme.name(next)));
            next += 1;
        }
    }

    let succ = lts.successors();
    let mut spec = RecursiveSpec::new();
    for s in 0..lts.num_states() {
        let Some(var) = &names[s] else { continue };
        let summands = succ[s].iter().map(|&(label, target)| {
            let head = match label {
                Label::Tau => Term::Tau,
                Label::Act(a) => Term::Action(a.clone()),
            };
            match &names[target] {
                Some(v) => Term::seq(head, Term::var(v.clone())),
                None => head,
            }
        });
        spec.insert(var.clone(), Term::sum(summands));
    }

    let initial = names[lts.initial]
        .clone()
        .ok_or_else(|| LinearizeError::NotIsomorphic("initial state is terminated".into()))?;
    let out = LinearSpec {
        spec,
        initial,
        names,
        source: explored,
    };
    check_isomorphic(&out, sem.comm, budget)?;
    Ok(out)
}

/// Re-explores the linear specification and compares transition sets under
/// the state/variable bijection.
fn check_isomorphic(lin: &LinearSpec, comm: &CommFunction, budget: usize) -> Result<(), LinearizeError> {
    let sem = Semantics::new(&lin.spec, comm);
    let again = explore(&sem, &Term::var(lin.initial.clone()), budget)?;
    let src = &lin.source.lts;
    if again.lts.num_states() != src.num_states() {
        return Err(LinearizeError::NotIsomorphic(format!(
            "{} states vs {}",
            again.lts.num_states(),
            src.num_states()
        )));
    }
    // Map each re-explored state back to the original index.
    let mut back = vec![usize::MAX; again.terms.len()];
    for (i, term) in again.terms.iter().enumerate() {
        back[i] = match term {
            Term::Var(v) => lin
                .names
                .iter()
                .position(|n| n.as_ref() == Some(v))
                .ok_or_else(|| LinearizeError::NotIsomorphic(format!("unknown state {v}")))?,
            Term::Skip => lin
                .names
                .iter()
                .position(|n| n.is_none())
                .ok_or_else(|| LinearizeError::NotIsomorphic("unexpected termination".into()))?,
            other => return Err(LinearizeError::NotIsomorphic(format!("non-variable state {other}"))),
        };
    }
    let mapped: BTreeSet<_> = again
        .lts
        .transitions
        .iter()
        .map(|t| (back[t.source], t.label.clone(), back[t.target]))
        .collect();
    let original: BTreeSet<_> = src
        .transitions
        .iter()
        .map(|t| (t.source, t.label.clone(), t.target))
        .collect();
    if mapped != original {
        return Err(LinearizeError::NotIsomorphic("transition sets differ".into()));
    }
    Ok(())
}
