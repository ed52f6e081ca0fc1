//! Breadth-first state-space generation.

use std::collections::HashMap;
use std::collections::VecDeque;

use super::lts::{Lts, Transition};
use super::step::{Semantics, SemanticsError};
use crate::term::{normalize, Term};

pub const DEFAULT_BUDGET: usize = 100_000;

/// An LTS together with the normalized term of every state.
#[derive(Clone, Debug)]
pub struct Explored {
    pub lts: Lts,
    pub terms: Vec<Term>,
}

/// Explores every state reachable from `t`. States are numbered in BFS
/// order with successors visited in label/term order, so the result is a
/// pure function of the inputs.
pub fn explore(sem: &Semantics<'_>, t: &Term, budget: usize) -> Result<Explored, SemanticsError> {
    let start = normalize(t);
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut terms = vec![start.clone()];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    let mut transitions = Vec::new();

    while let Some(s) = queue.pop_front() {
        let moves = sem.step(&terms[s])?;
        for (label, target) in moves {
            let id = match index.get(&target) {
                Some(&id) => id,
                None => {
                    if terms.len() >= budget {
                        return Err(SemanticsError::BudgetExceeded(budget));
                    }
                    let id = terms.len();
                    index.insert(target.clone(), id);
                    terms.push(target);
                    queue.push_back(id);
                    id
                }
            };
            transitions.push(Transition {
                source: s,
                label,
                target: id,
            });
        }
    }

    let mut lts = Lts {
        initial: 0,
        names: terms.iter().map(|t| t.to_string()).collect(),
        terminal: terms.iter().map(|t| *t == Term::Skip).collect(),
        transitions,
    };
    lts.canonicalize();
    Ok(Explored { lts, terms })
}
