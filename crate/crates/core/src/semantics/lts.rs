//! Explicit labelled transition systems.

use std::fmt::Write as _;

use crate::term::Label;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: usize,
    pub label: Label,
    pub target: usize,
}

/// A finite LTS. `names[s]` describes state `s` (the term it was explored
/// from, or a synthetic name); `terminal[s]` marks successful termination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    pub initial: usize,
    pub names: Vec<String>,
    pub terminal: Vec<bool>,
    pub transitions: Vec<Transition>,
}

impl Lts {
    /// Builds an LTS with synthetic state names `s0..s{n-1}`.
    ///
    /// Panics if an endpoint or the initial state is out of range.
    pub fn from_edges(initial: usize, num_states: usize, edges: impl IntoIterator<Item = (usize, Label, usize)>) -> Lts {
        assert!(initial < num_states, "initial state {initial} out of range");
        let transitions = edges
            .into_iter()
            .map(|(source, label, target)| {
                assert!(source < num_states && target < num_states, "transition endpoint out of range");
                Transition { source, label, target }
            })
            .collect();
        let mut lts = Lts {
            initial,
            names: (0..num_states).map(|i| format!("s{i}")).collect(),
            terminal: vec![false; num_states],
            transitions,
        };
        lts.canonicalize();
        lts
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    /// Sorts transitions and removes duplicates.
    pub fn canonicalize(&mut self) {
        self.transitions.sort();
        self.transitions.dedup();
    }

    /// Outgoing `(label, target)` lists per state.
    pub fn successors(&self) -> Vec<Vec<(&Label, usize)>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for t in &self.transitions {
            out[t.source].push((&t.label, t.target));
        }
        out
    }

    pub fn has_tau(&self) -> bool {
        self.transitions.iter().any(|t| t.label.is_tau())
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let succ = self.successors();
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for &(_, t) in &succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States without outgoing transitions that are not terminal.
    pub fn deadlocks(&self) -> Vec<usize> {
        let succ = self.successors();
        (0..self.num_states())
            .filter(|&s| succ[s].is_empty() && !self.terminal[s])
            .collect()
    }

    /// States from which the initial state can be reached again.
    pub fn can_return_to_initial(&self) -> Vec<bool> {
        let mut pred = vec![Vec::new(); self.num_states()];
        for t in &self.transitions {
            pred[t.target].push(t.source);
        }
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for &p in &pred[s] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Structured text dump with full label detail, one line per item:
    ///
    /// ```text
    /// lts initial=0 states=2 transitions=2
    /// state 0 terminal=false name="X"
    /// trans 0 -> 1 label="read_Q[d1]" tau=false shadow=false merged=false
    /// ```
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "lts initial={} states={} transitions={}",
            self.initial,
            self.num_states(),
            self.num_transitions()
        );
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(s, "state {i} terminal={} name={name:?}", self.terminal[i]);
        }
        for t in &self.transitions {
            let (shadow, merged) = match &t.label {
                Label::Tau => (false, false),
                Label::Act(a) => (a.shadow, a.merged),
            };
            let _ = writeln!(
                s,
                "trans {} -> {} label=\"{}\" tau={} shadow={shadow} merged={merged}",
                t.source,
                t.target,
                t.label,
                t.label.is_tau()
            );
        }
        s
    }
}
