//! Trace membership and weak-trace comparison by subset construction.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::semantics::Lts;
use crate::term::{ActionLabel, Label};

/// Upper bound on explored pairs of state sets before giving up.
const PAIR_LIMIT: usize = 200_000;

fn tau_closure(succ: &[Vec<(&Label, usize)>], set: &mut Vec<usize>) {
    let mut seen: HashSet<usize> = set.iter().copied().collect();
    let mut i = 0;
    while i < set.len() {
        let s = set[i];
        i += 1;
        for &(lab, t) in &succ[s] {
            if lab.is_tau() && seen.insert(t) {
                set.push(t);
            }
        }
    }
    set.sort_unstable();
}

/// Whether `trace` labels a path from the initial state. With `weak`, τ-moves
/// may be taken freely before, between and after the actions.
pub fn accepts_trace(l: &Lts, trace: &[ActionLabel], weak: bool) -> bool {
    let succ = l.successors();
    let mut cur = vec![l.initial];
    if weak {
        tau_closure(&succ, &mut cur);
    }
    for a in trace {
        let key = a.to_string();
        let mut next: Vec<usize> = cur
            .iter()
            .flat_map(|&s| succ[s].iter())
            .filter(|(lab, _)| matches!(lab, Label::Act(b) if b.to_string() == key))
            .map(|&(_, t)| t)
            .collect();
        next.sort_unstable();
        next.dedup();
        if weak {
            tau_closure(&succ, &mut next);
        }
        if next.is_empty() {
            return false;
        }
        cur = next;
    }
    true
}

type Moves = BTreeMap<String, (Label, Vec<usize>)>;

fn visible_moves(set: &[usize], succ: &[Vec<(&Label, usize)>]) -> Moves {
    let mut out: Moves = BTreeMap::new();
    for &s in set {
        for &(lab, t) in &succ[s] {
            if !lab.is_tau() {
                out.entry(lab.observable_key())
                    .or_insert_with(|| (lab.clone(), Vec::new()))
                    .1
                    .push(t);
            }
        }
    }
    out
}

/// A shortest weak trace of `a` that `b` cannot perform, as the accepted
/// prefix and the first visible label `b` refuses. `None` if the weak traces
/// of `a` are included in those of `b` (or the search limit was hit).
pub fn weak_trace_inclusion(a: &Lts, b: &Lts) -> Option<(Vec<Label>, Label)> {
    let (sa, sb) = (a.successors(), b.successors());
    let mut start_a = vec![a.initial];
    let mut start_b = vec![b.initial];
    tau_closure(&sa, &mut start_a);
    tau_closure(&sb, &mut start_b);
    let mut seen: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    let mut queue: VecDeque<(Vec<usize>, Vec<usize>, Vec<Label>)> = VecDeque::new();
    seen.insert((start_a.clone(), start_b.clone()));
    queue.push_back((start_a, start_b, Vec::new()));
    while let Some((xa, xb, trace)) = queue.pop_front() {
        let ma = visible_moves(&xa, &sa);
        let mb = visible_moves(&xb, &sb);
        for (key, (lab, ta)) in ma {
            let Some((_, tb)) = mb.get(&key) else {
                return Some((trace, lab));
            };
            let mut na = ta;
            na.sort_unstable();
            na.dedup();
            tau_closure(&sa, &mut na);
            let mut nb = tb.clone();
            nb.sort_unstable();
            nb.dedup();
            tau_closure(&sb, &mut nb);
            if seen.len() < PAIR_LIMIT && seen.insert((na.clone(), nb.clone())) {
                let mut t = trace.clone();
                t.push(lab);
                queue.push_back((na, nb, t));
            }
        }
    }
    None
}

/// Weak-trace equality in both directions.
pub fn weak_trace_equivalent(a: &Lts, b: &Lts) -> bool {
    weak_trace_inclusion(a, b).is_none() && weak_trace_inclusion(b, a).is_none()
}
