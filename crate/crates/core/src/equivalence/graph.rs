//! Integer-labelled view of one or more LTSs used by the refinement
//! algorithms.

use std::collections::HashMap;

use crate::semantics::Lts;
use crate::term::Label;

pub(crate) const TAU: u32 = 0;
/// Successful termination, encoded as a move to a shared sink state.
pub(crate) const TICK: u32 = 1;

pub(crate) struct Graph {
    pub n: usize,
    /// Offset of each input LTS in the disjoint union.
    pub offsets: Vec<usize>,
    pub sink: usize,
    pub labels: Vec<Option<Label>>,
    pub succ: Vec<Vec<(u32, usize)>>,
    pub pred: Vec<Vec<(u32, usize)>>,
}

impl Graph {
    /// Disjoint union of `ltss` plus one sink state. Labels are identified by
    /// their printed form, so merge markers never distinguish states.
    pub fn union(ltss: &[&Lts]) -> Graph {
        let mut offsets = Vec::with_capacity(ltss.len());
        let mut n = 0;
        for l in ltss {
            offsets.push(n);
            n += l.num_states();
        }
        let sink = n;
        let n = n + 1;
        let mut labels: Vec<Option<Label>> = vec![Some(Label::Tau), None];
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (l, &off) in ltss.iter().zip(&offsets) {
            for t in &l.transitions {
                let id = match &t.label {
                    Label::Tau => TAU,
                    lab => *ids.entry(lab.observable_key()).or_insert_with(|| {
                        labels.push(Some(lab.clone()));
                        (labels.len() - 1) as u32
                    }),
                };
                succ[off + t.source].push((id, off + t.target));
                pred[off + t.target].push((id, off + t.source));
            }
            for (s, &term) in l.terminal.iter().enumerate() {
                if term {
                    succ[off + s].push((TICK, sink));
                    pred[sink].push((TICK, off + s));
                }
            }
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Graph {
            n,
            offsets,
            sink,
            labels,
            succ,
            pred,
        }
    }

    pub fn label(&self, id: u32) -> Label {
        self.labels[id as usize].clone().unwrap_or(Label::Tau)
    }

    /// Contracts τ-strongly-connected components. Returns the component of each
    /// state and the contracted graph, which has no τ-cycles.
    pub fn contract_tau_sccs(&self) -> (Vec<usize>, Graph) {
        let comp = tau_sccs(self.n, |s| {
            self.succ[s].iter().filter(|(a, _)| *a == TAU).map(|&(_, t)| t)
        });
        let m = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut succ = vec![Vec::new(); m];
        let mut pred = vec![Vec::new(); m];
        for s in 0..self.n {
            for &(a, t) in &self.succ[s] {
                let (cs, ct) = (comp[s], comp[t]);
                if a == TAU && cs == ct {
                    continue;
                }
                succ[cs].push((a, ct));
                pred[ct].push((a, cs));
            }
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let g = Graph {
            n: m,
            offsets: Vec::new(),
            sink: comp[self.sink],
            labels: self.labels.clone(),
            succ,
            pred,
        };
        (comp, g)
    }
}

/// Iterative Tarjan. Components are numbered in order of their smallest
/// member so the result is deterministic.
pub(crate) fn tau_sccs<I, F>(n: usize, succ: F) -> Vec<usize>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw = vec![UNVISITED; n];
    let mut next_index = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root).collect(), 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, children, pos)) = call.last_mut() {
            let v = *v;
            if *pos < children.len() {
                let w = children[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w).collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((u, _, _)) = call.last() {
                    low[*u] = low[*u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        raw[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    let mut renumber = vec![UNVISITED; ncomp];
    let mut next = 0;
    raw.iter()
        .map(|&c| {
            if renumber[c] == UNVISITED {
                renumber[c] = next;
                next += 1;
            }
            renumber[c]
        })
        .collect()
}
