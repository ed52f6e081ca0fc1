//! Strong and (rooted) branching bisimulation, quotients, τ-cluster collapse
//! and trace comparison.

mod graph;
mod partition;
mod refine;
mod traces;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::semantics::{Lts, Transition};
use crate::term::Label;
use graph::{Graph, TAU, TICK};

pub use partition::{Partition, PartitionKind};
pub use traces::{accepts_trace, weak_trace_equivalent, weak_trace_inclusion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// A move one side can make after `trace` that the other side cannot match.
/// `unmatched == None` only if no single distinguishing move was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trace: Vec<Label>,
    pub side: Side,
    pub unmatched: Option<Label>,
    /// True when `trace` followed by `unmatched` is a weak trace of one side only.
    pub trace_difference: bool,
}

fn write_trace(f: &mut fmt::Formatter<'_>, trace: &[Label]) -> fmt::Result {
    if trace.is_empty() {
        return f.write_str("<empty>");
    }
    for (i, l) in trace.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{}", label_text(l))?;
    }
    Ok(())
}

pub(crate) fn label_text(l: &Label) -> String {
    match l {
        Label::Tau => "tau".into(),
        Label::Act(a) => a.to_string(),
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (me, other) = match self.side {
            Side::Left => ("left", "right"),
            Side::Right => ("right", "left"),
        };
        f.write_str("after ")?;
        write_trace(f, &self.trace)?;
        match &self.unmatched {
            Some(l) if self.trace_difference => write!(
                f,
                ", the {me} side can perform {} but the {other} side cannot (weak trace difference)",
                label_text(l)
            ),
            Some(l) => write!(
                f,
                ", the {me} side can perform {} and the {other} side has no matching move",
                label_text(l)
            ),
            None => write!(f, ", the initial states are in different blocks"),
        }
    }
}

impl Serialize for Counterexample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Counterexample", 4)?;
        st.serialize_field("trace", &self.trace.iter().map(label_text).collect::<Vec<_>>())?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("unmatched", &self.unmatched.as_ref().map(label_text))?;
        st.serialize_field("description", &self.to_string())?;
        st.end()
    }
}

/// Result of comparing two LTSs. `partition` ranges over the disjoint union:
/// states of the left LTS first, then `offset..` for the right one.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub equivalent: bool,
    pub partition: Partition,
    pub offset: usize,
    pub counterexample: Option<Counterexample>,
}

fn union_partition(kind: PartitionKind, g: &Graph, blocks: &[usize]) -> Partition {
    Partition::from_block_of(kind, blocks[..g.sink].to_vec())
}

/// Coarsest strong bisimulation of a single LTS.
pub fn strong_partition(l: &Lts) -> Partition {
    let g = Graph::union(&[l]);
    union_partition(PartitionKind::Strong, &g, &refine::strong_blocks(&g))
}

/// Coarsest divergence-insensitive branching bisimulation of a single LTS.
pub fn branching_partition(l: &Lts) -> Partition {
    let g = Graph::union(&[l]);
    union_partition(PartitionKind::Branching, &g, &refine::branching_blocks(&g))
}

pub fn strong_bisim(l1: &Lts, l2: &Lts) -> Verdict {
    let g = Graph::union(&[l1, l2]);
    let blocks = refine::strong_blocks(&g);
    let (i1, i2) = (l1.initial, g.offsets[1] + l2.initial);
    let equivalent = blocks[i1] == blocks[i2];
    let counterexample = (!equivalent).then(|| distinguish(&g, &blocks, i1, i2, false));
    Verdict {
        equivalent,
        partition: union_partition(PartitionKind::Strong, &g, &blocks),
        offset: g.offsets[1],
        counterexample,
    }
}

/// Branching bisimilarity of the initial states; with `rooted`, initial moves
/// (τ included) must be matched by a single move into the same block.
pub fn branching_bisim(l1: &Lts, l2: &Lts, rooted: bool) -> Verdict {
    let g = Graph::union(&[l1, l2]);
    let blocks = refine::branching_blocks(&g);
    let (i1, i2) = (l1.initial, g.offsets[1] + l2.initial);
    let mut counterexample = None;
    let mut equivalent = blocks[i1] == blocks[i2];
    if equivalent && rooted {
        if let Some((side, lab)) = root_mismatch(&g, &blocks, i1, i2) {
            equivalent = false;
            counterexample = Some(Counterexample {
                trace: Vec::new(),
                side,
                unmatched: Some(lab),
                trace_difference: false,
            });
        }
    }
    if !equivalent && counterexample.is_none() {
        counterexample = Some(
            trace_counterexample(l1, l2).unwrap_or_else(|| distinguish(&g, &blocks, i1, i2, true)),
        );
    }
    Verdict {
        equivalent,
        partition: union_partition(PartitionKind::Branching, &g, &blocks),
        offset: g.offsets[1],
        counterexample,
    }
}

fn trace_counterexample(l1: &Lts, l2: &Lts) -> Option<Counterexample> {
    let mk = |side, (trace, lab): (Vec<Label>, Label)| Counterexample {
        trace,
        side,
        unmatched: Some(lab),
        trace_difference: true,
    };
    let left = weak_trace_inclusion(l1, l2).map(|c| mk(Side::Left, c));
    let right = weak_trace_inclusion(l2, l1).map(|c| mk(Side::Right, c));
    match (left, right) {
        (Some(a), Some(b)) => Some(if b.trace.len() < a.trace.len() { b } else { a }),
        (a, b) => a.or(b),
    }
}

fn root_mismatch(g: &Graph, blocks: &[usize], i1: usize, i2: usize) -> Option<(Side, Label)> {
    for (side, p, q) in [(Side::Left, i1, i2), (Side::Right, i2, i1)] {
        for &(a, t) in &g.succ[p] {
            if !g.succ[q].iter().any(|&(b, u)| b == a && blocks[u] == blocks[t]) {
                return Some((side, tick_or(g, a)));
            }
        }
    }
    None
}

fn tick_or(g: &Graph, a: u32) -> Label {
    if a == TICK {
        Label::Act(crate::term::ActionLabel::new("terminate", Vec::new()))
    } else {
        g.label(a)
    }
}

/// States `q` can reach by answering `a`: in branching mode after τ-moves
/// inside its own block, and a τ-move may also be answered by staying.
fn answers(g: &Graph, blocks: &[usize], q: usize, a: u32, branching: bool) -> Vec<usize> {
    let mut out = Vec::new();
    if branching && a == TAU {
        out.push(q);
    }
    let mut frontier = vec![q];
    let mut seen: HashSet<usize> = HashSet::from([q]);
    while let Some(r) = frontier.pop() {
        for &(b, u) in &g.succ[r] {
            if b == a {
                out.push(u);
            }
            if branching && b == TAU && blocks[u] == blocks[q] && seen.insert(u) {
                frontier.push(u);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Breadth-first search over pairs of states in different blocks, reached by
/// answered moves, for a move the other side cannot answer. The first pass
/// looks for a label the other side cannot perform at all; the second
/// requires answers to land in the same block.
fn distinguish(g: &Graph, blocks: &[usize], i1: usize, i2: usize, branching: bool) -> Counterexample {
    for by_block in [false, true] {
        let mut seen = HashSet::from([(i1, i2)]);
        let mut queue = VecDeque::from([(i1, i2, Vec::<Label>::new())]);
        while let Some((p, q, trace)) = queue.pop_front() {
            let mut next = Vec::new();
            for (side, x, y) in [(Side::Left, p, q), (Side::Right, q, p)] {
                for &(a, t) in &g.succ[x] {
                    if branching && a == TAU && blocks[t] == blocks[x] {
                        continue;
                    }
                    let ans = answers(g, blocks, y, a, branching);
                    let ok: Vec<usize> = if by_block {
                        ans.into_iter().filter(|&u| blocks[u] == blocks[t]).collect()
                    } else {
                        ans
                    };
                    if ok.is_empty() {
                        return Counterexample {
                            trace,
                            side,
                            unmatched: Some(tick_or(g, a)),
                            trace_difference: false,
                        };
                    }
                    for u in ok {
                        let pair = if side == Side::Left { (t, u) } else { (u, t) };
                        if blocks[pair.0] != blocks[pair.1] {
                            next.push((pair, a));
                        }
                    }
                }
            }
            for (pair, a) in next {
                if seen.insert(pair) {
                    let mut t = trace.clone();
                    t.push(g.label(a));
                    queue.push_back((pair.0, pair.1, t));
                }
            }
        }
    }
    Counterexample {
        trace: Vec::new(),
        side: Side::Left,
        unmatched: None,
        trace_difference: false,
    }
}

/// One state per block; transitions deduplicated. For branching partitions,
/// τ-moves inside a block are inert and dropped.
pub fn quotient(l: &Lts, p: &Partition) -> Lts {
    assert_eq!(p.num_states(), l.num_states(), "partition does not match the LTS");
    let n = p.num_blocks();
    let names = p.blocks().iter().map(|b| l.names[b[0]].clone()).collect();
    let terminal = p.blocks().iter().map(|b| b.iter().any(|&s| l.terminal[s])).collect();
    let transitions = l
        .transitions
        .iter()
        .filter_map(|t| {
            let (s, d) = (p.block_of(t.source), p.block_of(t.target));
            let inert = p.kind == PartitionKind::Branching && t.label.is_tau() && s == d;
            (!inert).then(|| Transition {
                source: s,
                label: t.label.clone(),
                target: d,
            })
        })
        .collect();
    let mut q = Lts {
        initial: p.block_of(l.initial),
        names,
        terminal,
        transitions,
    };
    debug_assert!(q.initial < n);
    q.canonicalize();
    q
}

/// Collapses every τ-cluster (a τ-SCC with more than one state, or a state
/// with a τ self-loop) into one state carrying the exits of all its members.
///
/// If the initial state lies in a cluster it keeps a separate copy with only
/// its own outgoing moves, so the result stays rooted-branching-bisimilar.
pub fn cfar_collapse(l: &Lts) -> Lts {
    let succ = l.successors();
    let comp = graph::tau_sccs(l.num_states(), |s| {
        succ[s].iter().filter(|(lab, _)| lab.is_tau()).map(|&(_, t)| t)
    });
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut size = vec![0usize; ncomp];
    for &c in &comp {
        size[c] += 1;
    }
    let self_loop: HashSet<usize> = l
        .transitions
        .iter()
        .filter(|t| t.label.is_tau() && t.source == t.target)
        .map(|t| t.source)
        .collect();
    let in_cluster = |s: usize| size[comp[s]] > 1 || self_loop.contains(&s);
    let mut names = vec![String::new(); ncomp];
    let mut terminal = vec![false; ncomp];
    for (s, &c) in comp.iter().enumerate() {
        if names[c].is_empty() {
            names[c] = l.names[s].clone();
        } else {
            names[c] = format!("{}+{}", names[c], l.names[s]);
        }
        terminal[c] |= l.terminal[s];
    }
    let mut transitions: Vec<Transition> = l
        .transitions
        .iter()
        .filter(|t| !(t.label.is_tau() && comp[t.source] == comp[t.target]))
        .map(|t| Transition {
            source: comp[t.source],
            label: t.label.clone(),
            target: comp[t.target],
        })
        .collect();
    let mut initial = comp[l.initial];
    if in_cluster(l.initial) {
        let root = ncomp;
        names.push(format!("{}'", l.names[l.initial]));
        terminal.push(l.terminal[l.initial]);
        transitions.extend(l.transitions.iter().filter(|t| t.source == l.initial).map(|t| Transition {
            source: root,
            label: t.label.clone(),
            target: comp[t.target],
        }));
        initial = root;
    }
    let mut out = Lts {
        initial,
        names,
        terminal,
        transitions,
    };
    out.canonicalize();
    out
}
