//! Shared generators and naive reference implementations for the
//! integration and acceptance tests.
#![allow(dead_code)]

use proptest::prelude::*;
use qacp::semantics::Lts;
use qacp::term::{
    ActionLabel, ActionSet, CommFunction, CommRule, DataValue, Label, LabelPattern, LabelTemplate,
    RecursiveSpec, TemplateArg, Term, VarName,
};
use rand::Rng;

pub fn act(name: &str) -> ActionLabel {
    ActionLabel::new(name, vec![])
}

/// `""` is τ.
pub fn label(name: &str) -> Label {
    if name.is_empty() || name == "tau" {
        Label::Tau
    } else {
        Label::Act(act(name))
    }
}

pub fn lts(n: usize, edges: &[(usize, &str, usize)]) -> Lts {
    Lts::from_edges(0, n, edges.iter().map(|&(s, l, t)| (s, label(l), t)))
}

pub fn with_initial(l: &Lts, initial: usize) -> Lts {
    let mut out = l.clone();
    out.initial = initial;
    out
}

// ---------------------------------------------------------------------------
// Naive reference relations, all by greatest-fixpoint iteration over a
// boolean matrix. Quadratic memory, no partitions, no SCC contraction.

struct Moves {
    n: usize,
    out: Vec<Vec<(String, usize)>>,
    terminal: Vec<bool>,
}

impl Moves {
    fn of(l: &Lts) -> Moves {
        let mut out = vec![Vec::new(); l.num_states()];
        for t in &l.transitions {
            out[t.source].push((t.label.observable_key(), t.target));
        }
        Moves {
            n: l.num_states(),
            out,
            terminal: l.terminal.clone(),
        }
    }

    /// States reachable by zero or more τ-steps, for every state.
    fn tau_closure(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|s| {
                let mut seen = vec![false; self.n];
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(u) = stack.pop() {
                    for (a, v) in &self.out[u] {
                        if a == "tau" && !seen[*v] {
                            seen[*v] = true;
                            stack.push(*v);
                        }
                    }
                }
                (0..self.n).filter(|&v| seen[v]).collect()
            })
            .collect()
    }
}

pub fn naive_strong(l: &Lts) -> Vec<Vec<bool>> {
    let m = Moves::of(l);
    let mut r = vec![vec![true; m.n]; m.n];
    loop {
        let mut changed = false;
        for s in 0..m.n {
            for t in 0..m.n {
                if !r[s][t] {
                    continue;
                }
                let sim = |x: usize, y: usize, r: &Vec<Vec<bool>>| {
                    m.terminal[x] == m.terminal[y]
                        && m.out[x]
                            .iter()
                            .all(|(a, x1)| m.out[y].iter().any(|(b, y1)| a == b && r[*x1][*y1]))
                };
                if !(sim(s, t, &r) && sim(t, s, &r)) {
                    r[s][t] = false;
                    r[t][s] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Divergence-insensitive branching bisimilarity; successful termination
/// must be reachable by inert τ-steps on the other side.
pub fn naive_branching(l: &Lts) -> Vec<Vec<bool>> {
    let m = Moves::of(l);
    let closure = m.tau_closure();
    let mut r = vec![vec![true; m.n]; m.n];
    loop {
        let mut changed = false;
        for s in 0..m.n {
            for t in 0..m.n {
                if !r[s][t] {
                    continue;
                }
                let sim = |x: usize, y: usize, r: &Vec<Vec<bool>>| {
                    let term_ok = !m.terminal[x] || closure[y].iter().any(|&y2| m.terminal[y2] && r[x][y2]);
                    term_ok
                        && m.out[x].iter().all(|(a, x1)| {
                            (a == "tau" && r[*x1][y])
                                || closure[y].iter().any(|&y2| {
                                    r[x][y2] && m.out[y2].iter().any(|(b, y1)| a == b && r[*x1][*y1])
                                })
                        })
                };
                if !(sim(s, t, &r) && sim(t, s, &r)) {
                    r[s][t] = false;
                    r[t][s] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Rooted branching bisimilarity of `s` and `t` given the branching relation.
pub fn naive_rooted(l: &Lts, branching: &[Vec<bool>], s: usize, t: usize) -> bool {
    let m = Moves::of(l);
    let sim = |x: usize, y: usize| {
        m.out[x]
            .iter()
            .all(|(a, x1)| m.out[y].iter().any(|(b, y1)| a == b && branching[*x1][*y1]))
    };
    m.terminal[s] == m.terminal[t] && sim(s, t) && sim(t, s)
}

/// Disjoint union with the second LTS's states shifted by `l1.num_states()`.
pub fn disjoint_union(l1: &Lts, l2: &Lts) -> Lts {
    let off = l1.num_states();
    let mut names = l1.names.clone();
    names.extend(l2.names.iter().cloned());
    let mut terminal = l1.terminal.clone();
    terminal.extend(l2.terminal.iter().copied());
    let mut transitions = l1.transitions.clone();
    transitions.extend(l2.transitions.iter().map(|t| qacp::semantics::Transition {
        source: t.source + off,
        label: t.label.clone(),
        target: t.target + off,
    }));
    let mut out = Lts {
        initial: l1.initial,
        names,
        terminal,
        transitions,
    };
    out.canonicalize();
    out
}

// ---------------------------------------------------------------------------
// Random LTSs.

pub const LABELS_TAU_AB: [&str; 3] = ["tau", "a", "b"];

pub fn random_lts<R: Rng>(rng: &mut R, n: usize, labels: &[&str], density: f64) -> Lts {
    let mut edges = Vec::new();
    for s in 0..n {
        for l in labels {
            for t in 0..n {
                if rng.gen_bool(density) {
                    edges.push((s, label(l), t));
                }
            }
        }
    }
    let mut out = Lts::from_edges(0, n, edges);
    for s in 0..n {
        if rng.gen_bool(0.1) {
            out.terminal[s] = true;
        }
    }
    out
}

/// Adds τ-cycles through randomly chosen states.
pub fn inject_tau_cycles<R: Rng>(rng: &mut R, l: &Lts, cycles: usize) -> Lts {
    let n = l.num_states();
    let mut edges: Vec<(usize, Label, usize)> =
        l.transitions.iter().map(|t| (t.source, t.label.clone(), t.target)).collect();
    for _ in 0..cycles {
        let len = rng.gen_range(1..=n.min(3));
        let nodes: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        for i in 0..len {
            edges.push((nodes[i], Label::Tau, nodes[(i + 1) % len]));
        }
    }
    let mut out = Lts::from_edges(l.initial, n, edges);
    out.terminal = l.terminal.clone();
    out
}

pub fn arb_lts(max_states: usize, labels: &'static [&'static str]) -> impl Strategy<Value = Lts> {
    (1..=max_states).prop_flat_map(move |n| {
        let edge = (0..n, 0..labels.len(), 0..n);
        (
            Just(n),
            proptest::collection::vec(edge, 0..=(2 * n + 2)),
            proptest::collection::vec(proptest::bool::weighted(0.1), n),
            0..n,
        )
            .prop_map(move |(n, edges, terminal, init)| {
                let mut l = Lts::from_edges(init, n, edges.into_iter().map(|(s, a, t)| (s, label(labels[a]), t)));
                l.terminal = terminal;
                l
            })
    })
}

// ---------------------------------------------------------------------------
// Random terms and specifications.

pub const ACTIONS: [&str; 4] = ["a", "b", "c", "e"];

/// `a | b = c`.
pub fn small_comm() -> CommFunction {
    CommFunction::new([CommRule::new(
        LabelTemplate::new("a", Vec::<TemplateArg>::new()),
        LabelTemplate::new("b", Vec::new()),
        LabelTemplate::new("c", Vec::new()),
    )])
}

pub fn action_set(names: &[&str]) -> ActionSet {
    ActionSet::new(names.iter().map(|n| LabelPattern::any_args(*n)))
}

pub fn arb_action() -> impl Strategy<Value = ActionLabel> {
    (0..ACTIONS.len(), 0..3u32).prop_map(|(i, d)| match d {
        0 => ActionLabel::new(ACTIONS[i], vec![DataValue::Datum(1)]),
        _ => act(ACTIONS[i]),
    })
}

pub fn arb_set() -> impl Strategy<Value = ActionSet> {
    proptest::sample::subsequence(ACTIONS.to_vec(), 0..=ACTIONS.len()).prop_map(|names| action_set(&names))
}

/// Closed, recursion-free terms over every operator.
pub fn arb_closed_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => arb_action().prop_map(Term::Action),
        1 => Just(Term::Tau),
        1 => Just(Term::Deadlock),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::alt(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::seq(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::par(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::left_merge(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::comm_merge(x, y)),
            (arb_set(), inner.clone()).prop_map(|(h, x)| Term::encap(h, x)),
            (arb_set(), inner).prop_map(|(i, x)| Term::abstract_(i, x)),
        ]
    })
}

fn var(i: usize) -> Term {
    Term::var(VarName::plain(format!("X{i}")))
}

/// A body for one equation of a specification over `X0..X{k-1}`. Variables
/// occur only in tail position behind a visible action, so the specification
/// is guarded and finite-state.
fn arb_body(k: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        3 => (arb_action(), 0..k).prop_map(|(a, j)| Term::prefix(a, var(j))),
        1 => (arb_action(), 0..k).prop_map(|(a, j)| Term::seq(Term::Tau, Term::prefix(a, var(j)))),
        1 => arb_action().prop_map(Term::Action),
        1 => Just(Term::Tau),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::alt(x, y)),
            (arb_action(), inner.clone()).prop_map(|(a, x)| Term::prefix(a, x)),
            inner.prop_map(|x| Term::seq(Term::Tau, x)),
        ]
    })
}

/// A guarded specification over `X0..X{k-1}` with an entry term.
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub spec: RecursiveSpec,
    pub entry: Term,
}

pub fn arb_spec() -> impl Strategy<Value = RandomSpec> {
    (1..=3usize).prop_flat_map(|k| {
        (
            proptest::collection::vec(arb_body(k), k),
            0..k,
            0..k,
            0..4u8,
            arb_set(),
        )
            .prop_map(move |(bodies, i, j, shape, h)| {
                let mut spec = RecursiveSpec::new();
                for (n, b) in bodies.into_iter().enumerate() {
                    spec.insert(VarName::plain(format!("X{n}")), b);
                }
                let entry = match shape {
                    0 => var(i),
                    1 => Term::par(var(i), var(j)),
                    2 => Term::encap(h, Term::par(var(i), var(j))),
                    _ => Term::abstract_(h, Term::seq(var(i), var(j))),
                };
                RandomSpec { spec, entry }
            })
    })
}
