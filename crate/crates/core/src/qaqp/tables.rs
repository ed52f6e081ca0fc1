//! The reference derivation at a single datum `d1`: the two printed blocks
//! of encapsulated equations and the 40-equation linear specification `E`,
//! compared against the mechanically explored state space.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::semantics::{explore, Explored, Lts, Semantics};
use crate::syntax::{instantiate, parse};
use crate::term::{Bit, DataValue, Term, VarName};

/// The reference linear specification, with `send_P[B]` read as the
/// teleported datum.
pub const REFERENCE_E: &str = "\
delta 1

X_1 = sum d:data. read_Q[d].X_2
X_2 = C_D[0].X_3 + C_D[err].X_4
X_4 = C_D[err].X_2
X_3 = GEN[M,N].X_5
X_5 = C_D[M].X_6 + C_D[err].X_7
X_7 = (C_D[0] + C_D[err]).X_3
X_6 = Me[A,d1,kl].X_8
X_8 = sigma[kl,M].X_9
X_9 = C_D[M].X_10 + C_D[err].X_11
X_11 = GEN[M,N].X_12
X_12 = C_D[M].X_13 + C_D[err].X_7
X_13 = sigma[kl,M].X_9
X_10 = C_D[0].X_14 + C_D[err].X_15
X_15 = Me[M,N,kl].X_16
X_16 = sigma[kl,B].X_17
X_17 = send_P[d1].X_18
X_18 = (C_D[0] + C_D[err]).X_4
X_14 = Me[M,N,kl].X_19
X_19 = sigma[kl,B].X_20
X_20 = send_P[d1].Y_1

Y_1 = sum d:data. read_Q[d].Y_2
Y_2 = C_D[1].Y_3 + C_D[err].Y_4
Y_4 = C_D[err].Y_2
Y_3 = GEN[M,N].Y_5
Y_5 = C_D[M].Y_6 + C_D[err].Y_7
Y_7 = (C_D[1] + C_D[err]).Y_3
Y_6 = Me[A,d1,kl].Y_8
Y_8 = sigma[kl,M].Y_9
Y_9 = C_D[M].Y_10 + C_D[err].Y_11
Y_11 = GEN[M,N].Y_12
Y_12 = C_D[M].Y_13 + C_D[err].Y_7
Y_13 = sigma[kl,M].Y_9
Y_10 = C_D[1].Y_14 + C_D[err].Y_15
Y_15 = Me[M,N,kl].Y_16
Y_16 = sigma[kl,B].Y_17
Y_17 = send_P[d1].Y_18
Y_18 = (C_D[1] + C_D[err]).Y_4
Y_14 = Me[M,N,kl].Y_19
Y_19 = sigma[kl,B].Y_20
Y_20 = send_P[d1].X_1

init X_1
";

/// The two printed blocks, one equation per line, sums expanded.
/// Components without an explicit bit take the block's session bit.
const PRINTED_BLOCKS: [(Bit, &str); 2] = [
    (
        Bit::Zero,
        "\
S(0)||R(0) = read_Q[d1] S_1||R(0)
S_1||R(0) = C_D[0] S_2||R_2 + C_D[err] S_2||R_1
S_2||R_1 = C_D[err] S_1||R(0)
S_2||R_2 = GEN[M,N] S_2||R_3
S_2||R_3 = C_D[M] S_3||R_4 + C_D[err] S_1||R_4
S_1||R_4 = C_D[0] S_2||R_2 + C_D[err] S_2||R_2
S_3||R_4 = Me[A,d1,kl] S_4||R_5
S_4||R_5 = sigma[kl,M] S_5||R_6
S_5||R_6 = C_D[M] S_6||R_7 + C_D[err] S_6||R_2
S_6||R_2 = GEN[M,N] S_6||R_3
S_6||R_3 = C_D[M] S_4||R_4 + C_D[err] S_1||R_4
S_4||R_4 = sigma[kl,M] S_5||R_6
S_6||R_7 = C_D[0] S(1)||R_8 + C_D[err] S_1||R_8
S_1||R_8 = Me[M,N,kl] S_1||R_9
S_1||R_9 = sigma[kl,B] S_1||R_10
S_1||R_10 = send_P[d1] S_1||R(1)
S_1||R(1) = C_D[0] S_2||R_1 + C_D[err] S_2||R_1
S(1)||R_8 = Me[M,N,kl] S(1)||R_9
S(1)||R_9 = sigma[kl,B] S(1)||R_10
S(1)||R_10 = send_P[d1] S(1)||R(1)",
    ),
    (
        Bit::One,
        "\
S(1)||R(1) = read_Q[d1] S_1||R(1)
S_1||R(1) = C_D[1] S_2||R_2 + C_D[err] S_2||R_1
S_2||R_1 = C_D[err] S_1||R(1)
S_2||R_2 = GEN[M,N] S_2||R_3
S_2||R_3 = C_D[M] S_3||R_4 + C_D[err] S_1||R_4
S_1||R_4 = C_D[1] S_2||R_2 + C_D[err] S_2||R_2
S_3||R_4 = Me[A,d1,kl] S_4||R_5
S_4||R_5 = sigma[kl,M] S_5||R_6
S_5||R_6 = C_D[M] S_6||R_7 + C_D[err] S_6||R_2
S_6||R_2 = GEN[M,N] S_6||R_3
S_6||R_3 = C_D[M] S_4||R_4 + C_D[err] S_1||R_4
S_4||R_4 = sigma[kl,M] S_5||R_6
S_6||R_7 = C_D[1] S(0)||R_8 + C_D[err] S_1||R_8
S_1||R_8 = Me[M,N,kl] S_1||R_9
S_1||R_9 = sigma[kl,B] S_1||R_10
S_1||R_10 = send_P[d1] S_1||R(1)
S_1||R(0) = C_D[1] S_2||R_1 + C_D[err] S_2||R_1
S(0)||R_8 = Me[M,N,kl] S(0)||R_9
S(0)||R_9 = sigma[kl,B] S(0)||R_10
S(0)||R_10 = send_P[d1] S(0)||R(0)",
    ),
];

/// A participant state as printed: family name and, if written, its bit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Component {
    family: String,
    bit: Option<Bit>,
}

impl Component {
    fn parse(s: &str) -> Component {
        match s.split_once('(') {
            Some((f, rest)) => Component {
                family: f.to_string(),
                bit: Some(if rest.starts_with('1') { Bit::One } else { Bit::Zero }),
            },
            None => Component {
                family: s.to_string(),
                bit: None,
            },
        }
    }

    fn with_default(&self, b: Bit) -> (String, Bit) {
        (self.family.clone(), self.bit.unwrap_or(b))
    }
}

fn family_of(v: &VarName) -> String {
    v.name.strip_suffix('r').unwrap_or(&v.name).to_string()
}

fn bit_of(v: &VarName) -> Option<Bit> {
    match v.params.first() {
        Some(DataValue::Bit(b)) => Some(*b),
        _ => None,
    }
}

/// The (Alice, Bob) variables of an encapsulated state `encap H in (S.. || R..)`.
fn participants(t: &Term) -> Option<(VarName, VarName)> {
    let Term::Encap(_, inner) = t else { return None };
    let Term::Par(x, y) = &**inner else { return None };
    let (Term::Var(a), Term::Var(b)) = (&**x, &**y) else { return None };
    if a.name.starts_with('S') {
        Some((a.clone(), b.clone()))
    } else {
        Some((b.clone(), a.clone()))
    }
}

type Key = ((String, Bit), (String, Bit));

fn state_key(t: &Term) -> Option<Key> {
    let (a, b) = participants(t)?;
    Some(((family_of(&a), bit_of(&a)?), (family_of(&b), bit_of(&b)?)))
}

/// Outcome of checking one printed equation against every reachable state it names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrintedCheck {
    pub block: u8,
    pub line: usize,
    pub equation: String,
    pub matched_states: usize,
    pub ok: bool,
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub derived_states: usize,
    pub derived_transitions: usize,
    pub reference_states: usize,
    pub reference_transitions: usize,
    /// Derived and reference LTSs are isomorphic (equal summand sets up to renaming).
    pub isomorphic: bool,
    pub discrepancies: Vec<String>,
    pub printed: Vec<PrintedCheck>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.derived_states == self.reference_states && self.isomorphic
    }

    pub fn printed_mismatches(&self) -> impl Iterator<Item = &PrintedCheck> {
        self.printed.iter().filter(|c| !c.ok)
    }
}

/// Explores the reference `E` from `X_1`.
pub fn reference_lts() -> Lts {
    let inst = instantiate(&parse(REFERENCE_E).expect("reference table parses"), Some(1)).expect("instantiates");
    let entry = inst.model.entry.clone().expect("entry");
    let sem = Semantics::new(&inst.model.spec, &inst.model.comm);
    explore(&sem, &entry, 1_000).expect("reference table explores").lts
}

fn check_printed(derived: &Explored) -> Vec<PrintedCheck> {
    let keys: Vec<Option<Key>> = derived.terms.iter().map(state_key).collect();
    let succ = derived.lts.successors();
    let mut out = Vec::new();
    for (block, text) in PRINTED_BLOCKS {
        for (i, line) in text.lines().enumerate() {
            let (lhs, rhs) = line.split_once(" = ").expect("printed line");
            let parse_pair = |s: &str| {
                let (a, b) = s.split_once("||").expect("pair");
                (Component::parse(a), Component::parse(b))
            };
            let (la, lb) = parse_pair(lhs);
            let (la_key, lb_key) = (la.with_default(block), lb.with_default(block));
            let summands: BTreeSet<(String, Key)> = rhs
                .split(" + ")
                .map(|s| {
                    let (label, pair) = s.split_once(' ').expect("summand");
                    let (ra, rb) = parse_pair(pair);
                    (label.to_string(), (ra.with_default(la_key.1), rb.with_default(lb_key.1)))
                })
                .collect();
            let want = (la_key, lb_key);
            let mut problems = Vec::new();
            let mut matched = 0;
            for (s, key) in keys.iter().enumerate() {
                if key.as_ref() != Some(&want) {
                    continue;
                }
                matched += 1;
                let got: BTreeSet<(String, Key)> = succ[s]
                    .iter()
                    .map(|&(l, t)| {
                        let k = keys[t].clone().unwrap_or_else(|| {
                            ((String::from("?"), Bit::Zero), (String::from("?"), Bit::Zero))
                        });
                        (l.observable_key(), k)
                    })
                    .collect();
                let show = |(l, ((a, ab), (b, bb))): &(String, Key)| {
                    format!("{l}.({a}[{}]||{b}[{}])", ab.as_u8(), bb.as_u8())
                };
                for m in summands.difference(&got) {
                    problems.push(format!("{}: printed {} not derivable", derived.lts.names[s], show(m)));
                }
                for m in got.difference(&summands) {
                    problems.push(format!("{}: derived {} not printed", derived.lts.names[s], show(m)));
                }
            }
            if matched == 0 {
                problems.push("no reachable state has this form".into());
            }
            out.push(PrintedCheck {
                block: block.as_u8(),
                line: i + 1,
                equation: line.to_string(),
                matched_states: matched,
                ok: problems.is_empty(),
                problems,
            });
        }
    }
    out
}

/// Follows equal labels from both initial states, pairing targets, and
/// reports every move or pairing that does not correspond.
fn correspondence(derived: &Lts, reference: &Lts, reference_names: &[String]) -> (bool, Vec<String>) {
    let (sd, sp) = (derived.successors(), reference.successors());
    let mut to_reference: HashMap<usize, usize> = HashMap::new();
    let mut to_derived: HashMap<usize, usize> = HashMap::new();
    let mut diffs = Vec::new();
    let mut queue = VecDeque::from([(derived.initial, reference.initial)]);
    to_reference.insert(derived.initial, reference.initial);
    to_derived.insert(reference.initial, derived.initial);
    while let Some((d, p)) = queue.pop_front() {
        let group = |moves: &[(&crate::term::Label, usize)]| {
            let mut m: BTreeMap<String, Vec<usize>> = BTreeMap::new();
            for &(l, t) in moves {
                m.entry(l.observable_key()).or_default().push(t);
            }
            m
        };
        let (gd, gp) = (group(&sd[d]), group(&sp[p]));
        for key in gd.keys().chain(gp.keys()).collect::<BTreeSet<_>>() {
            match (gd.get(key), gp.get(key)) {
                (Some(_), None) => diffs.push(format!(
                    "{} ~ {}: derived move {key} is not in the table",
                    derived.names[d], reference_names[p]
                )),
                (None, Some(_)) => diffs.push(format!(
                    "{} ~ {}: table move {key} is not derivable",
                    derived.names[d], reference_names[p]
                )),
                (Some(td), Some(tp)) => {
                    for (&x, &y) in td.iter().zip(tp.iter()) {
                        match (to_reference.get(&x), to_derived.get(&y)) {
                            (None, None) => {
                                to_reference.insert(x, y);
                                to_derived.insert(y, x);
                                queue.push_back((x, y));
                            }
                            (Some(&y2), _) if y2 == y => {}
                            (a, b) => {
                                diffs.push(format!(
                                    "{} ~ {}: {key} leads to {} and {}, which correspond to {} and {}",
                                    derived.names[d],
                                    reference_names[p],
                                    derived.names[x],
                                    reference_names[y],
                                    a.map_or("nothing".to_string(), |&i| reference_names[i].clone()),
                                    b.map_or("nothing".to_string(), |&i| derived.names[i].clone()),
                                ));
                            }
                        }
                    }
                }
                (None, None) => unreachable!(),
            }
        }
    }
    let iso = diffs.is_empty()
        && to_reference.len() == derived.num_states()
        && to_derived.len() == reference.num_states()
        && derived.num_transitions() == reference.num_transitions();
    (iso, diffs)
}

/// Compares the explored `encap H in (S(0) || R(0))` at one datum with the table.
pub fn compare_tables(derived: &Explored) -> TableReport {
    let reference = reference_lts();
    let names: Vec<String> = reference.names.clone();
    let (isomorphic, discrepancies) = correspondence(&derived.lts, &reference, &names);
    TableReport {
        derived_states: derived.lts.num_states(),
        derived_transitions: derived.lts.num_transitions(),
        reference_states: reference.num_states(),
        reference_transitions: reference.num_transitions(),
        isomorphic,
        discrepancies,
        printed: check_printed(derived),
    }
}
