//! Process terms and their canonical form.

use std::fmt;
use std::sync::Arc;

use super::data::{write_args, DataValue};
use super::label::{ActionLabel, ActionSet};

/// Name of a ground recursion variable, e.g. `S_1(0,d1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName {
    pub name: String,
    pub params: Vec<DataValue>,
}

impl VarName {
    pub fn new(name: impl Into<String>, params: Vec<DataValue>) -> Self {
        VarName {
            name: name.into(),
            params,
        }
    }

    pub fn plain(name: impl Into<String>) -> Self {
        VarName::new(name, Vec::new())
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.params)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A closed process term.
///
/// `Skip` is successful termination; it cannot be written in the surface
/// syntax and only appears as the residual of a final action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Deadlock,
    Skip,
    Tau,
    Action(ActionLabel),
    Alt(Arc<Vec<Term>>),
    Seq(Arc<Term>, Arc<Term>),
    Par(Arc<Term>, Arc<Term>),
    LeftMerge(Arc<Term>, Arc<Term>),
    CommMerge(Arc<Term>, Arc<Term>),
    EntMerge(Arc<Term>, Arc<Term>),
    Encap(Arc<ActionSet>, Arc<Term>),
    Abstract(Arc<ActionSet>, Arc<Term>),
    Var(VarName),
}

impl Term {
    pub fn action(a: ActionLabel) -> Term {
        Term::Action(a)
    }

    pub fn var(v: VarName) -> Term {
        Term::Var(v)
    }

    pub fn alt(x: Term, y: Term) -> Term {
        Term::Alt(Arc::new(vec![x, y]))
    }

    /// Sum of all summands; δ for an empty iterator.
    pub fn sum(items: impl IntoIterator<Item = Term>) -> Term {
        let items: Vec<Term> = items.into_iter().collect();
        match items.len() {
            0 => Term::Deadlock,
            1 => items.into_iter().next().unwrap(),
            _ => Term::Alt(Arc::new(items)),
        }
    }

    pub fn seq(x: Term, y: Term) -> Term {
        Term::Seq(Arc::new(x), Arc::new(y))
    }

    /// `a . x` for an action label.
    pub fn prefix(a: ActionLabel, x: Term) -> Term {
        Term::seq(Term::Action(a), x)
    }

    pub fn par(x: Term, y: Term) -> Term {
        Term::Par(Arc::new(x), Arc::new(y))
    }

    pub fn left_merge(x: Term, y: Term) -> Term {
        Term::LeftMerge(Arc::new(x), Arc::new(y))
    }

    pub fn comm_merge(x: Term, y: Term) -> Term {
        Term::CommMerge(Arc::new(x), Arc::new(y))
    }

    pub fn ent_merge(x: Term, y: Term) -> Term {
        Term::EntMerge(Arc::new(x), Arc::new(y))
    }

    pub fn encap(h: ActionSet, x: Term) -> Term {
        Term::Encap(Arc::new(h), Arc::new(x))
    }

    pub fn abstract_(i: ActionSet, x: Term) -> Term {
        Term::Abstract(Arc::new(i), Arc::new(x))
    }

    pub fn is_deadlock(&self) -> bool {
        matches!(self, Term::Deadlock)
    }

    /// All variables occurring in the term, in order of first occurrence.
    pub fn variables(&self) -> Vec<VarName> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarName>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Alt(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            Term::Seq(x, y)
            | Term::Par(x, y)
            | Term::LeftMerge(x, y)
            | Term::CommMerge(x, y)
            | Term::EntMerge(x, y) => {
                x.collect_vars(out);
                y.collect_vars(out);
            }
            Term::Encap(_, x) | Term::Abstract(_, x) => x.collect_vars(out),
            Term::Deadlock | Term::Skip | Term::Tau | Term::Action(_) => {}
        }
    }

    /// Summands of a top-level sum (the term itself if it is not a sum).
    pub fn summands(&self) -> Vec<&Term> {
        match self {
            Term::Alt(xs) => xs.iter().flat_map(|x| x.summands()).collect(),
            Term::Deadlock => Vec::new(),
            t => vec![t],
        }
    }
}

/// Canonical form: sums flattened, sorted, deduplicated and without δ;
/// sequences right-associated with `δ.x = δ` and `√.x = x`; parallel
/// operands ordered; `√` and `δ` absorbed where the axioms allow.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Deadlock | Term::Skip | Term::Tau | Term::Action(_) | Term::Var(_) => t.clone(),
        Term::Alt(xs) => mk_alt(xs.iter().map(normalize)),
        Term::Seq(x, y) => mk_seq(normalize(x), normalize(y)),
        Term::Par(x, y) => mk_par(normalize(x), normalize(y)),
        Term::LeftMerge(x, y) => mk_left_merge(normalize(x), normalize(y)),
        Term::CommMerge(x, y) => mk_comm_merge(normalize(x), normalize(y)),
        Term::EntMerge(x, y) => mk_ent_merge(normalize(x), normalize(y)),
        Term::Encap(h, x) => mk_encap(h, normalize(x)),
        Term::Abstract(i, x) => mk_abstract(i, normalize(x)),
    }
}

// The mk_* constructors assume normalized operands and return normalized terms.

pub(crate) fn mk_alt(items: impl IntoIterator<Item = Term>) -> Term {
    let mut flat = Vec::new();
    for it in items {
        match it {
            Term::Deadlock => {}
            Term::Alt(xs) => flat.extend(xs.iter().cloned()),
            other => flat.push(other),
        }
    }
    flat.sort();
    flat.dedup();
    match flat.len() {
        0 => Term::Deadlock,
        1 => flat.pop().unwrap(),
        _ => Term::Alt(Arc::new(flat)),
    }
}

pub(crate) fn mk_seq(x: Term, y: Term) -> Term {
    match x {
        Term::Deadlock => Term::Deadlock,
        Term::Skip => y,
        Term::Seq(a, b) => {
            let tail = mk_seq((*b).clone(), y);
            mk_seq((*a).clone(), tail)
        }
        x => {
            if y == Term::Skip {
                x
            } else {
                Term::Seq(Arc::new(x), Arc::new(y))
            }
        }
    }
}

pub(crate) fn mk_par(x: Term, y: Term) -> Term {
    match (x, y) {
        (Term::Skip, y) => y,
        (x, Term::Skip) => x,
        (x, y) => {
            if x <= y {
                Term::Par(Arc::new(x), Arc::new(y))
            } else {
                Term::Par(Arc::new(y), Arc::new(x))
            }
        }
    }
}

fn mk_left_merge(x: Term, y: Term) -> Term {
    match x {
        Term::Deadlock => Term::Deadlock,
        x => Term::LeftMerge(Arc::new(x), Arc::new(y)),
    }
}

fn mk_comm_merge(x: Term, y: Term) -> Term {
    if x.is_deadlock() || y.is_deadlock() {
        return Term::Deadlock;
    }
    if x <= y {
        Term::CommMerge(Arc::new(x), Arc::new(y))
    } else {
        Term::CommMerge(Arc::new(y), Arc::new(x))
    }
}

fn mk_ent_merge(x: Term, y: Term) -> Term {
    if x.is_deadlock() || y.is_deadlock() {
        return Term::Deadlock;
    }
    if x <= y {
        Term::EntMerge(Arc::new(x), Arc::new(y))
    } else {
        Term::EntMerge(Arc::new(y), Arc::new(x))
    }
}

pub(crate) fn mk_encap(h: &Arc<ActionSet>, x: Term) -> Term {
    match x {
        Term::Deadlock | Term::Skip | Term::Tau => x,
        x => Term::Encap(Arc::clone(h), Arc::new(x)),
    }
}

pub(crate) fn mk_abstract(i: &Arc<ActionSet>, x: Term) -> Term {
    match x {
        Term::Deadlock | Term::Skip | Term::Tau => x,
        x => Term::Abstract(Arc::clone(i), Arc::new(x)),
    }
}

// Display precedence: 0 sum, 1 merges, 2 sequence, 3 prefix operators, 4 atoms.
fn prec(t: &Term) -> u8 {
    match t {
        Term::Alt(_) => 0,
        Term::Par(..) | Term::LeftMerge(..) | Term::CommMerge(..) | Term::EntMerge(..) => 1,
        Term::Seq(..) => 2,
        Term::Encap(..) | Term::Abstract(..) => 3,
        _ => 4,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if prec(t) < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Deadlock => f.write_str("delta"),
            Term::Skip => f.write_str("skip"),
            Term::Tau => f.write_str("tau"),
            Term::Action(a) => write!(f, "{a}"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Alt(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write_operand(f, x, 1)?;
                }
                Ok(())
            }
            Term::Seq(x, y) => {
                write_operand(f, x, 3)?;
                f.write_str(" . ")?;
                write_operand(f, y, 2)
            }
            Term::Par(x, y) | Term::LeftMerge(x, y) | Term::CommMerge(x, y) | Term::EntMerge(x, y) => {
                let op = match self {
                    Term::Par(..) => "||",
                    Term::LeftMerge(..) => "_|",
                    Term::CommMerge(..) => "|",
                    _ => "><",
                };
                write_operand(f, x, 1)?;
                write!(f, " {op} ")?;
                write_operand(f, y, 2)
            }
            Term::Encap(h, x) => {
                write!(f, "encap {h} in ")?;
                write_operand(f, x, 3)
            }
            Term::Abstract(i, x) => {
                write!(f, "abstract {i} in ")?;
                write_operand(f, x, 3)
            }
        }
    }
}
