//! Structural operational semantics.

use thiserror::Error;

use crate::term::{
    mk_abstract, mk_encap, mk_par, mk_seq, normalize, ActionLabel, CommFunction, Label, RecursiveSpec,
    Term, VarName,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unguarded recursion: {0} unfolds to itself without an action")]
    Unguarded(VarName),
    #[error("no equation for variable {0}")]
    UnknownVariable(VarName),
    #[error("state budget of {0} states exceeded")]
    BudgetExceeded(usize),
}

/// Transition rules over a fixed set of equations and communication function.
#[derive(Clone, Copy, Debug)]
pub struct Semantics<'a> {
    pub spec: &'a RecursiveSpec,
    pub comm: &'a CommFunction,
}

impl<'a> Semantics<'a> {
    pub fn new(spec: &'a RecursiveSpec, comm: &'a CommFunction) -> Self {
        Semantics { spec, comm }
    }

    /// Outgoing transitions of `t`, targets in normal form, sorted and
    /// without duplicates.
    pub fn step(&self, t: &Term) -> Result<Vec<(Label, Term)>, SemanticsError> {
        let mut out = self.moves(t, 0)?;
        for (_, target) in out.iter_mut() {
            *target = normalize(target);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn moves(&self, t: &Term, depth: usize) -> Result<Vec<(Label, Term)>, SemanticsError> {
        Ok(match t {
            Term::Deadlock | Term::Skip => Vec::new(),
            Term::Tau => vec![(Label::Tau, Term::Skip)],
            Term::Action(a) => vec![(Label::Act(a.clone()), Term::Skip)],
            Term::Alt(xs) => {
                let mut out = Vec::new();
                for x in xs.iter() {
                    out.extend(self.moves(x, depth)?);
                }
                out
            }
            Term::Seq(x, y) => self
                .moves(x, depth)?
                .into_iter()
                .map(|(l, x1)| (l, mk_seq(x1, (**y).clone())))
                .collect(),
            Term::Par(x, y) => {
                let xs = self.moves(x, depth)?;
                let ys = self.moves(y, depth)?;
                let mut out = Vec::new();
                for (l, x1) in &xs {
                    out.push((l.clone(), mk_par(x1.clone(), (**y).clone())));
                }
                for (l, y1) in &ys {
                    out.push((l.clone(), mk_par((**x).clone(), y1.clone())));
                }
                self.synchronise(&xs, &ys, true, true, &mut out);
                out
            }
            Term::LeftMerge(x, y) => self
                .moves(x, depth)?
                .into_iter()
                .map(|(l, x1)| (l, mk_par(x1, (**y).clone())))
                .collect(),
            Term::CommMerge(x, y) => {
                let mut out = Vec::new();
                self.synchronise(&self.moves(x, depth)?, &self.moves(y, depth)?, true, false, &mut out);
                out
            }
            Term::EntMerge(x, y) => {
                let mut out = Vec::new();
                self.synchronise(&self.moves(x, depth)?, &self.moves(y, depth)?, false, true, &mut out);
                out
            }
            Term::Encap(h, x) => self
                .moves(x, depth)?
                .into_iter()
                .filter(|(l, _)| match l {
                    Label::Act(a) => a.merged || !h.matches(a),
                    Label::Tau => true,
                })
                .map(|(l, x1)| (l, mk_encap(h, x1)))
                .collect(),
            Term::Abstract(i, x) => self
                .moves(x, depth)?
                .into_iter()
                .map(|(l, x1)| {
                    let l = match l {
                        Label::Act(a) if i.matches(&a) => Label::Tau,
                        l => l,
                    };
                    (l, mk_abstract(i, x1))
                })
                .collect(),
            Term::Var(v) => {
                if depth > self.spec.len() {
                    return Err(SemanticsError::Unguarded(v.clone()));
                }
                let body = self
                    .spec
                    .get(v)
                    .ok_or_else(|| SemanticsError::UnknownVariable(v.clone()))?;
                self.moves(body, depth + 1)?
            }
        })
    }

    fn synchronise(
        &self,
        xs: &[(Label, Term)],
        ys: &[(Label, Term)],
        communicate: bool,
        entangle: bool,
        out: &mut Vec<(Label, Term)>,
    ) {
        for (lx, x1) in xs {
            let Label::Act(a) = lx else { continue };
            for (ly, y1) in ys {
                let Label::Act(b) = ly else { continue };
                if let Some(c) = self.fuse(a, b, communicate, entangle) {
                    out.push((Label::Act(c), mk_par(x1.clone(), y1.clone())));
                }
            }
        }
    }

    fn fuse(&self, a: &ActionLabel, b: &ActionLabel, communicate: bool, entangle: bool) -> Option<ActionLabel> {
        if entangle && a.entangles_with(b) {
            let real = if a.shadow { b } else { a };
            return Some(real.as_merged());
        }
        if communicate && !a.shadow && !b.shadow {
            return self.comm.lookup(a, b).map(|c| c.as_merged());
        }
        None
    }
}
