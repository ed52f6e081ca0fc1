//! Recursive specifications and the guardedness check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::process::{normalize, Term, VarName};

/// A system of equations `X = t_X` over ground recursion variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursiveSpec {
    equations: BTreeMap<VarName, Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guardedness {
    pub guarded: bool,
    pub diagnostic: Option<String>,
}

impl RecursiveSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces an equation. Bodies are stored in normal form.
    pub fn insert(&mut self, var: VarName, body: Term) -> Option<Term> {
        self.equations.insert(var, normalize(&body))
    }

    pub fn get(&self, var: &VarName) -> Option<&Term> {
        self.equations.get(var)
    }

    pub fn contains(&self, var: &VarName) -> bool {
        self.equations.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Term)> {
        self.equations.iter()
    }

    pub fn extend(&mut self, other: RecursiveSpec) {
        self.equations.extend(other.equations);
    }

    /// Removes equations not reachable from `roots`.
    pub fn restrict_to_reachable<'a>(&self, roots: impl IntoIterator<Item = &'a VarName>) -> RecursiveSpec {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<VarName> = roots.into_iter().cloned().collect();
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            if let Some(body) = self.get(&v) {
                stack.extend(body.variables());
            }
        }
        RecursiveSpec {
            equations: self
                .equations
                .iter()
                .filter(|(k, _)| seen.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Variables referenced in some body but without an equation.
    pub fn free_variables(&self) -> Vec<VarName> {
        let mut out = BTreeSet::new();
        for body in self.equations.values() {
            for v in body.variables() {
                if !self.equations.contains_key(&v) {
                    out.insert(v);
                }
            }
        }
        out.into_iter().collect()
    }

    /// True iff every body is a sum of `a`, `tau`, `a . X` or `tau . X`.
    pub fn is_linear(&self) -> bool {
        self.equations.values().all(|body| {
            body.summands().into_iter().all(|s| match s {
                Term::Action(_) | Term::Tau => true,
                Term::Seq(a, x) => {
                    matches!(**a, Term::Action(_) | Term::Tau) && matches!(**x, Term::Var(_))
                }
                _ => false,
            })
        })
    }

    pub fn check_guarded(&self) -> Guardedness {
        check_guarded(self)
    }
}

impl fmt::Display for RecursiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, body) in &self.equations {
            writeln!(f, "{v} = {body}")?;
        }
        Ok(())
    }
}

/// Whether a term may terminate without performing an action.
fn nullable(t: &Term) -> bool {
    match t {
        Term::Skip => true,
        Term::Alt(xs) => xs.iter().any(nullable),
        Term::Seq(x, y) | Term::Par(x, y) => nullable(x) && nullable(y),
        Term::Encap(_, x) | Term::Abstract(_, x) => nullable(x),
        _ => false,
    }
}

/// Variables with an occurrence not preceded by an action.
pub(crate) fn unguarded_occurrences(t: &Term, out: &mut Vec<VarName>) {
    match t {
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::Alt(xs) => xs.iter().for_each(|x| unguarded_occurrences(x, out)),
        Term::Seq(x, y) => {
            unguarded_occurrences(x, out);
            if nullable(x) {
                unguarded_occurrences(y, out);
            }
        }
        Term::Par(x, y) | Term::LeftMerge(x, y) | Term::CommMerge(x, y) | Term::EntMerge(x, y) => {
            unguarded_occurrences(x, out);
            unguarded_occurrences(y, out);
        }
        Term::Encap(_, x) | Term::Abstract(_, x) => unguarded_occurrences(x, out),
        Term::Deadlock | Term::Skip | Term::Tau | Term::Action(_) => {}
    }
}

/// A specification is guarded when no chain of unguarded variable
/// occurrences loops back on itself. The diagnostic names the first
/// offending occurrence as `"Y unguarded in X"`.
pub fn check_guarded(spec: &RecursiveSpec) -> Guardedness {
    let mut edges: BTreeMap<&VarName, Vec<VarName>> = BTreeMap::new();
    for (v, body) in spec.iter() {
        let mut occ = Vec::new();
        unguarded_occurrences(body, &mut occ);
        occ.retain(|w| spec.contains(w));
        edges.insert(v, occ);
    }

    // Depth-first search for a cycle; colour 1 = on stack, 2 = done.
    let mut colour: BTreeMap<&VarName, u8> = BTreeMap::new();
    for start in edges.keys() {
        if colour.contains_key(start) {
            continue;
        }
        let mut stack: Vec<(&VarName, usize)> = vec![(start, 0)];
        colour.insert(start, 1);
        while let Some((v, i)) = stack.pop() {
            let succ = &edges[v];
            if i < succ.len() {
                stack.push((v, i + 1));
                let w = edges.get_key_value(&succ[i]).map(|(k, _)| *k).unwrap();
                match colour.get(w) {
                    Some(1) => {
                        return Guardedness {
                            guarded: false,
                            diagnostic: Some(format!("{w} unguarded in {v}")),
                        }
                    }
                    Some(_) => {}
                    None => {
                        colour.insert(w, 1);
                        stack.push((w, 0));
                    }
                }
            } else {
                colour.insert(v, 2);
            }
        }
    }
    Guardedness {
        guarded: true,
        diagnostic: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::label::ActionLabel;

    fn a() -> Term {
        Term::action(ActionLabel::new("a", vec![]))
    }

    fn x() -> Term {
        Term::var(VarName::plain("X"))
    }

    #[test]
    fn single_guarded_loop() {
        let mut spec = RecursiveSpec::new();
        spec.insert(VarName::plain("X"), Term::seq(a(), x()));
        let g = check_guarded(&spec);
        assert!(g.guarded);
        assert!(g.diagnostic.is_none());
        assert!(spec.is_linear());
    }

    #[test]
    fn direct_self_reference_is_unguarded() {
        let mut spec = RecursiveSpec::new();
        spec.insert(VarName::plain("X"), Term::alt(x(), Term::seq(a(), x())));
        let g = check_guarded(&spec);
        assert!(!g.guarded);
        assert_eq!(g.diagnostic.as_deref(), Some("X unguarded in X"));
    }

    #[test]
    fn indirect_cycle_is_unguarded() {
        let mut spec = RecursiveSpec::new();
        let y = Term::var(VarName::plain("Y"));
        spec.insert(VarName::plain("X"), Term::alt(y.clone(), a()));
        spec.insert(VarName::plain("Y"), Term::par(x(), a()));
        assert!(!check_guarded(&spec).guarded);
    }

    #[test]
    fn unguarded_but_acyclic_is_fine() {
        let mut spec = RecursiveSpec::new();
        spec.insert(VarName::plain("X"), Term::var(VarName::plain("Y")));
        spec.insert(VarName::plain("Y"), Term::seq(a(), x()));
        assert!(check_guarded(&spec).guarded);
        assert!(!spec.is_linear());
    }
}
