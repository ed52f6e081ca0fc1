//! Expansion of a parsed document over a finite data domain.

use std::collections::BTreeMap;

use super::ast::*;
use super::ParseError;
use crate::term::{
    ActionLabel, ActionSet, ArgPattern, Bit, CommFunction, CommRule, DataValue, LabelPattern, LabelTemplate,
    Model, RecursiveSpec, TemplateArg, Term, VarName,
};

/// Data domain size used when neither the document nor the caller fixes one.
pub const DEFAULT_DELTA: u32 = 2;

/// A document expanded into concrete equations over `d1..d{delta}`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub model: Model,
    pub sets: BTreeMap<String, ActionSet>,
    pub delta: u32,
}

pub(crate) fn literal(a: &Arg) -> Option<DataValue> {
    match a {
        Arg::Lit(v) => Some(v.clone()),
        Arg::Pair(x, y) => Some(DataValue::Pair(Box::new(literal(x)?), Box::new(literal(y)?))),
        _ => None,
    }
}

fn domain(sort: Sort, delta: u32) -> Vec<DataValue> {
    match sort {
        Sort::Bit => vec![DataValue::Bit(Bit::Zero), DataValue::Bit(Bit::One)],
        Sort::Data => (1..=delta).map(DataValue::Datum).collect(),
    }
}

struct Ctx<'a> {
    delta: u32,
    sets: &'a BTreeMap<String, ActionSet>,
}

type Env = Vec<(String, DataValue)>;

impl Ctx<'_> {
    fn value(&self, a: &Arg, env: &Env) -> Result<DataValue, ParseError> {
        let lookup = |x: &str| {
            env.iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| ParseError::semantic(format!("unknown parameter `{x}`"), Span::default()))
        };
        match a {
            Arg::Lit(DataValue::Datum(i)) if *i > self.delta => Err(ParseError::semantic(
                format!("datum d{i} is outside the data domain d1..d{}", self.delta),
                Span::default(),
            )),
            Arg::Lit(v) => Ok(v.clone()),
            Arg::Param(x) => lookup(x),
            Arg::Flip(x) => match lookup(x)? {
                DataValue::Bit(b) => Ok(DataValue::Bit(b.flip())),
                v => Err(ParseError::semantic(format!("cannot negate `{v}`"), Span::default())),
            },
            Arg::Pair(x, y) => Ok(DataValue::Pair(
                Box::new(self.value(x, env)?),
                Box::new(self.value(y, env)?),
            )),
            Arg::Any => Err(ParseError::semantic("wildcard in a term", Span::default())),
        }
    }

    fn set(&self, s: &SetExpr) -> Result<ActionSet, ParseError> {
        match s {
            SetExpr::Named(n) => self
                .sets
                .get(n)
                .cloned()
                .ok_or_else(|| ParseError::semantic(format!("unknown set `{n}`"), Span::default())),
            SetExpr::Literal(items) => set_from_items(items),
        }
    }

    fn term(&self, e: &Expr, env: &mut Env) -> Result<Term, ParseError> {
        let bin = |x: &Expr, y: &Expr, env: &mut Env| -> Result<(Term, Term), ParseError> {
            Ok((self.term(x, env)?, self.term(y, env)?))
        };
        Ok(match e {
            Expr::Delta => Term::Deadlock,
            Expr::Tau => Term::Tau,
            Expr::Action(l) => {
                let args = l
                    .args
                    .iter()
                    .flatten()
                    .map(|a| self.value(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                let label = ActionLabel::new(l.name.clone(), args);
                Term::action(if l.shadow { label.into_shadow() } else { label })
            }
            Expr::Call(n, args) => {
                let vals = args.iter().map(|a| self.value(a, env)).collect::<Result<Vec<_>, _>>()?;
                Term::var(VarName::new(n.clone(), vals))
            }
            Expr::Alt(x, y) => {
                let (x, y) = bin(x, y, env)?;
                Term::alt(x, y)
            }
            Expr::Seq(x, y) => {
                let (x, y) = bin(x, y, env)?;
                Term::seq(x, y)
            }
            Expr::Par(x, y) => {
                let (x, y) = bin(x, y, env)?;
                Term::par(x, y)
            }
            Expr::LeftMerge(x, y) => {
                let (x, y) = bin(x, y, env)?;
                Term::left_merge(x, y)
            }
            Expr::CommMerge(x, y) => {
                let (x, y) = bin(x, y, env)?;
                Term::comm_merge(x, y)
            }
            Expr::EntMerge(x, y) => {
                let (x, y) = bin(x, y, env)?;
                Term::ent_merge(x, y)
            }
            Expr::Encap(s, x) => Term::encap(self.set(s)?, self.term(x, env)?),
            Expr::Abstract(s, x) => Term::abstract_(self.set(s)?, self.term(x, env)?),
            Expr::Sum(v, sort, body) => {
                let mut items = Vec::new();
                for val in domain(*sort, self.delta) {
                    env.push((v.clone(), val));
                    let t = self.term(body, env);
                    env.pop();
                    items.push(t?);
                }
                Term::sum(items)
            }
            Expr::Name(n, sp) => {
                return Err(ParseError::semantic(format!("unresolved name `{n}`"), *sp));
            }
        })
    }
}

fn set_from_items(items: &[LabelExpr]) -> Result<ActionSet, ParseError> {
    let mut pats = Vec::new();
    for l in items {
        let mut p = match &l.args {
            None => LabelPattern::any_args(l.name.clone()),
            Some(args) => LabelPattern::new(
                l.name.clone(),
                args.iter()
                    .map(|a| match a {
                        Arg::Any => Ok(ArgPattern::Any),
                        a => literal(a).map(ArgPattern::Is).ok_or_else(|| {
                            ParseError::semantic(format!("set pattern argument `{a}` is not a value"), Span::default())
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        if l.shadow {
            p = p.shadowed();
        }
        pats.push(p);
    }
    Ok(ActionSet::new(pats))
}

fn template(l: &LabelExpr, span: Span) -> Result<LabelTemplate, ParseError> {
    let args = l
        .args
        .iter()
        .flatten()
        .map(|a| match a {
            Arg::Any => Ok(TemplateArg::Any),
            Arg::Param(x) => Ok(TemplateArg::Var(x.clone())),
            a => literal(a)
                .map(TemplateArg::Lit)
                .ok_or_else(|| ParseError::semantic(format!("unsupported rule argument `{a}`"), span)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabelTemplate::new(l.name.clone(), args))
}

/// Expands every equation for every parameter assignment. `delta` overrides
/// the document's declaration; the entry term is the `init` expression.
pub fn instantiate(doc: &SpecDocument, delta: Option<u32>) -> Result<Instance, ParseError> {
    let delta = delta.or(doc.delta).unwrap_or(DEFAULT_DELTA);
    if delta == 0 {
        return Err(ParseError::semantic("data domain size must be positive", Span::default()));
    }
    let mut sets = BTreeMap::new();
    for s in &doc.sets {
        sets.insert(s.name.clone(), set_from_items(&s.items)?.named(s.name.clone()));
    }
    let ctx = Ctx { delta, sets: &sets };
    let mut spec = RecursiveSpec::new();
    for eq in &doc.equations {
        let mut assignments: Vec<Env> = vec![Vec::new()];
        for p in &eq.params {
            assignments = assignments
                .into_iter()
                .flat_map(|env| {
                    domain(p.sort, delta).into_iter().map(move |v| {
                        let mut env = env.clone();
                        env.push((p.name.clone(), v));
                        env
                    })
                })
                .collect();
        }
        for mut env in assignments {
            let vals = env.iter().map(|(_, v)| v.clone()).collect();
            let body = ctx.term(&eq.body, &mut env).map_err(|mut e| {
                if e.line == 0 {
                    e.line = eq.span.line;
                    e.col = eq.span.col;
                }
                e
            })?;
            spec.insert(VarName::new(eq.name.clone(), vals), body);
        }
    }
    let rules = doc
        .comms
        .iter()
        .map(|c| {
            Ok(CommRule::new(
                template(&c.left, c.span)?,
                template(&c.right, c.span)?,
                template(&c.result, c.span)?,
            ))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    let mut model = Model::new(spec, CommFunction::new(rules));
    if let Some(init) = &doc.init {
        model = model.with_entry(crate::term::normalize(&ctx.term(init, &mut Vec::new())?));
    }
    Ok(Instance { model, sets, delta })
}
