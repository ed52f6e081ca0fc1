//! Communication functions (γ) given as rule families.

use std::collections::BTreeMap;
use std::fmt;

use super::data::{write_args, DataValue};
use super::label::ActionLabel;

/// Argument of a label template inside a communication rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateArg {
    Lit(DataValue),
    Var(String),
    Any,
}

impl fmt::Display for TemplateArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateArg::Lit(v) => write!(f, "{v}"),
            TemplateArg::Var(x) => f.write_str(x),
            TemplateArg::Any => f.write_str("*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelTemplate {
    pub name: String,
    pub args: Vec<TemplateArg>,
}

impl LabelTemplate {
    pub fn new(name: impl Into<String>, args: Vec<TemplateArg>) -> Self {
        LabelTemplate {
            name: name.into(),
            args,
        }
    }

    fn bind(&self, a: &ActionLabel, env: &mut BTreeMap<String, DataValue>) -> bool {
        if a.shadow || a.name != self.name || a.args.len() != self.args.len() {
            return false;
        }
        for (t, v) in self.args.iter().zip(&a.args) {
            match t {
                TemplateArg::Any => {}
                TemplateArg::Lit(w) => {
                    if w != v {
                        return false;
                    }
                }
                TemplateArg::Var(x) => match env.get(x) {
                    Some(w) if w != v => return false,
                    Some(_) => {}
                    None => {
                        env.insert(x.clone(), v.clone());
                    }
                },
            }
        }
        true
    }

    fn instantiate(&self, env: &BTreeMap<String, DataValue>) -> Option<ActionLabel> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                TemplateArg::Lit(v) => Some(v.clone()),
                TemplateArg::Var(x) => env.get(x).cloned(),
                TemplateArg::Any => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(ActionLabel::new(self.name.clone(), args))
    }
}

impl fmt::Display for LabelTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("[")?;
            write_args(f, &self.args)?;
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// `left | right = result`; variables shared between the templates must
/// bind to equal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommRule {
    pub left: LabelTemplate,
    pub right: LabelTemplate,
    pub result: LabelTemplate,
}

impl CommRule {
    pub fn new(left: LabelTemplate, right: LabelTemplate, result: LabelTemplate) -> Self {
        CommRule {
            left,
            right,
            result,
        }
    }

    fn apply_oriented(&self, a: &ActionLabel, b: &ActionLabel) -> Option<ActionLabel> {
        let mut env = BTreeMap::new();
        if self.left.bind(a, &mut env) && self.right.bind(b, &mut env) {
            self.result.instantiate(&env)
        } else {
            None
        }
    }
}

impl fmt::Display for CommRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} = {}", self.left, self.right, self.result)
    }
}

/// Partial, commutative γ. Pairs without a rule communicate to δ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommFunction {
    rules: Vec<CommRule>,
}

impl CommFunction {
    pub fn new(rules: impl IntoIterator<Item = CommRule>) -> Self {
        CommFunction {
            rules: rules.into_iter().collect(),
        }
    }

    pub fn rules(&self) -> &[CommRule] {
        &self.rules
    }

    /// γ(a, b), trying every rule in both orientations. Shadow constants
    /// never communicate; they only entangle.
    pub fn lookup(&self, a: &ActionLabel, b: &ActionLabel) -> Option<ActionLabel> {
        self.rules
            .iter()
            .find_map(|r| r.apply_oriented(a, b).or_else(|| r.apply_oriented(b, a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::data::Bit;

    fn channel_rule() -> CommFunction {
        let x = || vec![TemplateArg::Var("x".into())];
        CommFunction::new([CommRule::new(
            LabelTemplate::new("send_D", x()),
            LabelTemplate::new("receive_D", x()),
            LabelTemplate::new("C_D", x()),
        )])
    }

    #[test]
    fn matching_arguments_communicate() {
        let g = channel_rule();
        let s = ActionLabel::new("send_D", vec![DataValue::Bit(Bit::Zero)]);
        let r = ActionLabel::new("receive_D", vec![DataValue::Bit(Bit::Zero)]);
        let c = g.lookup(&s, &r).unwrap();
        assert_eq!(c.to_string(), "C_D[0]");
        assert_eq!(g.lookup(&r, &s), Some(c));
    }

    #[test]
    fn mismatched_arguments_yield_deadlock() {
        let g = channel_rule();
        let s = ActionLabel::new("send_D", vec![DataValue::Bit(Bit::Zero)]);
        let r = ActionLabel::new("receive_D", vec![DataValue::Err]);
        assert_eq!(g.lookup(&s, &r), None);
        assert_eq!(g.lookup(&s, &s), None);
    }
}
