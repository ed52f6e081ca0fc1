//! Action labels, label patterns and pattern sets (the H and I of `encap`/`abstract`).

use std::fmt;

use serde::Serialize;

use super::data::{write_args, DataValue};

/// An observable action `name[args]`.
///
/// `shadow` marks a shadow constant `@shadow(a)` that only ever fires by
/// fusing with the real action `a` in a parallel partner. `merged` records
/// that the label was produced by a communication or entanglement merge;
/// it is provenance only and never part of the observable identity (see
/// [`ActionLabel::observable`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ActionLabel {
    pub name: String,
    pub args: Vec<DataValue>,
    pub shadow: bool,
    pub merged: bool,
}

impl ActionLabel {
    pub fn new(name: impl Into<String>, args: Vec<DataValue>) -> Self {
        ActionLabel {
            name: name.into(),
            args,
            shadow: false,
            merged: false,
        }
    }

    pub fn shadow_of(name: impl Into<String>, args: Vec<DataValue>) -> Self {
        ActionLabel {
            shadow: true,
            ..ActionLabel::new(name, args)
        }
    }

    pub fn into_shadow(mut self) -> Self {
        self.shadow = true;
        self.merged = false;
        self
    }

    /// The non-shadow action produced by a merge.
    pub fn as_merged(&self) -> Self {
        ActionLabel {
            name: self.name.clone(),
            args: self.args.clone(),
            shadow: false,
            merged: true,
        }
    }

    /// Identity used by equivalence checking and trace matching.
    pub fn observable(&self) -> (&str, &[DataValue], bool) {
        (&self.name, &self.args, self.shadow)
    }

    pub fn same_observable(&self, other: &ActionLabel) -> bool {
        self.observable() == other.observable()
    }

    /// True iff `self` and `other` are an action and its shadow constant.
    pub fn entangles_with(&self, other: &ActionLabel) -> bool {
        self.shadow != other.shadow && self.name == other.name && self.args == other.args
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shadow {
            f.write_str("@shadow(")?;
        }
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("[")?;
            write_args(f, &self.args)?;
            f.write_str("]")?;
        }
        if self.shadow {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Transition label: an action or the silent step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    Tau,
    Act(ActionLabel),
}

impl Label {
    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }

    pub fn action(&self) -> Option<&ActionLabel> {
        match self {
            Label::Tau => None,
            Label::Act(a) => Some(a),
        }
    }

    /// Key comparing labels modulo the `merged` provenance flag.
    pub fn observable_key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Act(a) => write!(f, "{a}"),
        }
    }
}

impl From<ActionLabel> for Label {
    fn from(a: ActionLabel) -> Self {
        Label::Act(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ArgPattern {
    Any,
    Is(DataValue),
}

impl fmt::Display for ArgPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgPattern::Any => f.write_str("*"),
            ArgPattern::Is(v) => write!(f, "{v}"),
        }
    }
}

/// A parameterized family of labels such as `send_D[*]`.
///
/// `args == None` (written without brackets) matches the name at any arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabelPattern {
    pub name: String,
    pub args: Option<Vec<ArgPattern>>,
    pub shadow: bool,
}

impl LabelPattern {
    pub fn new(name: impl Into<String>, args: Vec<ArgPattern>) -> Self {
        LabelPattern {
            name: name.into(),
            args: Some(args),
            shadow: false,
        }
    }

    pub fn any_args(name: impl Into<String>) -> Self {
        LabelPattern {
            name: name.into(),
            args: None,
            shadow: false,
        }
    }

    pub fn shadowed(mut self) -> Self {
        self.shadow = true;
        self
    }

    /// Exact pattern for a single label.
    pub fn exact(a: &ActionLabel) -> Self {
        LabelPattern {
            name: a.name.clone(),
            args: Some(a.args.iter().cloned().map(ArgPattern::Is).collect()),
            shadow: a.shadow,
        }
    }

    pub fn matches(&self, a: &ActionLabel) -> bool {
        match_label(self, a)
    }
}

/// Name equal, shadow flag equal, and every pattern argument a wildcard or
/// equal to the corresponding argument.
pub fn match_label(pattern: &LabelPattern, a: &ActionLabel) -> bool {
    if pattern.name != a.name || pattern.shadow != a.shadow {
        return false;
    }
    match &pattern.args {
        None => true,
        Some(ps) => {
            ps.len() == a.args.len()
                && ps.iter().zip(&a.args).all(|(p, v)| match p {
                    ArgPattern::Any => true,
                    ArgPattern::Is(w) => w == v,
                })
        }
    }
}

impl fmt::Display for LabelPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shadow {
            f.write_str("@shadow(")?;
        }
        f.write_str(&self.name)?;
        if let Some(args) = &self.args {
            f.write_str("[")?;
            write_args(f, args)?;
            f.write_str("]")?;
        }
        if self.shadow {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A set of label patterns, optionally carrying the name it was declared
/// under (used only for display).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ActionSet {
    pub name: Option<String>,
    pub patterns: Vec<LabelPattern>,
}

impl ActionSet {
    pub fn new(patterns: impl IntoIterator<Item = LabelPattern>) -> Self {
        let mut patterns: Vec<_> = patterns.into_iter().collect();
        patterns.sort();
        patterns.dedup();
        ActionSet {
            name: None,
            patterns,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn matches(&self, a: &ActionLabel) -> bool {
        self.patterns.iter().any(|p| p.matches(a))
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Inline `{p, q}` rendering regardless of name.
    pub fn literal(&self) -> String {
        let items: Vec<String> = self.patterns.iter().map(|p| p.to_string()).collect();
        format!("{{{}}}", items.join(", "))
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => f.write_str(n),
            None => f.write_str(&self.literal()),
        }
    }
}
