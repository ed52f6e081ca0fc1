//! Abstract syntax of `.qacp` documents (before instantiation).

use std::fmt;

use crate::term::DataValue;

/// Source position (1-based). Positions never affect equality so that
/// documents compare structurally.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bit,
    Data,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Bit => "bit",
            Sort::Data => "data",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub sort: Sort,
}

/// Argument expression. `Param` is a lowercase identifier: an equation
/// parameter or sum variable in bodies, a rule variable in `comm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Lit(DataValue),
    Param(String),
    /// `1-b`
    Flip(String),
    Any,
    Pair(Box<Arg>, Box<Arg>),
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Lit(v) => write!(f, "{v}"),
            Arg::Param(x) => f.write_str(x),
            Arg::Flip(x) => write!(f, "1-{x}"),
            Arg::Any => f.write_str("*"),
            Arg::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// `name`, `name[args]` or `@shadow(name[args])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelExpr {
    pub name: String,
    pub args: Option<Vec<Arg>>,
    pub shadow: bool,
}

impl LabelExpr {
    pub fn arity(&self) -> usize {
        self.args.as_ref().map_or(0, Vec::len)
    }
}

impl fmt::Display for LabelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shadow {
            f.write_str("@shadow(")?;
        }
        f.write_str(&self.name)?;
        if let Some(args) = &self.args {
            f.write_str("[")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str("]")?;
        }
        if self.shadow {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    Named(String),
    Literal(Vec<LabelExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Delta,
    Tau,
    Action(LabelExpr),
    /// Reference to an equation (parameters may be empty).
    Call(String, Vec<Arg>),
    Alt(Box<Expr>, Box<Expr>),
    Seq(Box<Expr>, Box<Expr>),
    Par(Box<Expr>, Box<Expr>),
    LeftMerge(Box<Expr>, Box<Expr>),
    CommMerge(Box<Expr>, Box<Expr>),
    EntMerge(Box<Expr>, Box<Expr>),
    Encap(SetExpr, Box<Expr>),
    Abstract(SetExpr, Box<Expr>),
    Sum(String, Sort, Box<Expr>),
    /// Bare identifier before name resolution; never present in a parsed document.
    Name(String, Span),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub params: Vec<Param>,
    pub body: Expr,
    pub span: Span,
}

/// `comm left | right = result`; lowercase arguments are rule variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommDecl {
    pub left: LabelExpr,
    pub right: LabelExpr,
    pub result: LabelExpr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetDecl {
    pub name: String,
    pub items: Vec<LabelExpr>,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecDocument {
    /// Size of the data domain Δ, if declared.
    pub delta: Option<u32>,
    pub actions: Vec<String>,
    pub comms: Vec<CommDecl>,
    pub sets: Vec<SetDecl>,
    pub equations: Vec<Equation>,
    pub init: Option<Expr>,
}

impl SpecDocument {
    pub fn equation(&self, name: &str) -> Option<&Equation> {
        self.equations.iter().find(|e| e.name == name)
    }

    pub fn set(&self, name: &str) -> Option<&SetDecl> {
        self.sets.iter().find(|s| s.name == name)
    }
}
