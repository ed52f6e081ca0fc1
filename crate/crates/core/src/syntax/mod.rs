//! The `.qacp` surface language: lexer, parser, pretty-printer and
//! instantiation into the term layer.

mod ast;
mod instantiate;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

pub use ast::{Arg, CommDecl, Equation, Expr, LabelExpr, Param, SetDecl, SetExpr, Sort, Span, SpecDocument};
pub use instantiate::{instantiate, Instance, DEFAULT_DELTA};
pub use pretty::{pretty, pretty_expr};

use crate::term::{ActionLabel, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "error",
        })
    }
}

/// Error with a 1-based position. Line 0 means the line is unknown (or the
/// error lies in a one-line term), column 0 that no position is known.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.col) {
            (0, 0) => write!(f, "{}: {}", self.kind, self.message),
            (0, c) => write!(f, "{} at column {c}: {}", self.kind, self.message),
            (l, c) => write!(f, "{} at {l}:{c}: {}", self.kind, self.message),
        }
    }
}

impl ParseError {
    pub(crate) fn syntax(message: impl Into<String>, span: Span) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            message: message.into(),
            line: span.line,
            col: span.col,
        }
    }

    pub(crate) fn semantic(message: impl Into<String>, span: Span) -> Self {
        ParseError {
            kind: ParseErrorKind::Semantic,
            message: message.into(),
            line: span.line,
            col: span.col,
        }
    }
}

/// Parses and resolves a document. Every bare identifier in the result has
/// been resolved to an equation call or a declared action.
pub fn parse(src: &str) -> Result<SpecDocument, ParseError> {
    let mut p = parser::Parser::new(src)?;
    let mut doc = p.document()?;
    parser::resolve_document(&mut doc)?;
    Ok(doc)
}

/// Parses `src` and replaces its `init` with the expression `entry`, resolved
/// against the document. Errors inside `entry` are reported at line 0 with
/// the column inside `entry`.
pub fn parse_with_entry(src: &str, entry: &str) -> Result<SpecDocument, ParseError> {
    let mut doc = parse(src)?;
    doc.init = None;
    let full = format!("{}\ninit {entry}", pretty(&doc));
    let entry_line = full.lines().count();
    parse(&full).map_err(|mut e| {
        if e.line == entry_line {
            e.line = 0;
            e.col = e.col.saturating_sub(5).max(1);
        }
        e
    })
}

/// Parses a concrete label such as `tau`, `C_D[0]` or `@shadow(Me[A,d1,kl])`.
pub fn parse_label(src: &str) -> Result<Label, ParseError> {
    let src = src.trim();
    if src == "tau" || src == "i" {
        return Ok(Label::Tau);
    }
    let doc = parse(&format!("set L = {{{src}}}"))?;
    let item = match doc.sets.first().map(|s| s.items.as_slice()) {
        Some([item]) => item.clone(),
        _ => return Err(ParseError::syntax("expected exactly one label", Span::default())),
    };
    let mut args = Vec::new();
    for a in item.args.iter().flatten() {
        args.push(instantiate::literal(a).ok_or_else(|| {
            ParseError::semantic(format!("label argument `{a}` is not a value"), Span::default())
        })?);
    }
    let mut label = ActionLabel::new(item.name, args);
    if item.shadow {
        label = label.into_shadow();
    }
    Ok(Label::Act(label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Term, VarName};

    const SRC: &str = "
delta 2
act a
comm s[x] | r[x] = c[x]
set H = {s[*], r[*]}
S(b: bit) = sum d:data. s[(b,d)].S(1-b)
R = sum b:bit. sum d:data. r[(b,d)].o[d].R
T = a.T + tau.T
init encap H in (S(0) || R)
";

    #[test]
    fn parse_pretty_round_trip() {
        let doc = parse(SRC).unwrap();
        let text = pretty(&doc);
        assert_eq!(parse(&text).unwrap(), doc);
        assert_eq!(pretty(&parse(&text).unwrap()), text);
    }

    #[test]
    fn bare_names_resolve() {
        let doc = parse(SRC).unwrap();
        let t = &doc.equation("T").unwrap().body;
        let Expr::Alt(x, _) = t else { panic!("{t:?}") };
        assert!(matches!(&**x, Expr::Seq(a, c) if matches!(&**a, Expr::Action(_)) && matches!(&**c, Expr::Call(..))));
    }

    #[test]
    fn instantiation_expands_parameters() {
        let inst = instantiate(&parse(SRC).unwrap(), None).unwrap();
        assert_eq!(inst.delta, 2);
        assert!(inst.model.spec.contains(&VarName::new("S", vec![crate::term::DataValue::Bit(crate::term::Bit::One)])));
        assert_eq!(inst.model.spec.len(), 4);
        assert!(matches!(inst.model.entry, Some(Term::Encap(..))));
        assert!(instantiate(&parse(SRC).unwrap(), Some(3)).is_ok());
    }

    fn err(src: &str) -> ParseError {
        parse(src).unwrap_err()
    }

    #[test]
    fn semantic_errors() {
        assert!(err("X = a.X\nX = a").message.contains("duplicate"));
        assert!(err("X = y.X").message.contains("unknown variable or action `y`"));
        assert!(err("X(b: bit) = a[b].X").message.contains("arity"));
        assert!(err("X(b: bit) = a[c].X(b)").message.contains("unknown parameter"));
        assert!(err("X(d: data) = a[1-d].X(d)").message.contains("bit parameter"));
        assert!(err("X(b: bit) = a[b].X(d1)").message.contains("sort"));
        assert!(err("X = encap H in a").message.contains("unknown set"));
        assert!(err("act a\nX = Y + a\nY = X").message.contains("unguarded"));
        assert!(err("act a\nX = a[0].X + a.X").message.contains("arity mismatch"));
    }

    #[test]
    fn trailing_dot_is_reported_at_the_dot() {
        let e = err("act a\nX = a.\n");
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.col), (2, 6));
    }

    #[test]
    fn datum_outside_domain() {
        let doc = parse("delta 2\nX = a[d3].X").unwrap();
        assert!(instantiate(&doc, None).is_err());
        assert!(instantiate(&doc, Some(3)).is_ok());
    }

    #[test]
    fn labels() {
        assert_eq!(parse_label("tau").unwrap(), crate::term::Label::Tau);
        let l = parse_label("@shadow(Me[A,d1,kl])").unwrap();
        assert_eq!(l.to_string(), "@shadow(Me[A,d1,kl])");
        assert!(parse_label("a[*]").is_err());
    }
}
