//! Recursive-descent parser and name resolution for `.qacp` documents.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::lexer::{lex, Tok};
use super::ParseError;
use crate::term::DataValue;

const RESERVED: &[&str] = &[
    "delta", "tau", "act", "comm", "set", "init", "encap", "abstract", "in", "sum", "err", "kl", "bit", "data",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum ArgMode {
    /// Equation bodies: parameters allowed, wildcards not.
    Body,
    /// Communication rules: lowercase identifiers are rule variables.
    Rule,
    /// Set members: literals and wildcards only.
    Pattern,
}

pub(crate) struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

fn datum_literal(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('d')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<Span, ParseError> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&format!("expected {}", t.describe())))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.at_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{kw}`")))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::syntax(format!("{what}, found {}", self.peek().describe()), self.span())
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().1;
                Ok((s, sp))
            }
            _ => Err(self.unexpected("expected an identifier")),
        }
    }

    fn name(&mut self) -> Result<(String, Span), ParseError> {
        let (s, sp) = self.ident()?;
        if RESERVED.contains(&s.as_str()) {
            return Err(ParseError::syntax(format!("`{s}` is a reserved word"), sp));
        }
        Ok((s, sp))
    }

    pub(crate) fn document(&mut self) -> Result<SpecDocument, ParseError> {
        let mut doc = SpecDocument::default();
        loop {
            if self.eat(&Tok::Semi) {
                continue;
            }
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw) => match kw.as_str() {
                    "delta" if matches!(self.peek_at(1), Tok::Num(_)) => {
                        let sp = self.bump().1;
                        let Tok::Num(n) = self.bump().0 else { unreachable!() };
                        if n == 0 || n > u32::MAX as u64 {
                            return Err(ParseError::semantic("data domain size must be positive", sp));
                        }
                        doc.delta = Some(n as u32);
                    }
                    "act" => {
                        self.bump();
                        loop {
                            let (n, _) = self.name()?;
                            doc.actions.push(n);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    "comm" => {
                        let span = self.bump().1;
                        let left = self.label(ArgMode::Rule)?;
                        self.expect(Tok::Bar)?;
                        let right = self.label(ArgMode::Rule)?;
                        self.expect(Tok::Eq)?;
                        let result = self.label(ArgMode::Rule)?;
                        doc.comms.push(CommDecl {
                            left,
                            right,
                            result,
                            span,
                        });
                    }
                    "set" => {
                        let span = self.bump().1;
                        let (name, _) = self.name()?;
                        self.expect(Tok::Eq)?;
                        let items = self.set_literal()?;
                        doc.sets.push(SetDecl { name, items, span });
                    }
                    "init" => {
                        let sp = self.bump().1;
                        if doc.init.is_some() {
                            return Err(ParseError::semantic("duplicate `init`", sp));
                        }
                        doc.init = Some(self.expr()?);
                    }
                    _ => {
                        let (name, span) = self.name()?;
                        let mut params = Vec::new();
                        if self.eat(&Tok::LParen) {
                            loop {
                                let (p, psp) = self.name()?;
                                if !p.starts_with(|c: char| c.is_ascii_lowercase()) {
                                    return Err(ParseError::syntax(
                                        format!("parameter `{p}` must start with a lowercase letter"),
                                        psp,
                                    ));
                                }
                                self.expect(Tok::Colon)?;
                                let sort = self.sort()?;
                                params.push(Param { name: p, sort });
                                if !self.eat(&Tok::Comma) {
                                    break;
                                }
                            }
                            self.expect(Tok::RParen)?;
                        }
                        self.expect(Tok::Eq)?;
                        let body = self.expr()?;
                        doc.equations.push(Equation {
                            name,
                            params,
                            body,
                            span,
                        });
                    }
                },
                _ => return Err(self.unexpected("expected a declaration or equation")),
            }
        }
        Ok(doc)
    }

    fn sort(&mut self) -> Result<Sort, ParseError> {
        if self.at_kw("bit") {
            self.bump();
            Ok(Sort::Bit)
        } else if self.at_kw("data") {
            self.bump();
            Ok(Sort::Data)
        } else {
            Err(self.unexpected("expected `bit` or `data`"))
        }
    }

    fn set_literal(&mut self) -> Result<Vec<LabelExpr>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                items.push(self.label(ArgMode::Pattern)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RBrace)?;
        }
        Ok(items)
    }

    fn set_expr(&mut self) -> Result<SetExpr, ParseError> {
        if *self.peek() == Tok::LBrace {
            Ok(SetExpr::Literal(self.set_literal()?))
        } else {
            Ok(SetExpr::Named(self.name()?.0))
        }
    }

    fn label(&mut self, mode: ArgMode) -> Result<LabelExpr, ParseError> {
        if self.eat(&Tok::At) {
            let (kw, sp) = self.ident()?;
            if kw != "shadow" {
                return Err(ParseError::syntax(format!("unknown annotation `@{kw}`"), sp));
            }
            self.expect(Tok::LParen)?;
            let mut inner = self.label(mode)?;
            self.expect(Tok::RParen)?;
            if inner.shadow {
                return Err(ParseError::syntax("nested @shadow", sp));
            }
            inner.shadow = true;
            return Ok(inner);
        }
        let (name, _) = self.name()?;
        let args = if self.eat(&Tok::LBrack) {
            let mut args = Vec::new();
            if !self.eat(&Tok::RBrack) {
                loop {
                    args.push(self.arg(mode)?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RBrack)?;
            }
            Some(args)
        } else {
            None
        };
        Ok(LabelExpr {
            name,
            args,
            shadow: false,
        })
    }

    fn arg(&mut self, mode: ArgMode) -> Result<Arg, ParseError> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                if mode == ArgMode::Body {
                    return Err(ParseError::syntax("wildcard `*` is only allowed in sets and rules", sp));
                }
                Ok(Arg::Any)
            }
            Tok::Num(n) => {
                self.bump();
                if *self.peek() == Tok::Minus {
                    self.bump();
                    if n != 1 {
                        return Err(ParseError::syntax("only `1-b` bit negation is supported", sp));
                    }
                    let (p, psp) = self.ident()?;
                    if !p.starts_with(|c: char| c.is_ascii_lowercase()) || RESERVED.contains(&p.as_str()) {
                        return Err(ParseError::syntax("expected a bit parameter after `1-`", psp));
                    }
                    if mode == ArgMode::Pattern {
                        return Err(ParseError::syntax("parameters are not allowed in set patterns", sp));
                    }
                    return Ok(Arg::Flip(p));
                }
                match n {
                    0 => Ok(Arg::Lit(DataValue::Bit(crate::term::Bit::Zero))),
                    1 => Ok(Arg::Lit(DataValue::Bit(crate::term::Bit::One))),
                    _ => Err(ParseError::syntax(format!("numeric argument `{n}` is not a bit"), sp)),
                }
            }
            Tok::LParen => {
                self.bump();
                let a = self.arg(mode)?;
                self.expect(Tok::Comma)?;
                let b = self.arg(mode)?;
                self.expect(Tok::RParen)?;
                Ok(Arg::Pair(Box::new(a), Box::new(b)))
            }
            Tok::Ident(s) => {
                self.bump();
                if s == "err" {
                    Ok(Arg::Lit(DataValue::Err))
                } else if s == "kl" {
                    Ok(Arg::Lit(DataValue::Kl))
                } else if let Some(i) = datum_literal(&s) {
                    Ok(Arg::Lit(DataValue::Datum(i)))
                } else if RESERVED.contains(&s.as_str()) {
                    Err(ParseError::syntax(format!("`{s}` is a reserved word"), sp))
                } else if s.starts_with(|c: char| c.is_ascii_lowercase()) {
                    if mode == ArgMode::Pattern {
                        return Err(ParseError::syntax(
                            format!("parameter `{s}` is not allowed in set patterns"),
                            sp,
                        ));
                    }
                    Ok(Arg::Param(s))
                } else {
                    Ok(Arg::Lit(DataValue::Qubit(s)))
                }
            }
            _ => Err(self.unexpected("expected an argument")),
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.merge()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.merge()?;
            lhs = Expr::Alt(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn merge(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.seq()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> Expr = match self.peek() {
                Tok::ParBar => Expr::Par,
                Tok::LeftMerge => Expr::LeftMerge,
                Tok::Bar => Expr::CommMerge,
                Tok::Ent => Expr::EntMerge,
                _ => break,
            };
            self.bump();
            let rhs = self.seq()?;
            lhs = ctor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn seq(&mut self) -> Result<Expr, ParseError> {
        let head = self.prefix()?;
        if *self.peek() == Tok::Dot {
            let dot = self.bump().1;
            if !self.starts_term() {
                return Err(ParseError::syntax(
                    format!("expected a term after `.`, found {}", self.peek().describe()),
                    dot,
                ));
            }
            let tail = self.seq()?;
            return Ok(Expr::Seq(Box::new(head), Box::new(tail)));
        }
        Ok(head)
    }

    fn starts_term(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !matches!(s.as_str(), "act" | "comm" | "set" | "init" | "in"),
            Tok::LParen | Tok::At => true,
            _ => false,
        }
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        if self.at_kw("encap") || self.at_kw("abstract") {
            let is_encap = self.at_kw("encap");
            self.bump();
            let set = self.set_expr()?;
            self.expect_kw("in")?;
            let body = Box::new(self.prefix()?);
            return Ok(if is_encap {
                Expr::Encap(set, body)
            } else {
                Expr::Abstract(set, body)
            });
        }
        if self.at_kw("sum") {
            self.bump();
            let (var, sp) = self.name()?;
            if !var.starts_with(|c: char| c.is_ascii_lowercase()) {
                return Err(ParseError::syntax("sum variable must start with a lowercase letter", sp));
            }
            self.expect(Tok::Colon)?;
            let sort = self.sort()?;
            self.expect(Tok::Dot)?;
            let body = self.expr()?;
            return Ok(Expr::Sum(var, sort, Box::new(body)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::At => Ok(Expr::Action(self.label(ArgMode::Body)?)),
            Tok::Ident(s) if s == "delta" => {
                self.bump();
                Ok(Expr::Delta)
            }
            Tok::Ident(s) if s == "tau" => {
                self.bump();
                Ok(Expr::Tau)
            }
            Tok::Ident(_) => match self.peek_at(1) {
                Tok::LBrack => Ok(Expr::Action(self.label(ArgMode::Body)?)),
                Tok::LParen => {
                    let (name, _) = self.name()?;
                    self.bump();
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.arg(ArgMode::Body)?);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                        self.expect(Tok::RParen)?;
                    }
                    Ok(Expr::Call(name, args))
                }
                _ => {
                    let (name, _) = self.name()?;
                    Ok(Expr::Name(name, sp))
                }
            },
            _ => Err(self.unexpected("expected a term")),
        }
    }
}

// ---------------------------------------------------------------------------
// Name resolution and static checks.

struct Resolver<'a> {
    equations: BTreeMap<&'a str, Vec<Sort>>,
    actions: BTreeSet<&'a str>,
    sets: BTreeSet<&'a str>,
    arities: BTreeMap<String, usize>,
}

impl<'a> Resolver<'a> {
    fn new(doc: &'a SpecDocument) -> Result<Self, ParseError> {
        let mut equations = BTreeMap::new();
        for eq in &doc.equations {
            if equations
                .insert(eq.name.as_str(), eq.params.iter().map(|p| p.sort).collect())
                .is_some()
            {
                return Err(ParseError::semantic(format!("duplicate equation `{}`", eq.name), eq.span));
            }
            let mut seen = BTreeSet::new();
            for p in &eq.params {
                if !seen.insert(&p.name) {
                    return Err(ParseError::semantic(
                        format!("duplicate parameter `{}` in `{}`", p.name, eq.name),
                        eq.span,
                    ));
                }
            }
        }
        let actions: BTreeSet<&str> = doc.actions.iter().map(String::as_str).collect();
        for a in &actions {
            if equations.contains_key(a) {
                return Err(ParseError::semantic(
                    format!("`{a}` is declared both as an action and an equation"),
                    Span::default(),
                ));
            }
        }
        let mut sets = BTreeSet::new();
        for s in &doc.sets {
            if !sets.insert(s.name.as_str()) {
                return Err(ParseError::semantic(format!("duplicate set `{}`", s.name), s.span));
            }
        }
        Ok(Resolver {
            equations,
            actions,
            sets,
            arities: BTreeMap::new(),
        })
    }

    fn note_arity(&mut self, l: &LabelExpr, span: Span) -> Result<(), ParseError> {
        if self.equations.contains_key(l.name.as_str()) {
            return Err(ParseError::semantic(
                format!("`{}` is an equation, not an action", l.name),
                span,
            ));
        }
        let n = l.arity();
        match self.arities.get(&l.name) {
            Some(&m) if m != n => Err(ParseError::semantic(
                format!("arity mismatch for action `{}`: used with {m} and {n} arguments", l.name),
                span,
            )),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(l.name.clone(), n);
                Ok(())
            }
        }
    }

    fn arg_sort(arg: &Arg, scope: &[(String, Sort)], span: Span) -> Result<Option<Sort>, ParseError> {
        let lookup = |x: &str| scope.iter().rev().find(|(n, _)| n == x).map(|(_, s)| *s);
        match arg {
            Arg::Lit(DataValue::Bit(_)) => Ok(Some(Sort::Bit)),
            Arg::Lit(DataValue::Datum(_)) => Ok(Some(Sort::Data)),
            Arg::Lit(_) => Ok(None),
            Arg::Any => Err(ParseError::semantic("wildcard in a term", span)),
            Arg::Param(x) => lookup(x)
                .map(Some)
                .ok_or_else(|| ParseError::semantic(format!("unknown parameter `{x}`"), span)),
            Arg::Flip(x) => match lookup(x) {
                Some(Sort::Bit) => Ok(Some(Sort::Bit)),
                Some(Sort::Data) => Err(ParseError::semantic(format!("`1-{x}` needs a bit parameter"), span)),
                None => Err(ParseError::semantic(format!("unknown parameter `{x}`"), span)),
            },
            Arg::Pair(a, b) => {
                Self::arg_sort(a, scope, span)?;
                Self::arg_sort(b, scope, span)?;
                Ok(None)
            }
        }
    }

    fn check_set(&self, s: &SetExpr, span: Span) -> Result<(), ParseError> {
        match s {
            SetExpr::Named(n) if !self.sets.contains(n.as_str()) => {
                Err(ParseError::semantic(format!("unknown set `{n}`"), span))
            }
            _ => Ok(()),
        }
    }

    fn resolve(&mut self, e: &mut Expr, scope: &mut Vec<(String, Sort)>, span: Span) -> Result<(), ParseError> {
        match e {
            Expr::Delta | Expr::Tau => Ok(()),
            Expr::Name(n, sp) => {
                let sp = *sp;
                if let Some(params) = self.equations.get(n.as_str()) {
                    if !params.is_empty() {
                        return Err(ParseError::semantic(
                            format!("arity mismatch: `{n}` expects {} parameters, got 0", params.len()),
                            sp,
                        ));
                    }
                    *e = Expr::Call(std::mem::take(n), Vec::new());
                } else if self.actions.contains(n.as_str()) {
                    let l = LabelExpr {
                        name: std::mem::take(n),
                        args: None,
                        shadow: false,
                    };
                    self.note_arity(&l, sp)?;
                    *e = Expr::Action(l);
                } else {
                    return Err(ParseError::semantic(format!("unknown variable or action `{n}`"), sp));
                }
                Ok(())
            }
            Expr::Call(n, args) => {
                let params = self
                    .equations
                    .get(n.as_str())
                    .ok_or_else(|| ParseError::semantic(format!("unknown variable `{n}`"), span))?
                    .clone();
                if params.len() != args.len() {
                    return Err(ParseError::semantic(
                        format!(
                            "arity mismatch: `{n}` expects {} parameters, got {}",
                            params.len(),
                            args.len()
                        ),
                        span,
                    ));
                }
                for (a, want) in args.iter().zip(params) {
                    match Self::arg_sort(a, scope, span)? {
                        Some(s) if s == want => {}
                        _ => {
                            return Err(ParseError::semantic(
                                format!("argument `{a}` of `{n}` is not of sort {want}"),
                                span,
                            ))
                        }
                    }
                }
                Ok(())
            }
            Expr::Action(l) => {
                self.note_arity(l, span)?;
                for a in l.args.iter().flatten() {
                    Self::arg_sort(a, scope, span)?;
                }
                Ok(())
            }
            Expr::Alt(x, y)
            | Expr::Seq(x, y)
            | Expr::Par(x, y)
            | Expr::LeftMerge(x, y)
            | Expr::CommMerge(x, y)
            | Expr::EntMerge(x, y) => {
                self.resolve(x, scope, span)?;
                self.resolve(y, scope, span)
            }
            Expr::Encap(s, x) | Expr::Abstract(s, x) => {
                self.check_set(s, span)?;
                self.resolve(x, scope, span)
            }
            Expr::Sum(v, sort, body) => {
                scope.push((v.clone(), *sort));
                let r = self.resolve(body, scope, span);
                scope.pop();
                r
            }
        }
    }
}

fn unguarded_calls(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Call(n, _) => out.push(n.clone()),
        Expr::Seq(x, _) => unguarded_calls(x, out),
        Expr::Alt(x, y) | Expr::Par(x, y) | Expr::LeftMerge(x, y) | Expr::CommMerge(x, y) | Expr::EntMerge(x, y) => {
            unguarded_calls(x, out);
            unguarded_calls(y, out);
        }
        Expr::Encap(_, x) | Expr::Abstract(_, x) | Expr::Sum(_, _, x) => unguarded_calls(x, out),
        Expr::Delta | Expr::Tau | Expr::Action(_) | Expr::Name(..) => {}
    }
}

/// Family-level guardedness: parameters are ignored, which is conservative.
fn check_guarded_families(doc: &SpecDocument) -> Result<(), ParseError> {
    let edges: BTreeMap<&str, Vec<String>> = doc
        .equations
        .iter()
        .map(|eq| {
            let mut out = Vec::new();
            unguarded_calls(&eq.body, &mut out);
            (eq.name.as_str(), out)
        })
        .collect();
    for eq in &doc.equations {
        // Search for a path of unguarded calls from eq back to itself.
        let mut stack: Vec<(&str, &str)> = edges[eq.name.as_str()]
            .iter()
            .map(|w| (eq.name.as_str(), w.as_str()))
            .collect();
        let mut seen = BTreeSet::new();
        while let Some((from, to)) = stack.pop() {
            if to == eq.name {
                return Err(ParseError::semantic(
                    format!("unguarded equation: {to} unguarded in {from}"),
                    eq.span,
                ));
            }
            if !seen.insert(to) {
                continue;
            }
            if let Some(next) = edges.get(to) {
                stack.extend(next.iter().map(|w| (to, w.as_str())));
            }
        }
    }
    Ok(())
}

pub(crate) fn resolve_document(doc: &mut SpecDocument) -> Result<(), ParseError> {
    let snapshot = doc.clone();
    let mut r = Resolver::new(&snapshot)?;
    for eq in doc.equations.iter_mut() {
        let mut scope: Vec<(String, Sort)> = eq.params.iter().map(|p| (p.name.clone(), p.sort)).collect();
        r.resolve(&mut eq.body, &mut scope, eq.span)?;
    }
    if let Some(init) = doc.init.as_mut() {
        r.resolve(init, &mut Vec::new(), Span::default())?;
    }
    for c in &doc.comms {
        for l in [&c.left, &c.right, &c.result] {
            if l.shadow {
                return Err(ParseError::semantic("shadow constants cannot appear in comm rules", c.span));
            }
        }
        let mut bound = BTreeSet::new();
        for a in c.left.args.iter().chain(c.right.args.iter()).flatten() {
            if let Arg::Param(x) = a {
                bound.insert(x.clone());
            }
        }
        for a in c.result.args.iter().flatten() {
            match a {
                Arg::Param(x) if !bound.contains(x) => {
                    return Err(ParseError::semantic(
                        format!("rule variable `{x}` of the result is not bound by the operands"),
                        c.span,
                    ))
                }
                Arg::Any | Arg::Flip(_) => {
                    return Err(ParseError::semantic("comm result must be fully determined", c.span))
                }
                _ => {}
            }
        }
    }
    check_guarded_families(doc)
}
