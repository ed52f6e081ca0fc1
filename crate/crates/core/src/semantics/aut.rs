//! Aldebaran (`.aut`) import and export.
//!
//! The format has no notion of successful termination, so terminal flags are
//! dropped on export and cleared on import.

use std::fmt::Write;

use thiserror::Error;

use super::lts::Lts;
use crate::syntax::parse_label;
use crate::term::{ActionLabel, Label};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn malformed(line: usize, message: impl Into<String>) -> AutError {
    AutError::Malformed {
        line,
        message: message.into(),
    }
}

fn label_text(l: &Label) -> String {
    match l {
        Label::Tau => "tau".to_string(),
        Label::Act(a) => a.to_string(),
    }
}

pub fn to_aut(lts: &Lts) -> String {
    let mut out = format!(
        "des ({},{},{})\n",
        lts.initial,
        lts.num_transitions(),
        lts.num_states()
    );
    for t in &lts.transitions {
        let _ = writeln!(out, "({},\"{}\",{})", t.source, label_text(&t.label), t.target);
    }
    out
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize, AutError> {
    s.trim()
        .parse()
        .map_err(|_| malformed(line, format!("invalid {what} `{}`", s.trim())))
}

/// Labels that are not valid `.qacp` labels become plain argument-less actions.
pub fn from_aut(src: &str) -> Result<Lts, AutError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| malformed(1, "missing `des` header"))?;
    let inner = header
        .strip_prefix("des")
        .map(str::trim)
        .and_then(|s| s.strip_prefix('('))
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| malformed(hl, "expected `des (initial, transitions, states)`"))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(malformed(hl, "expected three numbers in the header"));
    }
    let initial = parse_usize(parts[0], hl, "initial state")?;
    let ntrans = parse_usize(parts[1], hl, "transition count")?;
    let nstates = parse_usize(parts[2], hl, "state count")?;
    if initial >= nstates {
        return Err(malformed(hl, "initial state out of range"));
    }
    let mut edges = Vec::with_capacity(ntrans);
    for (ln, line) in lines {
        let body = line
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| malformed(ln, "expected `(source, \"label\", target)`"))?;
        let first = body.find(',').ok_or_else(|| malformed(ln, "missing label"))?;
        let last = body.rfind(',').filter(|&i| i > first).ok_or_else(|| malformed(ln, "missing target"))?;
        let src = parse_usize(&body[..first], ln, "source state")?;
        let dst = parse_usize(&body[last + 1..], ln, "target state")?;
        let raw = body[first + 1..last].trim();
        let raw = raw
            .strip_prefix('"')
            .and_then(|s| s.strip_suffix('"'))
            .unwrap_or(raw);
        if src >= nstates || dst >= nstates {
            return Err(malformed(ln, "state out of range"));
        }
        let label = parse_label(raw).unwrap_or_else(|_| Label::Act(ActionLabel::new(raw, Vec::new())));
        edges.push((src, label, dst));
    }
    if edges.len() != ntrans {
        return Err(malformed(
            hl,
            format!("header declares {ntrans} transitions, found {}", edges.len()),
        ));
    }
    Ok(Lts::from_edges(initial, nstates, edges))
}
