//! Canonical printer. `parse(pretty(d)) == d` for every parsed document.

use std::fmt::Write;

use super::ast::*;

const ALT: u8 = 0;
const MERGE: u8 = 1;
const SEQ: u8 = 2;
const PREFIX: u8 = 3;
const ATOM: u8 = 4;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Alt(..) => ALT,
        Expr::Par(..) | Expr::LeftMerge(..) | Expr::CommMerge(..) | Expr::EntMerge(..) => MERGE,
        Expr::Seq(..) => SEQ,
        Expr::Encap(..) | Expr::Abstract(..) => PREFIX,
        // Sums extend to the right as far as possible, so they are only bare at top level.
        Expr::Sum(..) => ALT,
        _ => ATOM,
    }
}

fn set_expr(s: &SetExpr, out: &mut String) {
    match s {
        SetExpr::Named(n) => out.push_str(n),
        SetExpr::Literal(items) => set_literal(items, out),
    }
}

fn set_literal(items: &[LabelExpr], out: &mut String) {
    out.push('{');
    for (i, l) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{l}");
    }
    out.push('}');
}

fn expr_at(e: &Expr, min: u8, top: bool, out: &mut String) {
    let bare = if matches!(e, Expr::Sum(..)) { top } else { prec(e) >= min };
    if !bare {
        out.push('(');
        expr_at(e, ALT, true, out);
        out.push(')');
        return;
    }
    let bin = |x: &Expr, op: &str, y: &Expr, l: u8, r: u8, out: &mut String| {
        expr_at(x, l, false, out);
        out.push_str(op);
        expr_at(y, r, false, out);
    };
    match e {
        Expr::Delta => out.push_str("delta"),
        Expr::Tau => out.push_str("tau"),
        Expr::Action(l) => {
            let _ = write!(out, "{l}");
        }
        Expr::Call(n, args) => {
            out.push_str(n);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{a}");
                }
                out.push(')');
            }
        }
        Expr::Alt(x, y) => bin(x, " + ", y, ALT, MERGE, out),
        Expr::Par(x, y) => bin(x, " || ", y, MERGE, SEQ, out),
        Expr::LeftMerge(x, y) => bin(x, " _| ", y, MERGE, SEQ, out),
        Expr::CommMerge(x, y) => bin(x, " | ", y, MERGE, SEQ, out),
        Expr::EntMerge(x, y) => bin(x, " >< ", y, MERGE, SEQ, out),
        Expr::Seq(x, y) => bin(x, ".", y, PREFIX, SEQ, out),
        Expr::Encap(s, x) | Expr::Abstract(s, x) => {
            out.push_str(if matches!(e, Expr::Encap(..)) { "encap " } else { "abstract " });
            set_expr(s, out);
            out.push_str(" in ");
            expr_at(x, PREFIX, false, out);
        }
        Expr::Sum(v, sort, body) => {
            let _ = write!(out, "sum {v}:{sort}. ");
            expr_at(body, ALT, true, out);
        }
        Expr::Name(n, _) => out.push_str(n),
    }
}

/// Prints one expression in surface syntax.
pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_at(e, ALT, true, &mut out);
    out
}

pub fn pretty(doc: &SpecDocument) -> String {
    let mut sections: Vec<String> = Vec::new();
    if let Some(d) = doc.delta {
        sections.push(format!("delta {d}\n"));
    }
    if !doc.actions.is_empty() {
        sections.push(format!("act {}\n", doc.actions.join(", ")));
    }
    if !doc.comms.is_empty() {
        let mut s = String::new();
        for c in &doc.comms {
            let _ = writeln!(s, "comm {} | {} = {}", c.left, c.right, c.result);
        }
        sections.push(s);
    }
    if !doc.sets.is_empty() {
        let mut s = String::new();
        for d in &doc.sets {
            let _ = write!(s, "set {} = ", d.name);
            set_literal(&d.items, &mut s);
            s.push('\n');
        }
        sections.push(s);
    }
    if !doc.equations.is_empty() {
        let mut s = String::new();
        for eq in &doc.equations {
            s.push_str(&eq.name);
            if !eq.params.is_empty() {
                let ps: Vec<String> = eq.params.iter().map(|p| format!("{}: {}", p.name, p.sort)).collect();
                let _ = write!(s, "({})", ps.join(", "));
            }
            let _ = writeln!(s, " = {}", pretty_expr(&eq.body));
        }
        sections.push(s);
    }
    if let Some(init) = &doc.init {
        sections.push(format!("init {}\n", pretty_expr(init)));
    }
    let mut out = String::from("// qacp specification\n");
    for s in sections {
        out.push('\n');
        out.push_str(&s);
    }
    out
}
