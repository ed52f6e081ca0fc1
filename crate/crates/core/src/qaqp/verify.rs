//! The end-to-end pipeline and its report.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::model::{build_system, encapsulated_term, external_spec, QaqpConfig};
use super::tables::{compare_tables, TableReport};
use crate::equivalence::{branching_bisim, branching_partition, cfar_collapse, quotient, Counterexample};
use crate::semantics::{explore, linearize, Lts, NamingScheme, Semantics};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stage `{stage}` failed: {message}")]
pub struct VerifyError {
    pub stage: &'static str,
    pub message: String,
}

fn stage<T, E: std::fmt::Display>(stage: &'static str, r: Result<T, E>) -> Result<T, VerifyError> {
    r.map_err(|e| VerifyError {
        stage,
        message: e.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LtsStats {
    pub states: usize,
    pub transitions: usize,
    pub deadlocks: usize,
    pub tau_transitions: usize,
    /// Every state can return to the initial state.
    pub recurrent: bool,
}

impl LtsStats {
    pub fn of(l: &Lts) -> LtsStats {
        LtsStats {
            states: l.num_states(),
            transitions: l.num_transitions(),
            deadlocks: l.deadlocks().len(),
            tau_transitions: l.transitions.iter().filter(|t| t.label.is_tau()).count(),
            recurrent: l.can_return_to_initial().iter().all(|&b| b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub config: QaqpConfig,
    pub guarded: bool,
    pub guardedness_diagnostic: Option<String>,
    pub equations: usize,
    pub encapsulated: LtsStats,
    pub abstracted: LtsStats,
    pub cfar_collapsed: LtsStats,
    pub quotient: LtsStats,
    pub external: LtsStats,
    /// Linear specification of the encapsulated system, one equation per line.
    pub linearized: String,
    pub tables: Option<TableReport>,
    pub equivalent: bool,
    /// The collapsed system gives the same verdict as the original.
    pub cfar_agrees: bool,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub timings: Vec<(&'static str, f64)>,
}

/// Fixed interpretation choices, repeated in every report.
const NOTES: [&str; 3] = [
    "sigma[kl,M] is in both H and I: blocked on its own, hidden once merged with its shadow",
    "pair generation is the action GEN[M,N]",
    "send_P carries the teleported datum",
];

pub fn verify(cfg: &QaqpConfig) -> Result<VerificationReport, VerifyError> {
    if cfg.delta_size == 0 {
        return Err(VerifyError {
            stage: "config",
            message: "delta_size must be at least 1".into(),
        });
    }
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, f64)>| {
        timings.push((name, clock.elapsed().as_secs_f64() * 1e3));
        clock = Instant::now();
    };

    let model = build_system(cfg);
    let g = model.spec.check_guarded();
    lap("guardedness", &mut timings);
    if !g.guarded {
        return Err(VerifyError {
            stage: "guardedness",
            message: g.diagnostic.unwrap_or_default(),
        });
    }
    let sem = Semantics::new(&model.spec, &model.comm);

    let encap = stage("explore", explore(&sem, &encapsulated_term(), cfg.budget))?;
    lap("explore", &mut timings);
    let lin = stage(
        "linearize",
        linearize(&sem, &encapsulated_term(), &NamingScheme::default(), cfg.budget),
    )?;
    lap("linearize", &mut timings);

    let tables = (cfg.check_reference_tables && cfg.delta_size == 1).then(|| compare_tables(&encap));
    lap("tables", &mut timings);

    let entry = model.entry.clone().expect("system entry");
    let abs = stage("abstract", explore(&sem, &entry, cfg.budget))?.lts;
    lap("abstract", &mut timings);
    let collapsed = cfar_collapse(&abs);
    let quot = quotient(&abs, &branching_partition(&abs));
    lap("reduce", &mut timings);

    let ext_model = external_spec(cfg);
    let ext_sem = Semantics::new(&ext_model.spec, &ext_model.comm);
    let ext = stage(
        "external",
        explore(&ext_sem, ext_model.entry.as_ref().expect("entry"), cfg.budget),
    )?
    .lts;
    let v = branching_bisim(&abs, &ext, cfg.rooted);
    let cfar_agrees = branching_bisim(&collapsed, &ext, cfg.rooted).equivalent == v.equivalent;
    lap("equivalence", &mut timings);

    let tables_ok = tables.as_ref().is_none_or(TableReport::passed);
    let verdict = if v.equivalent && tables_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerificationReport {
        config: cfg.clone(),
        guarded: true,
        guardedness_diagnostic: None,
        equations: model.spec.len(),
        encapsulated: LtsStats::of(&encap.lts),
        abstracted: LtsStats::of(&abs),
        cfar_collapsed: LtsStats::of(&collapsed),
        quotient: LtsStats::of(&quot),
        external: LtsStats::of(&ext),
        linearized: lin.spec.to_string(),
        tables,
        equivalent: v.equivalent,
        cfar_agrees,
        counterexample: v.counterexample,
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
        verdict,
        timings,
    })
}

fn stats_line(out: &mut String, name: &str, s: &LtsStats) {
    let _ = writeln!(
        out,
        "  {name:<15} {:>6} states {:>7} transitions  {} tau  {} deadlocks  recurrent={}",
        s.states, s.transitions, s.tau_transitions, s.deadlocks, s.recurrent
    );
}

impl VerificationReport {
    pub fn to_text(&self, show_timings: bool) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "qaqp verification  delta={} rooted={} budget={}{}",
            c.delta_size,
            c.rooted,
            c.budget,
            c.mutation.map_or(String::new(), |m| format!("  mutation: {}", m.describe()))
        );
        let _ = writeln!(out, "guarded: {} ({} equations)", self.guarded, self.equations);
        let _ = writeln!(out, "state spaces:");
        stats_line(&mut out, "encapsulated", &self.encapsulated);
        stats_line(&mut out, "abstracted", &self.abstracted);
        stats_line(&mut out, "cfar collapsed", &self.cfar_collapsed);
        stats_line(&mut out, "quotient", &self.quotient);
        stats_line(&mut out, "external", &self.external);
        if let Some(t) = &self.tables {
            let _ = writeln!(
                out,
                "equation table: derived {} states / {} transitions, table {} states / {} transitions, isomorphic={}",
                t.derived_states, t.derived_transitions, t.reference_states, t.reference_transitions, t.isomorphic
            );
            for d in &t.discrepancies {
                let _ = writeln!(out, "  - {d}");
            }
            let bad: Vec<_> = t.printed_mismatches().collect();
            let _ = writeln!(
                out,
                "printed encapsulated equations: {} of {} agree",
                t.printed.len() - bad.len(),
                t.printed.len()
            );
            for p in bad {
                let _ = writeln!(out, "  block b={} line {}: {}", p.block, p.line, p.equation);
                for m in &p.problems {
                    let _ = writeln!(out, "      {m}");
                }
            }
        }
        let _ = writeln!(
            out,
            "{} branching bisimilar to the external specification: {}",
            if c.rooted { "rooted" } else { "(unrooted)" },
            self.equivalent
        );
        let _ = writeln!(out, "cfar collapse gives the same verdict: {}", self.cfar_agrees);
        if let Some(cx) = &self.counterexample {
            let _ = writeln!(out, "counterexample: {cx}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if show_timings {
            for (name, ms) in &self.timings {
                let _ = writeln!(out, "time {name:<12} {ms:>10.2} ms");
            }
        }
        let _ = writeln!(
            out,
            "verdict: {}",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            }
        );
        out
    }

    /// JSON rendering; timings only when requested so output stays reproducible.
    pub fn to_json(&self, include_timings: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if include_timings {
            let t: serde_json::Map<String, serde_json::Value> = self
                .timings
                .iter()
                .map(|(k, ms)| (k.to_string(), serde_json::json!(ms)))
                .collect();
            v["timings_ms"] = serde_json::Value::Object(t);
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }
}
