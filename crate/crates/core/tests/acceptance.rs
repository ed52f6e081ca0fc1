//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Run with `cargo test -p qacp --test acceptance`.

mod support;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qacp::equivalence::{branching_bisim, branching_partition, cfar_collapse, quotient, strong_bisim};
use qacp::qaqp::{
    build_system, compare_tables, encapsulated_term, external_spec, verify, Mutation, QaqpConfig,
};
use qacp::qsim::{
    bell_measure, conforms, make_epr, pauli_correct, run_protocol, superdense_decode, superdense_encode, Kl,
    NoiseModel, NoisyChannel, QuantumState, QubitData, RunOptions,
};
use qacp::semantics::{explore, linearize, Lts, NamingScheme, Semantics, SemanticsError, DEFAULT_BUDGET};
use qacp::term::{ActionSet, CommFunction, RecursiveSpec, Term};
use support::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn runner(seed: u8) -> TestRunner {
    TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy yields a value").current()
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:.0?}"))
    }
}

// 1 -------------------------------------------------------------------------

fn equation_table() -> Outcome {
    let start = Instant::now();
    let cfg = QaqpConfig::with_delta(1);
    let model = build_system(&cfg);
    let sem = Semantics::new(&model.spec, &model.comm);
    let explored = explore(&sem, &encapsulated_term(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    linearize(&sem, &encapsulated_term(), &NamingScheme::default(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let report = compare_tables(&explored);
    let elapsed = start.elapsed();

    let printed: Vec<String> = report
        .printed_mismatches()
        .map(|c| format!("block b={} line {}: {}", c.block, c.line, c.equation))
        .collect();
    let summary = format!(
        "derived {} states / {} transitions, table {} states / {} transitions; printed-block mismatches: {}",
        report.derived_states,
        report.derived_transitions,
        report.reference_states,
        report.reference_transitions,
        if printed.is_empty() { "none".to_string() } else { printed.join("; ") }
    );
    within(Duration::from_secs(1), elapsed)?;
    if report.derived_states != 40 {
        let mut msg = format!("expected exactly 40 states; {summary}");
        for d in &report.discrepancies {
            let _ = write!(msg, "\n      {d}");
        }
        return Err(msg);
    }
    if !report.isomorphic {
        return Err(format!("summand sets differ from the table; {summary}"));
    }
    Ok(summary)
}

// 2 -------------------------------------------------------------------------

/// States of the branching quotient of the external specification.
fn external_quotient_size(delta: u32) -> usize {
    let m = external_spec(&QaqpConfig::with_delta(delta));
    let l = explore(&Semantics::new(&m.spec, &m.comm), m.entry.as_ref().unwrap(), DEFAULT_BUDGET)
        .unwrap()
        .lts;
    quotient(&l, &branching_partition(&l)).num_states()
}

fn main_theorem() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for delta in 1..=3 {
        let mut cfg = QaqpConfig::with_delta(delta);
        cfg.check_reference_tables = false;
        let r = verify(&cfg).map_err(|e| e.to_string())?;
        let expected = external_quotient_size(delta);
        seen.push(format!("delta={delta}: quotient {} (expected {expected})", r.quotient.states));
        if expected != 1 + delta as usize {
            problems.push(format!("delta={delta}: external quotient has {expected} states"));
        }
        if !r.equivalent {
            let c = r.counterexample.map(|c| c.to_string()).unwrap_or_default();
            problems.push(format!("delta={delta}: not rooted branching bisimilar: {c}"));
        }
        if r.quotient.states != expected {
            problems.push(format!("delta={delta}: quotient has {} states, expected {expected}", r.quotient.states));
        }
    }
    within(Duration::from_secs(10), start.elapsed())?;
    if problems.is_empty() {
        Ok(seen.join(", "))
    } else {
        Err(problems.join("\n      "))
    }
}

// 3 -------------------------------------------------------------------------

fn lts_of(spec: &RecursiveSpec, comm: &CommFunction, t: &Term) -> Result<Lts, SemanticsError> {
    explore(&Semantics::new(spec, comm), t, 5_000).map(|e| e.lts)
}

fn axioms() -> Outcome {
    let comm = small_comm();
    let empty = RecursiveSpec::new();
    let mut runner = runner(3);
    let mut counts = [0usize; 5];
    let mut skipped = 0;

    let same = |spec: &RecursiveSpec, x: &Term, y: &Term, what: &str| -> Result<bool, String> {
        match (lts_of(spec, &comm, x), lts_of(spec, &comm, y)) {
            (Ok(a), Ok(b)) => {
                if strong_bisim(&a, &b).equivalent {
                    Ok(true)
                } else {
                    Err(format!("{what} fails for {x} vs {y}"))
                }
            }
            _ => Ok(false),
        }
    };

    // QTI1..QTI5 on 1000 terms: half closed, half drawn from guarded recursive specifications.
    for n in 0..1000 {
        let (spec, x, y) = if n % 2 == 0 {
            (empty.clone(), sample(&mut runner, &arb_closed_term()), sample(&mut runner, &arb_closed_term()))
        } else {
            let s = sample(&mut runner, &arb_spec());
            let y = s.spec.iter().next().map(|(v, _)| Term::var(v.clone())).unwrap();
            (s.spec, s.entry, y)
        };
        let i: ActionSet = sample(&mut runner, &arb_set());
        let v = sample(&mut runner, &arb_action());
        let tau_i = |t: Term| Term::abstract_(i.clone(), t);
        if i.matches(&v) {
            same(&spec, &tau_i(Term::Action(v.clone())), &Term::Tau, "QTI2")?;
            counts[1] += 1;
        } else {
            same(&spec, &tau_i(Term::Action(v.clone())), &Term::Action(v.clone()), "QTI1")?;
            counts[0] += 1;
        }
        same(&spec, &tau_i(Term::Deadlock), &Term::Deadlock, "QTI3")?;
        counts[2] += 1;
        let ok4 = same(
            &spec,
            &tau_i(Term::alt(x.clone(), y.clone())),
            &Term::alt(tau_i(x.clone()), tau_i(y.clone())),
            "QTI4",
        )?;
        let ok5 = same(
            &spec,
            &tau_i(Term::seq(x.clone(), y.clone())),
            &Term::seq(tau_i(x.clone()), tau_i(y.clone())),
            "QTI5",
        )?;
        counts[3] += ok4 as usize;
        counts[4] += ok5 as usize;
        skipped += (!ok4) as usize + (!ok5) as usize;
    }
    if counts[0] == 0 || counts[1] == 0 {
        return Err("QTI1/QTI2 not both exercised".into());
    }

    // RDP and RSP on 200 guarded specifications.
    let mut rdp = 0;
    let mut rsp = 0;
    for _ in 0..200 {
        let s = sample(&mut runner, &arb_spec());
        for (var, body) in s.spec.iter() {
            if let (Ok(a), Ok(b)) = (
                lts_of(&s.spec, &comm, &Term::var(var.clone())),
                lts_of(&s.spec, &comm, body),
            ) {
                if !strong_bisim(&a, &b).equivalent {
                    return Err(format!("RDP fails for {var} = {body}"));
                }
                rdp += 1;
            }
        }
        let sem = Semantics::new(&s.spec, &comm);
        if let Ok(lin) = linearize(&sem, &s.entry, &NamingScheme::default(), 5_000) {
            let back = lts_of(&lin.spec, &CommFunction::default(), &Term::var(lin.initial.clone()))
                .map_err(|e| e.to_string())?;
            if !strong_bisim(&back, &lin.source.lts).equivalent {
                return Err(format!("RSP fails for entry {}", s.entry));
            }
            rsp += 1;
        }
    }
    if rsp < 150 {
        return Err(format!("only {rsp} of 200 specifications fit the exploration budget"));
    }

    // cfar_collapse on 200 LTSs with injected τ-cycles.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut collapsed_states = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let base = random_lts(&mut rng, n, &["a", "b", "tau"], 0.12);
        let cycles = rng.gen_range(1..=3);
        let l = inject_tau_cycles(&mut rng, &base, cycles);
        let c = cfar_collapse(&l);
        let v = branching_bisim(&c, &l, true);
        if !v.equivalent {
            return Err(format!("cfar_collapse changed behaviour: {}", v.counterexample.unwrap()));
        }
        collapsed_states += l.num_states() - c.num_states().min(l.num_states());
    }
    Ok(format!(
        "QTI1..5 checked {:?} times ({skipped} oversized skipped); RDP {rdp} equations; RSP {rsp} specs; cfar removed {collapsed_states} states over 200 LTSs",
        counts
    ))
}

// 4 -------------------------------------------------------------------------

fn abstracted(cfg: &QaqpConfig) -> Lts {
    let m = build_system(cfg);
    explore(&Semantics::new(&m.spec, &m.comm), m.entry.as_ref().unwrap(), cfg.budget)
        .unwrap()
        .lts
}

fn mutations() -> Outcome {
    let mut lines = Vec::new();
    let mut redundant = Vec::new();
    for m in Mutation::ALL {
        for delta in 1..=3 {
            let cfg = QaqpConfig {
                mutation: Some(m),
                check_reference_tables: false,
                ..QaqpConfig::with_delta(delta)
            };
            let r = verify(&cfg).map_err(|e| e.to_string())?;
            if r.equivalent {
                return Err(format!("{} at delta={delta}: the check still passes", m.describe()));
            }
            let c = r
                .counterexample
                .ok_or_else(|| format!("{} at delta={delta}: no counterexample", m.describe()))?;
            // The unmutated model fails the check as well, so the failure is
            // only caused by the mutation if the two systems differ.
            let v = branching_bisim(&abstracted(&cfg), &abstracted(&QaqpConfig::with_delta(delta)), true);
            if delta == 1 {
                lines.push(format!("{}: {c}", m.describe()));
            }
            if v.equivalent {
                redundant.push(format!("{} (delta={delta})", m.describe()));
            }
        }
    }
    if redundant.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(format!(
            "rooted branching bisimilar to the unmutated model, so the mutation does not cause the failure: {}\n      {}",
            redundant.join(", "),
            lines.join("\n      ")
        ))
    }
}

// 5 -------------------------------------------------------------------------

fn quantum_identities() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut branches = BTreeSet::new();
    let mut worst_norm = 0.0f64;
    let mut worst_fid = 0.0f64;
    let mut track = |s: &QuantumState| worst_norm = worst_norm.max((s.norm() - 1.0).abs());
    for d in QubitData::random_batch(50, 5) {
        let mut s = QuantumState::new();
        s.allocate_state("q", d.alpha, d.beta).map_err(|e| e.to_string())?;
        track(&s);
        make_epr(&mut s, "A", "B").map_err(|e| e.to_string())?;
        track(&s);
        let kl = bell_measure(&mut s, "q", "A", &mut rng).map_err(|e| e.to_string())?;
        track(&s);
        pauli_correct(&mut s, "B", kl).map_err(|e| e.to_string())?;
        track(&s);
        branches.insert(kl);
        let f = s.fidelity("B", d.alpha, d.beta).map_err(|e| e.to_string())?;
        worst_fid = worst_fid.max((f - 1.0).abs());
    }
    for kl in Kl::ALL {
        let mut s = QuantumState::new();
        make_epr(&mut s, "M", "N").map_err(|e| e.to_string())?;
        superdense_encode(&mut s, "M", kl).map_err(|e| e.to_string())?;
        track(&s);
        let got = superdense_decode(&mut s, "M", "N", &mut rng).map_err(|e| e.to_string())?;
        track(&s);
        if got != kl {
            return Err(format!("superdense coding sent {kl}, decoded {got}"));
        }
    }
    if branches.len() != 4 {
        return Err(format!("only branches {branches:?} exercised"));
    }
    if worst_fid > TOL || worst_norm > TOL {
        return Err(format!("fidelity error {worst_fid:e}, norm error {worst_norm:e}"));
    }
    Ok(format!(
        "50 teleportations, all 4 branches, max |F-1| = {worst_fid:.1e}, max |norm-1| = {worst_norm:.1e}; superdense identity on 00 01 10 11"
    ))
}

// 6 -------------------------------------------------------------------------

fn simulation() -> Outcome {
    let mut runs = 0;
    let mut retrans = 0;
    for p in [0.0, 0.1, 0.25, 0.5] {
        for seed in 0..5u64 {
            let data = QubitData::random_batch(20, seed);
            let mut ch = NoisyChannel::new(p, NoiseModel::DetectableFlag, seed).map_err(|e| e.to_string())?;
            let r = run_protocol(&data, &mut ch, seed, &RunOptions::default())
                .map_err(|e| format!("p={p} seed={seed}: {e}"))?;
            let order: Vec<usize> = r.delivered.iter().map(|d| d.index).collect();
            if order != (1..=20).collect::<Vec<_>>() {
                return Err(format!("p={p} seed={seed}: delivered {order:?}"));
            }
            if let Some(d) = r.delivered.iter().find(|d| (d.fidelity - 1.0).abs() > 1e-9) {
                return Err(format!("p={p} seed={seed}: datum {} has fidelity {}", d.index, d.fidelity));
            }
            if r.max_norm_error > 1e-9 || r.max_live_qubits > 6 {
                return Err(format!("p={p} seed={seed}: norm error {} with {} qubits", r.max_norm_error, r.max_live_qubits));
            }
            if !conforms(&r.trace, 1).map_err(|e| e.to_string())? {
                return Err(format!("p={p} seed={seed}: trace not accepted by the encapsulated model"));
            }
            if p == 0.0 && r.trace.total_retransmissions() != 0 {
                return Err(format!("seed={seed}: retransmissions on a perfect channel"));
            }
            runs += 1;
            retrans += r.trace.total_retransmissions();
        }
    }
    Ok(format!("{runs} runs x 20 data complete, in order, fidelity 1, 100% conformant ({retrans} retransmissions)"))
}

// 7 -------------------------------------------------------------------------

fn agree_on(l: &Lts) -> Result<(), String> {
    let p = branching_partition(l);
    let r = naive_branching(l);
    for (s, row) in r.iter().enumerate() {
        for (t, &related) in row.iter().enumerate() {
            if p.same_block(s, t) != related {
                return Err(format!("disagreement on states {s},{t} of\n{}", l.to_text()));
            }
        }
    }
    Ok(())
}

fn exhaustive(n: usize, labels: &[&str]) -> Result<usize, String> {
    let slots: Vec<(usize, &str, usize)> = (0..n)
        .flat_map(|s| labels.iter().flat_map(move |&a| (0..n).map(move |t| (s, a, t))))
        .collect();
    let total = 1usize << slots.len();
    for mask in 0..total {
        let edges: Vec<_> = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        agree_on(&lts(n, &edges))?;
    }
    Ok(total)
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=3 {
        checked += exhaustive(n, &["tau", "a"])?;
    }
    for n in 1..=2 {
        checked += exhaustive(n, &["tau", "a", "b"])?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20_000 {
        let n = rng.gen_range(4..=6);
        let density = rng.gen_range(0.05..0.3);
        let l1 = random_lts(&mut rng, n, &LABELS_TAU_AB, density);
        agree_on(&l1)?;
        let m = rng.gen_range(1..=6);
        let l2 = random_lts(&mut rng, m, &LABELS_TAU_AB, density);
        let u = disjoint_union(&l1, &l2);
        let rb = naive_branching(&u);
        let (i1, i2) = (l1.initial, l1.num_states() + l2.initial);
        if branching_bisim(&l1, &l2, true).equivalent != naive_rooted(&u, &rb, i1, i2) {
            return Err(format!("rooted disagreement on\n{}\n{}", l1.to_text(), l2.to_text()));
        }
        checked += 1;
    }
    within(Duration::from_secs(60), start.elapsed())?;
    Ok(format!(
        "{checked} LTSs agree (exhaustive up to 3 states over {{tau,a}} and 2 states over {{tau,a,b}}; 20000 random with 4..6 states) in {:.1?}",
        start.elapsed()
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("equation-table reproduction", equation_table),
        ("main theorem for |delta| = 1, 2, 3", main_theorem),
        ("axiom property suite", axioms),
        ("mutation sensitivity", mutations),
        ("quantum identities", quantum_identities),
        ("protocol simulation", simulation),
        ("equivalence oracle agreement", oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS [{elapsed:.2?}] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL [{elapsed:.2?}] {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
