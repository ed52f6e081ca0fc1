//! The `qacp` command line. [`run`] writes everything to the given sink so
//! output can be captured; the binary only maps the outcome to an exit code.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::equivalence::{
    branching_bisim, branching_partition, quotient, strong_bisim, strong_partition, weak_trace_inclusion,
    Counterexample, Side,
};
use crate::error::{Error, Result};
use crate::qaqp::{verify, LtsStats, Mutation, QaqpConfig, Verdict};
use crate::qsim::{conforms, run_protocol, NoiseModel, NoisyChannel, QubitData, RunOptions};
use crate::semantics::{explore, from_aut, to_aut, Lts, Semantics, DEFAULT_BUDGET};
use crate::syntax::{instantiate, parse, parse_with_entry, pretty, Instance};

#[derive(Debug, Parser)]
#[command(name = "qacp", version, about = "Process-algebra toolkit and alternating qubit protocol checker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a .qacp file and print it in normal layout.
    Parse(ParseArgs),
    /// Explore the state space of a term.
    Explore(ExploreArgs),
    /// Reduce a term's LTS modulo strong or branching bisimilarity.
    Minimize(MinimizeArgs),
    /// Compare two terms of the same file.
    Check(CheckArgs),
    /// Run the alternating qubit protocol verification pipeline.
    VerifyQaqp(VerifyArgs),
    /// Simulate the protocol on a statevector with a noisy channel.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Input .qacp file.
    pub file: PathBuf,
    /// Data domain size, overriding the file's `delta`.
    #[arg(long)]
    pub delta: Option<u32>,
    /// Maximum number of states to explore.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub delta: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LtsFormat {
    Aut,
    Text,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Term to explore; defaults to the file's `init`.
    pub term: Option<String>,
    #[arg(long, value_enum, default_value_t = LtsFormat::Aut)]
    pub format: LtsFormat,
    /// Write the LTS here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reduction {
    Strong,
    Branching,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    pub term: Option<String>,
    #[arg(long, value_enum, default_value_t = Reduction::Branching)]
    pub equivalence: Reduction,
    #[arg(long, value_enum, default_value_t = LtsFormat::Aut)]
    pub format: LtsFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Equivalence {
    Strong,
    Branching,
    WeakTrace,
}

/// `--rooted` (default) or `--no-rooted`.
#[derive(Debug, Args)]
pub struct RootedFlag {
    /// Use rooted branching bisimilarity (default).
    #[arg(long, overrides_with = "no_rooted")]
    pub rooted: bool,
    #[arg(long = "no-rooted")]
    pub no_rooted: bool,
}

impl RootedFlag {
    pub fn value(&self) -> bool {
        !self.no_rooted
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    pub lhs: String,
    pub rhs: String,
    #[arg(long, value_enum, default_value_t = Equivalence::Branching)]
    pub equivalence: Equivalence,
    #[command(flatten)]
    pub rooted: RootedFlag,
    /// Print the verdict as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MutationArg {
    DropS6ReceiveM,
    DropS2ReceiveErr,
    DropR6ReceiveErr,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Mutation {
        match m {
            MutationArg::DropS6ReceiveM => Mutation::DropS6ReceiveM,
            MutationArg::DropS2ReceiveErr => Mutation::DropS2ReceiveErr,
            MutationArg::DropR6ReceiveErr => Mutation::DropR6ReceiveErr,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = crate::syntax::DEFAULT_DELTA)]
    pub delta: u32,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub rooted: RootedFlag,
    /// Skip the comparison with the reference equation table.
    #[arg(long)]
    pub no_tables: bool,
    /// Verify a deliberately broken variant of the model.
    #[arg(long, value_enum)]
    pub mutation: Option<MutationArg>,
    #[arg(long)]
    pub json: bool,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Flag,
    BitFlip,
    PhaseFlip,
}

impl From<NoiseArg> for NoiseModel {
    fn from(n: NoiseArg) -> NoiseModel {
        match n {
            NoiseArg::Flag => NoiseModel::DetectableFlag,
            NoiseArg::BitFlip => NoiseModel::BitFlip,
            NoiseArg::PhaseFlip => NoiseModel::PhaseFlip,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Corruption probability per channel message.
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of qubit states to send.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Abstract data domain size used for labels and conformance.
    #[arg(long, default_value_t = 1)]
    pub delta: u32,
    #[arg(long, value_enum, default_value_t = NoiseArg::Flag)]
    pub noise: NoiseArg,
    /// Messages allowed per session.
    #[arg(long, default_value_t = crate::qsim::DEFAULT_RETRY_CAP)]
    pub retry_cap: usize,
    /// Check the action trace against the encapsulated model.
    #[arg(long)]
    pub conformance: bool,
    /// Write the action trace, one label per line, to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Whether the command's check passed. Errors map to exit code 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Failure => 1,
        }
    }

    fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<output>"),
        source: e,
    }
}

fn load(file: &Path, term: Option<&str>, delta: Option<u32>) -> Result<Instance> {
    let src = read(file)?;
    let in_file = |source| Error::Parse {
        path: file.to_path_buf(),
        source,
    };
    let mut doc = parse(&src).map_err(in_file)?;
    if let Some(t) = term {
        doc = parse_with_entry(&src, t).map_err(|source| Error::Term {
            term: t.to_string(),
            source,
        })?;
    }
    instantiate(&doc, delta).map_err(in_file)
}

fn explore_instance(inst: &Instance, budget: usize) -> Result<Lts> {
    let entry = inst.model.entry.as_ref().ok_or(Error::NoEntry)?;
    let sem = Semantics::new(&inst.model.spec, &inst.model.comm);
    Ok(explore(&sem, entry, budget)?.lts)
}

fn load_lts(m: &ModelArgs, term: Option<&str>) -> Result<Lts> {
    let inst = load(&m.file, term, m.delta)?;
    log::debug!("instantiated {} equations at delta {}", inst.model.spec.len(), inst.delta);
    explore_instance(&inst, m.budget)
}

fn stats_text(title: &str, s: &LtsStats) -> String {
    format!(
        "{title}: {} states, {} transitions, {} tau, {} deadlocks\n",
        s.states, s.transitions, s.tau_transitions, s.deadlocks
    )
}

/// Renders `lts`; every `.aut` export is read back and compared first.
fn render_lts(lts: &Lts, format: LtsFormat) -> Result<String> {
    match format {
        LtsFormat::Text => Ok(lts.to_text()),
        LtsFormat::Aut => {
            let text = to_aut(lts);
            if to_aut(&from_aut(&text)?) != text {
                return Err(Error::AutRoundTrip);
            }
            Ok(text)
        }
    }
}

fn emit_lts(out: &mut dyn Write, lts: &Lts, title: &str, format: LtsFormat, output: Option<&Path>) -> Result<()> {
    let body = render_lts(lts, format)?;
    match output {
        Some(path) => {
            write_file(path, &body)?;
            out.write_all(stats_text(title, &LtsStats::of(lts)).as_bytes()).map_err(io)?;
        }
        None => out.write_all(body.as_bytes()).map_err(io)?,
    }
    Ok(())
}

fn counterexample_json(c: &Option<Counterexample>) -> serde_json::Value {
    serde_json::to_value(c).expect("counterexample serializes")
}

fn cmd_parse(a: &ParseArgs, out: &mut dyn Write) -> Result<Outcome> {
    let src = read(&a.file)?;
    let err = |source| Error::Parse {
        path: a.file.clone(),
        source,
    };
    let doc = parse(&src).map_err(err)?;
    let inst = instantiate(&doc, a.delta).map_err(err)?;
    let mut text = pretty(&doc);
    let _ = writeln!(
        text,
        "\n// {} equations after instantiation over {} data values",
        inst.model.spec.len(),
        inst.delta
    );
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(Outcome::Success)
}

fn cmd_explore(a: &ExploreArgs, out: &mut dyn Write) -> Result<Outcome> {
    let lts = load_lts(&a.model, a.term.as_deref())?;
    emit_lts(out, &lts, "explored", a.format, a.output.as_deref())?;
    Ok(Outcome::Success)
}

fn cmd_minimize(a: &MinimizeArgs, out: &mut dyn Write) -> Result<Outcome> {
    let lts = load_lts(&a.model, a.term.as_deref())?;
    let p = match a.equivalence {
        Reduction::Strong => strong_partition(&lts),
        Reduction::Branching => branching_partition(&lts),
    };
    let q = quotient(&lts, &p);
    emit_lts(out, &q, "quotient", a.format, a.output.as_deref())?;
    Ok(Outcome::Success)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Result<Outcome> {
    let l = load_lts(&a.model, Some(&a.lhs))?;
    let r = load_lts(&a.model, Some(&a.rhs))?;
    let rooted = a.rooted.value();
    let (name, equivalent, counterexample) = match a.equivalence {
        Equivalence::Strong => {
            let v = strong_bisim(&l, &r);
            ("strong bisimilarity".to_string(), v.equivalent, v.counterexample)
        }
        Equivalence::Branching => {
            let v = branching_bisim(&l, &r, rooted);
            let name = if rooted { "rooted branching bisimilarity" } else { "branching bisimilarity" };
            (name.to_string(), v.equivalent, v.counterexample)
        }
        Equivalence::WeakTrace => {
            let c = match weak_trace_inclusion(&l, &r) {
                Some((trace, unmatched)) => Some((trace, unmatched, Side::Left)),
                None => weak_trace_inclusion(&r, &l).map(|(t, u)| (t, u, Side::Right)),
            };
            let c = c.map(|(trace, unmatched, side)| Counterexample {
                trace,
                side,
                unmatched: Some(unmatched),
                trace_difference: true,
            });
            ("weak trace equivalence".to_string(), c.is_none(), c)
        }
    };
    let text = if a.json {
        let v = json!({
            "lhs": a.lhs,
            "rhs": a.rhs,
            "equivalence": name,
            "equivalent": equivalent,
            "lhs_states": l.num_states(),
            "rhs_states": r.num_states(),
            "counterexample": counterexample_json(&counterexample),
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
    } else {
        let mut s = format!(
            "{} {} {} modulo {name}\n",
            a.lhs,
            if equivalent { "is equivalent to" } else { "is NOT equivalent to" },
            a.rhs
        );
        if let Some(c) = &counterexample {
            let _ = writeln!(s, "counterexample: {c}");
        }
        s
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(Outcome::from_bool(equivalent))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome> {
    let cfg = QaqpConfig {
        delta_size: a.delta,
        budget: a.budget,
        check_reference_tables: !a.no_tables,
        rooted: a.rooted.value(),
        mutation: a.mutation.map(Mutation::from),
    };
    let report = verify(&cfg)?;
    let text = if a.json {
        format!("{}\n", report.to_json(a.timings))
    } else {
        report.to_text(a.timings)
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(Outcome::from_bool(report.verdict == Verdict::Pass))
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<Outcome> {
    if a.count == 0 {
        return Err(Error::Usage("--count must be at least 1".into()));
    }
    let mut channel = NoisyChannel::new(a.p, a.noise.into(), a.seed)
        .map_err(|e| Error::Usage(e.to_string()))?;
    let data = QubitData::random_batch(a.count, a.seed);
    let opts = RunOptions {
        retry_cap: a.retry_cap,
        delta: a.delta,
    };
    let run = run_protocol(&data, &mut channel, a.seed, &opts)?;
    let conformant = if a.conformance {
        Some(conforms(&run.trace, a.delta)?)
    } else {
        None
    };
    if let Some(path) = &a.trace {
        write_file(path, &run.trace.to_text())?;
    }
    let in_order = run.delivered.iter().enumerate().all(|(i, d)| d.index == i + 1);
    let min_fidelity = run.delivered.iter().map(|d| d.fidelity).fold(1.0_f64, f64::min);
    let ok = run.delivered.len() == a.count && in_order && conformant != Some(false);
    let text = if a.json {
        let v = json!({
            "p": a.p,
            "seed": a.seed,
            "count": a.count,
            "delivered": run.delivered.len(),
            "in_order": in_order,
            "min_fidelity": min_fidelity,
            "actions": run.trace.actions.len(),
            "retransmissions": run.trace.total_retransmissions(),
            "noise_events": run.trace.total_noise_events(),
            "max_live_qubits": run.max_live_qubits,
            "conformant": conformant,
            "sessions": run.trace.sessions,
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "simulation: p={} seed={} noise={:?}", a.p, a.seed, NoiseModel::from(a.noise));
        let _ = writeln!(
            s,
            "delivered: {}/{} ({})",
            run.delivered.len(),
            a.count,
            if in_order { "in order" } else { "OUT OF ORDER" }
        );
        let _ = writeln!(s, "min fidelity: {min_fidelity:.12}");
        let _ = writeln!(s, "actions: {}", run.trace.actions.len());
        let _ = writeln!(s, "retransmissions: {}", run.trace.total_retransmissions());
        let _ = writeln!(s, "noise events: {}", run.trace.total_noise_events());
        let _ = writeln!(s, "max live qubits: {}", run.max_live_qubits);
        for st in &run.trace.sessions {
            let _ = writeln!(
                s,
                "session {}: b={} d{} messages={} retransmissions={} noise={}",
                st.index, st.bit, st.datum, st.messages, st.retransmissions, st.noise_events
            );
        }
        if let Some(c) = conformant {
            let _ = writeln!(s, "conformance: {}", if c { "PASS" } else { "FAIL" });
        }
        s
    };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(Outcome::from_bool(ok))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Parse(a) => cmd_parse(a, out),
        Command::Explore(a) => cmd_explore(a, out),
        Command::Minimize(a) => cmd_minimize(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::VerifyQaqp(a) => cmd_verify(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
    }
}
