//! C ABI for the `qacp` library.
//!
//! Every object crosses the boundary as an opaque handle owned by the
//! caller and released with its `_free` function. Fallible functions return
//! a [`QacpStatus`]; on failure the message is available from
//! [`qacp_last_error`] on the same thread until the next failing call.
//! Strings returned by the library are NUL-terminated UTF-8 and must be
//! released with [`qacp_string_free`]. Panics never unwind into C; they
//! are reported as [`QacpStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qacp::equivalence::{branching_bisim, branching_partition, quotient, strong_bisim, strong_partition};
use qacp::qaqp::{verify, QaqpConfig, Verdict};
use qacp::qsim::{conforms, run_protocol, NoiseModel, NoisyChannel, QubitData, RunOptions, DEFAULT_RETRY_CAP};
use qacp::semantics::{explore, from_aut, to_aut, Lts, Semantics, DEFAULT_BUDGET};
use qacp::syntax::{instantiate, parse, parse_with_entry, Instance};

/// Result of every fallible call. `Ok` is zero; everything else is an error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QacpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Parse = 5,
    Semantics = 6,
    Verify = 7,
    Simulation = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QacpEquivalence {
    Strong = 0,
    Branching = 1,
    RootedBranching = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QacpNoise {
    DetectableFlag = 0,
    BitFlip = 1,
    PhaseFlip = 2,
}

impl From<QacpNoise> for NoiseModel {
    fn from(n: QacpNoise) -> NoiseModel {
        match n {
            QacpNoise::DetectableFlag => NoiseModel::DetectableFlag,
            QacpNoise::BitFlip => NoiseModel::BitFlip,
            QacpNoise::PhaseFlip => NoiseModel::PhaseFlip,
        }
    }
}

/// A parsed `.qacp` document instantiated over its data domain.
pub struct QacpModel {
    source: String,
    delta: Option<u32>,
    instance: Instance,
}

/// A finite labelled transition system.
pub struct QacpLts {
    lts: Lts,
}

/// Summary of a verification run of the built-in protocol model.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QacpVerifySummary {
    pub passed: bool,
    pub encapsulated_states: usize,
    pub abstracted_states: usize,
    pub quotient_states: usize,
    pub external_states: usize,
}

/// Summary of a simulated protocol run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct QacpSimSummary {
    pub delivered: usize,
    pub in_order: bool,
    pub min_fidelity: f64,
    pub actions: usize,
    pub retransmissions: usize,
    pub noise_events: usize,
    pub max_live_qubits: usize,
    /// Meaningful only when conformance was requested.
    pub conformant: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(QacpStatus, String);

type Outcome<T> = Result<T, Failure>;

fn fail<T>(status: QacpStatus, msg: impl Into<String>) -> Outcome<T> {
    Err(Failure(status, msg.into()))
}

fn set_last_error(msg: &str) {
    // Interior NULs would truncate the message; replace them.
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Outcome<()>) -> QacpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QacpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            QacpStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or points to a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return fail(QacpStatus::NullArgument, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(QacpStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` is null or points to a live object of type `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref()
        .map_or_else(|| fail(QacpStatus::NullArgument, format!("{what} is null")), Ok)
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Outcome<()> {
    if out.is_null() {
        return fail(QacpStatus::NullArgument, format!("{what} is null"));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior NUL").into_raw()
}

fn delta_arg(delta: u32) -> Option<u32> {
    (delta != 0).then_some(delta)
}

fn budget_arg(budget: usize) -> usize {
    if budget == 0 {
        DEFAULT_BUDGET
    } else {
        budget
    }
}

fn load_model(source: String, delta: Option<u32>) -> Outcome<QacpModel> {
    let doc = parse(&source).or_else(|e| fail(QacpStatus::Parse, e.to_string()))?;
    let instance = instantiate(&doc, delta).or_else(|e| fail(QacpStatus::Parse, e.to_string()))?;
    Ok(QacpModel {
        source,
        delta,
        instance,
    })
}

fn explore_model(m: &QacpModel, entry: Option<&str>, budget: usize) -> Outcome<Lts> {
    let reentered;
    let inst = match entry {
        None => &m.instance,
        Some(t) => {
            let doc = parse_with_entry(&m.source, t).or_else(|e| fail(QacpStatus::Parse, format!("in `{t}`: {e}")))?;
            reentered = instantiate(&doc, m.delta).or_else(|e| fail(QacpStatus::Parse, e.to_string()))?;
            &reentered
        }
    };
    let Some(term) = inst.model.entry.as_ref() else {
        return fail(QacpStatus::InvalidArgument, "model has no `init` term and no entry was given");
    };
    let sem = Semantics::new(&inst.model.spec, &inst.model.comm);
    explore(&sem, term, budget)
        .map(|e| e.lts)
        .or_else(|e| fail(QacpStatus::Semantics, e.to_string()))
}

fn new_lts(lts: Lts) -> *mut QacpLts {
    Box::into_raw(Box::new(QacpLts { lts }))
}

/// Message of the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn qacp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qacp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and instantiates a `.qacp` document. `delta == 0` keeps the
/// document's own data domain size.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_model_from_str(source: *const c_char, delta: u32, out: *mut *mut QacpModel) -> QacpStatus {
    guard(|| {
        let src = read_str(source, "source")?;
        let m = load_model(src.to_string(), delta_arg(delta))?;
        store(out, Box::into_raw(Box::new(m)), "out")
    })
}

/// Like [`qacp_model_from_str`], reading the document from `path`.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_model_from_file(path: *const c_char, delta: u32, out: *mut *mut QacpModel) -> QacpStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        let src = std::fs::read_to_string(path).or_else(|e| fail(QacpStatus::Io, format!("{path}: {e}")))?;
        let m = load_model(src, delta_arg(delta))?;
        store(out, Box::into_raw(Box::new(m)), "out")
    })
}

/// Number of equations after instantiation.
///
/// # Safety
/// `model` is null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn qacp_model_equation_count(model: *const QacpModel) -> usize {
    model.as_ref().map_or(0, |m| m.instance.model.spec.len())
}

/// # Safety
/// `model` is null or a live model handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qacp_model_free(model: *mut QacpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Explores `entry` (a term over the model's equations) or, when `entry`
/// is null, the model's `init` term. `budget == 0` uses the default budget.
///
/// # Safety
/// `model` is a live model handle; `entry` is null or a NUL-terminated
/// string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_model_explore(
    model: *const QacpModel,
    entry: *const c_char,
    budget: usize,
    out: *mut *mut QacpLts,
) -> QacpStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let entry = if entry.is_null() { None } else { Some(read_str(entry, "entry")?) };
        let lts = explore_model(m, entry, budget_arg(budget))?;
        store(out, new_lts(lts), "out")
    })
}

/// Reads an LTS in Aldebaran `.aut` format.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_from_aut(text: *const c_char, out: *mut *mut QacpLts) -> QacpStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let lts = from_aut(text).or_else(|e| fail(QacpStatus::Parse, e.to_string()))?;
        store(out, new_lts(lts), "out")
    })
}

/// # Safety
/// `lts` is null or a live LTS handle.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_num_states(lts: *const QacpLts) -> usize {
    lts.as_ref().map_or(0, |l| l.lts.num_states())
}

/// # Safety
/// `lts` is null or a live LTS handle.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_num_transitions(lts: *const QacpLts) -> usize {
    lts.as_ref().map_or(0, |l| l.lts.num_transitions())
}

/// # Safety
/// `lts` is null or a live LTS handle.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_initial(lts: *const QacpLts) -> usize {
    lts.as_ref().map_or(0, |l| l.lts.initial)
}

/// `.aut` rendering of `lts`, or null if `lts` is null. Free with
/// [`qacp_string_free`].
///
/// # Safety
/// `lts` is null or a live LTS handle.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_to_aut(lts: *const QacpLts) -> *mut c_char {
    lts.as_ref().map_or(ptr::null_mut(), |l| to_c_string(to_aut(&l.lts)))
}

/// Quotient of `lts` under strong or branching bisimilarity.
/// `RootedBranching` reduces like `Branching`.
///
/// # Safety
/// `lts` is a live LTS handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_minimize(lts: *const QacpLts, equivalence: QacpEquivalence, out: *mut *mut QacpLts) -> QacpStatus {
    guard(|| {
        let l = &deref(lts, "lts")?.lts;
        let p = match equivalence {
            QacpEquivalence::Strong => strong_partition(l),
            QacpEquivalence::Branching | QacpEquivalence::RootedBranching => branching_partition(l),
        };
        store(out, new_lts(quotient(l, &p)), "out")
    })
}

/// Compares the initial states of two LTSs. On inequivalence and when
/// `counterexample` is not null, a distinguishing trace is stored there
/// (free with [`qacp_string_free`]); otherwise null is stored.
///
/// # Safety
/// `left` and `right` are live LTS handles; `equivalent` is valid for
/// writes; `counterexample` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_check(
    left: *const QacpLts,
    right: *const QacpLts,
    equivalence: QacpEquivalence,
    equivalent: *mut bool,
    counterexample: *mut *mut c_char,
) -> QacpStatus {
    guard(|| {
        let l = &deref(left, "left")?.lts;
        let r = &deref(right, "right")?.lts;
        let v = match equivalence {
            QacpEquivalence::Strong => strong_bisim(l, r),
            QacpEquivalence::Branching => branching_bisim(l, r, false),
            QacpEquivalence::RootedBranching => branching_bisim(l, r, true),
        };
        store(equivalent, v.equivalent, "equivalent")?;
        if !counterexample.is_null() {
            let c = v.counterexample.map_or(ptr::null_mut(), |c| to_c_string(c.to_string()));
            counterexample.write(c);
        }
        Ok(())
    })
}

/// # Safety
/// `lts` is null or a live LTS handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qacp_lts_free(lts: *mut QacpLts) {
    if !lts.is_null() {
        drop(Box::from_raw(lts));
    }
}

/// Verifies the built-in protocol model over `delta` data values
/// (`0` selects the default). A failing verdict is still `Ok`; inspect
/// `summary->passed`. When `report_json` is not null the full report is
/// stored there as JSON (free with [`qacp_string_free`]).
///
/// # Safety
/// `summary` is valid for writes; `report_json` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_verify_qaqp(
    delta: u32,
    rooted: bool,
    summary: *mut QacpVerifySummary,
    report_json: *mut *mut c_char,
) -> QacpStatus {
    guard(|| {
        let mut cfg = QaqpConfig {
            rooted,
            ..QaqpConfig::default()
        };
        if let Some(d) = delta_arg(delta) {
            cfg.delta_size = d;
        }
        let report = verify(&cfg).or_else(|e| fail(QacpStatus::Verify, e.to_string()))?;
        let s = QacpVerifySummary {
            passed: report.verdict == Verdict::Pass,
            encapsulated_states: report.encapsulated.states,
            abstracted_states: report.abstracted.states,
            quotient_states: report.quotient.states,
            external_states: report.external.states,
        };
        store(summary, s, "summary")?;
        if !report_json.is_null() {
            report_json.write(to_c_string(report.to_json(false)));
        }
        Ok(())
    })
}

/// Simulates `count` random qubits sent through a channel that corrupts
/// each message with probability `p`. `retry_cap == 0` selects the default
/// cap; `delta` is the size of the abstract data domain used in the trace.
/// With `check_conformance`, the trace is replayed against the abstract
/// model and the result stored in `summary->conformant`.
///
/// # Safety
/// `summary` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qacp_simulate(
    p: f64,
    seed: u64,
    count: usize,
    noise: QacpNoise,
    delta: u32,
    retry_cap: usize,
    check_conformance: bool,
    summary: *mut QacpSimSummary,
) -> QacpStatus {
    guard(|| {
        if count == 0 {
            return fail(QacpStatus::InvalidArgument, "count must be at least 1");
        }
        let mut channel =
            NoisyChannel::new(p, noise.into(), seed).or_else(|e| fail(QacpStatus::InvalidArgument, e.to_string()))?;
        let data = QubitData::random_batch(count, seed);
        let opts = RunOptions {
            retry_cap: if retry_cap == 0 { DEFAULT_RETRY_CAP } else { retry_cap },
            delta: delta.max(1),
        };
        let run = run_protocol(&data, &mut channel, seed, &opts).or_else(|e| fail(QacpStatus::Simulation, e.to_string()))?;
        let conformant = if check_conformance {
            conforms(&run.trace, opts.delta).or_else(|e| fail(QacpStatus::Semantics, e.to_string()))?
        } else {
            false
        };
        let s = QacpSimSummary {
            delivered: run.delivered.len(),
            in_order: run.delivered.iter().enumerate().all(|(i, d)| d.index == i + 1),
            min_fidelity: run.delivered.iter().map(|d| d.fidelity).fold(1.0, f64::min),
            actions: run.trace.actions.len(),
            retransmissions: run.trace.total_retransmissions(),
            noise_events: run.trace.total_noise_events(),
            max_live_qubits: run.max_live_qubits,
            conformant,
        };
        store(summary, s, "summary")
    })
}
