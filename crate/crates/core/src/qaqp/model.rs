//! The alternating qubit protocol as a recursive specification.
//!
//! Alice's session states `S_1..S_6` carry the session bit and the datum she
//! read. Bob learns the datum only through the entanglement merge of Alice's
//! `Me[A,d,kl]` with his shadow constant, so `R..R_4` are datum-free and
//! `R_5..R_10` carry it. After a corrupted `M` Bob regenerates the pair in the
//! datum-carrying retry copies `R_2r`, `R_3r`, `R_4r`.

use serde::Serialize;

use crate::term::{
    ActionLabel, ActionSet, ArgPattern, Bit, CommFunction, CommRule, DataValue, LabelPattern, LabelTemplate,
    Model, RecursiveSpec, TemplateArg, Term, VarName,
};

/// A single summand removed from the model, used to show the checker is not vacuous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mutation {
    /// `S_6` loses `receive_D[M].S_4`.
    DropS6ReceiveM,
    /// `S_2` loses `receive_D[err].S_1`.
    DropS2ReceiveErr,
    /// `R_6` loses `receive_D[err].R_2`.
    DropR6ReceiveErr,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::DropS6ReceiveM,
        Mutation::DropS2ReceiveErr,
        Mutation::DropR6ReceiveErr,
    ];

    pub fn describe(self) -> &'static str {
        match self {
            Mutation::DropS6ReceiveM => "S_6 without receive_D[M].S_4",
            Mutation::DropS2ReceiveErr => "S_2 without receive_D[err].S_1",
            Mutation::DropR6ReceiveErr => "R_6 without receive_D[err].R_2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QaqpConfig {
    /// Number of data values `d1..d{delta_size}`; at least 1.
    pub delta_size: u32,
    /// Exploration budget in states.
    pub budget: usize,
    /// Compare the derived equations with the reference table (only at `delta_size == 1`).
    pub check_reference_tables: bool,
    /// Use rooted branching bisimilarity for the final check.
    pub rooted: bool,
    pub mutation: Option<Mutation>,
}

impl Default for QaqpConfig {
    fn default() -> Self {
        QaqpConfig {
            delta_size: crate::syntax::DEFAULT_DELTA,
            budget: crate::semantics::DEFAULT_BUDGET,
            check_reference_tables: true,
            rooted: true,
            mutation: None,
        }
    }
}

impl QaqpConfig {
    pub fn with_delta(delta_size: u32) -> Self {
        QaqpConfig {
            delta_size,
            ..Default::default()
        }
    }

    fn data(&self) -> impl Iterator<Item = DataValue> {
        (1..=self.delta_size).map(DataValue::Datum)
    }

    fn drops(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }
}

fn bit(b: Bit) -> DataValue {
    DataValue::Bit(b)
}

fn q(name: &str) -> DataValue {
    DataValue::qubit(name)
}

fn act(name: &str, args: Vec<DataValue>) -> ActionLabel {
    ActionLabel::new(name, args)
}

fn send_d(v: DataValue) -> ActionLabel {
    act("send_D", vec![v])
}

fn receive_d(v: DataValue) -> ActionLabel {
    act("receive_D", vec![v])
}

fn me_a(d: &DataValue) -> ActionLabel {
    act("Me", vec![q("A"), d.clone(), DataValue::Kl])
}

fn sigma_m() -> ActionLabel {
    act("sigma", vec![DataValue::Kl, q("M")])
}

fn v(name: &str, args: Vec<DataValue>) -> Term {
    Term::var(VarName::new(name, args))
}

fn pre(a: ActionLabel, x: Term) -> Term {
    Term::prefix(a, x)
}

/// Alice's equations for session bit `b`: `S(b)` and `S_1..S_6` per datum.
pub fn build_alice(b: Bit, cfg: &QaqpConfig) -> RecursiveSpec {
    let mut spec = RecursiveSpec::new();
    let bv = bit(b);
    let next = || v("S", vec![bit(b.flip())]);
    spec.insert(
        VarName::new("S", vec![bv.clone()]),
        Term::sum(
            cfg.data()
                .map(|d| pre(act("read_Q", vec![d.clone()]), v("S_1", vec![bv.clone(), d]))),
        ),
    );
    for d in cfg.data() {
        let s = |i: u8| v(&format!("S_{i}"), vec![bv.clone(), d.clone()]);
        let name = |i: u8| VarName::new(format!("S_{i}"), vec![bv.clone(), d.clone()]);
        spec.insert(
            name(1),
            Term::sum([pre(send_d(bv.clone()), s(2)), pre(send_d(DataValue::Err), s(2))]),
        );
        let mut s2 = vec![pre(receive_d(q("M")), s(3)), pre(receive_d(bv.clone()), next())];
        if !cfg.drops(Mutation::DropS2ReceiveErr) {
            s2.push(pre(receive_d(DataValue::Err), s(1)));
        }
        spec.insert(name(2), Term::sum(s2));
        spec.insert(name(3), pre(me_a(&d), s(4)));
        spec.insert(name(4), pre(sigma_m(), s(5)));
        spec.insert(
            name(5),
            Term::sum([pre(send_d(q("M")), s(6)), pre(send_d(DataValue::Err), s(6))]),
        );
        let mut s6 = vec![pre(receive_d(bv.clone()), next()), pre(receive_d(DataValue::Err), s(1))];
        if !cfg.drops(Mutation::DropS6ReceiveM) {
            s6.push(pre(receive_d(q("M")), s(4)));
        }
        spec.insert(name(6), Term::sum(s6));
    }
    spec
}

/// Bob's equations for session bit `b`.
pub fn build_bob(b: Bit, cfg: &QaqpConfig) -> RecursiveSpec {
    let mut spec = RecursiveSpec::new();
    let bv = bit(b);
    let nb = bit(b.flip());
    let r = |name: &str| v(name, vec![bv.clone()]);
    let rn = |name: &str| VarName::new(name, vec![bv.clone()]);
    spec.insert(
        rn("R"),
        Term::sum([
            pre(receive_d(bv.clone()), r("R_2")),
            pre(receive_d(DataValue::Err), r("R_1")),
            pre(receive_d(nb.clone()), r("R_1")),
        ]),
    );
    spec.insert(
        rn("R_1"),
        Term::sum([pre(send_d(DataValue::Err), r("R")), pre(send_d(nb.clone()), r("R"))]),
    );
    spec.insert(rn("R_2"), pre(act("GEN", vec![q("M"), q("N")]), r("R_3")));
    spec.insert(
        rn("R_3"),
        Term::sum([pre(send_d(q("M")), r("R_4")), pre(send_d(DataValue::Err), r("R_4"))]),
    );
    let shadow_me = |d: &DataValue| me_a(d).into_shadow();
    let acks = |spec_target: Term| {
        [
            pre(receive_d(bv.clone()), spec_target.clone()),
            pre(receive_d(DataValue::Err), spec_target),
        ]
    };
    let mut r4: Vec<Term> = cfg
        .data()
        .map(|d| pre(shadow_me(&d), v("R_5", vec![bv.clone(), d])))
        .collect();
    r4.extend(acks(r("R_2")));
    spec.insert(rn("R_4"), Term::sum(r4));
    for d in cfg.data() {
        let s = |name: &str| v(name, vec![bv.clone(), d.clone()]);
        let sn = |name: &str| VarName::new(name, vec![bv.clone(), d.clone()]);
        spec.insert(sn("R_5"), pre(sigma_m().into_shadow(), s("R_6")));
        let mut r6 = vec![pre(receive_d(q("M")), s("R_7"))];
        if !cfg.drops(Mutation::DropR6ReceiveErr) {
            r6.push(pre(receive_d(DataValue::Err), s("R_2r")));
        }
        spec.insert(sn("R_6"), Term::sum(r6));
        spec.insert(
            sn("R_7"),
            Term::sum([pre(send_d(bv.clone()), s("R_8")), pre(send_d(DataValue::Err), s("R_8"))]),
        );
        spec.insert(sn("R_8"), pre(act("Me", vec![q("M"), q("N"), DataValue::Kl]), s("R_9")));
        spec.insert(sn("R_9"), pre(act("sigma", vec![DataValue::Kl, q("B")]), s("R_10")));
        spec.insert(sn("R_10"), pre(act("send_P", vec![d.clone()]), v("R", vec![nb.clone()])));
        spec.insert(sn("R_2r"), pre(act("GEN", vec![q("M"), q("N")]), s("R_3r")));
        spec.insert(
            sn("R_3r"),
            Term::sum([pre(send_d(q("M")), s("R_4r")), pre(send_d(DataValue::Err), r("R_4"))]),
        );
        let mut r4r: Vec<Term> = cfg
            .data()
            .map(|e| pre(shadow_me(&e), v("R_5", vec![bv.clone(), e])))
            .collect();
        r4r.push(pre(sigma_m().into_shadow(), s("R_6")));
        r4r.extend(acks(r("R_2")));
        spec.insert(sn("R_4r"), Term::sum(r4r));
    }
    spec
}

/// Blocked unless synchronised: the channel-D halves, Alice's measurement
/// and Pauli on `M`, and their shadows.
pub fn encapsulation_set() -> ActionSet {
    let any = ArgPattern::Any;
    let is = ArgPattern::Is;
    ActionSet::new([
        LabelPattern::new("send_D", vec![any.clone()]),
        LabelPattern::new("receive_D", vec![any.clone()]),
        LabelPattern::new("Me", vec![is(q("A")), any.clone(), is(DataValue::Kl)]),
        LabelPattern::new("Me", vec![is(q("A")), any, is(DataValue::Kl)]).shadowed(),
        LabelPattern::new("sigma", vec![is(DataValue::Kl), is(q("M"))]),
        LabelPattern::new("sigma", vec![is(DataValue::Kl), is(q("M"))]).shadowed(),
    ])
    .named("H")
}

/// Hidden: channel-D communications, pair generation, measurements and Paulis.
pub fn abstraction_set() -> ActionSet {
    let any = ArgPattern::Any;
    let is = ArgPattern::Is;
    ActionSet::new([
        LabelPattern::new("C_D", vec![any.clone()]),
        LabelPattern::new("sigma", vec![is(DataValue::Kl), is(q("M"))]),
        LabelPattern::new("GEN", vec![is(q("M")), is(q("N"))]),
        LabelPattern::new("Me", vec![is(q("A")), any, is(DataValue::Kl)]),
        LabelPattern::new("Me", vec![is(q("M")), is(q("N")), is(DataValue::Kl)]),
        LabelPattern::new("sigma", vec![is(DataValue::Kl), is(q("B"))]),
    ])
    .named("I")
}

/// `send_D[x] | receive_D[x] = C_D[x]`.
pub fn communication() -> CommFunction {
    let x = || vec![TemplateArg::Var("x".into())];
    CommFunction::new([CommRule::new(
        LabelTemplate::new("send_D", x()),
        LabelTemplate::new("receive_D", x()),
        LabelTemplate::new("C_D", x()),
    )])
}

fn s0_r0() -> Term {
    Term::par(v("S", vec![bit(Bit::Zero)]), v("R", vec![bit(Bit::Zero)]))
}

/// `encap H in (S(0) || R(0))`.
pub fn encapsulated_term() -> Term {
    crate::term::normalize(&Term::encap(encapsulation_set(), s0_r0()))
}

/// `abstract I in encap H in (S(0) || R(0))`.
pub fn system_term() -> Term {
    crate::term::normalize(&Term::abstract_(
        abstraction_set(),
        Term::encap(encapsulation_set(), s0_r0()),
    ))
}

/// Both participants for both session bits, with the abstracted system as entry.
pub fn build_system(cfg: &QaqpConfig) -> Model {
    let mut spec = RecursiveSpec::new();
    for b in [Bit::Zero, Bit::One] {
        spec.extend(build_alice(b, cfg));
        spec.extend(build_bob(b, cfg));
    }
    Model::new(spec, communication()).with_entry(system_term())
}

/// `X = sum d. read_Q[d].send_P[d].X`.
pub fn external_spec(cfg: &QaqpConfig) -> Model {
    let x = VarName::plain("X");
    let body = Term::sum(cfg.data().map(|d| {
        pre(
            act("read_Q", vec![d.clone()]),
            pre(act("send_P", vec![d]), Term::var(x.clone())),
        )
    }));
    let mut spec = RecursiveSpec::new();
    spec.insert(x.clone(), body);
    Model::new(spec, CommFunction::default()).with_entry(Term::var(x))
}
