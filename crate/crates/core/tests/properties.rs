mod support;

use proptest::prelude::*;
use qacp::equivalence::{
    branching_bisim, branching_partition, cfar_collapse, quotient, strong_bisim, strong_partition,
    weak_trace_equivalent, weak_trace_inclusion,
};
use qacp::semantics::{explore, from_aut, linearize, to_aut, NamingScheme, Semantics, SemanticsError};
use qacp::syntax::{instantiate, parse, pretty};
use qacp::term::{normalize, CommFunction, RecursiveSpec, Term};
use support::*;

const BUDGET: usize = 2_000;

fn explore_closed(t: &Term) -> qacp::semantics::Lts {
    let spec = RecursiveSpec::new();
    let comm = small_comm();
    explore(&Semantics::new(&spec, &comm), t, BUDGET).unwrap().lts
}

/// Random `.qacp` expression text over declared actions `a`..`e` and `X`, `Y`.
fn arb_expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("a".to_string()),
        Just("b".to_string()),
        Just("c[d1]".to_string()),
        Just("e[0, err]".to_string()),
        Just("tau".to_string()),
        Just("delta".to_string()),
        Just("@shadow(c[d1])".to_string()),
    ];
    let guarded = leaf.clone().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("{x} + {y}")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x}).({y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} || {y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} _| {y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} | {y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} >< {y})")),
            inner.clone().prop_map(|x| format!("encap H in ({x})")),
            inner.clone().prop_map(|x| format!("abstract {{a, c[*]}} in ({x})")),
            inner.clone().prop_map(|x| format!("(sum d:data. c[d].({x}))")),
            inner.prop_map(|x| format!("a.({x}).X")),
        ]
    });
    guarded
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normalize_is_idempotent_and_preserves_behaviour(t in arb_closed_term()) {
        let n = normalize(&t);
        prop_assert_eq!(normalize(&n), n.clone());
        prop_assert!(strong_bisim(&explore_closed(&t), &explore_closed(&n)).equivalent);
    }

    #[test]
    fn pretty_then_parse_is_a_fixpoint(x in arb_expr_text(), y in arb_expr_text()) {
        let src = format!(
            "act a, b\nset H = {{a, b}}\nX = a.X + b\nY(p: bit) = e[p, err].({x}).Y(1-p)\nZ = {y}\ninit Y(0) || Z\n"
        );
        let doc = parse(&src).unwrap();
        let printed = pretty(&doc);
        let again = parse(&printed).unwrap();
        prop_assert_eq!(pretty(&again), printed);
        prop_assert_eq!(instantiate(&doc, Some(2)).unwrap().model, instantiate(&again, Some(2)).unwrap().model);
    }

    #[test]
    fn linearization_reproduces_the_state_space(s in arb_spec()) {
        let comm = small_comm();
        let sem = Semantics::new(&s.spec, &comm);
        let lin = match linearize(&sem, &s.entry, &NamingScheme::default(), BUDGET) {
            Err(qacp::semantics::LinearizeError::Semantics(SemanticsError::BudgetExceeded(_))) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(lin.spec.is_linear());
        let empty = CommFunction::default();
        let relin = explore(
            &Semantics::new(&lin.spec, &empty),
            &Term::var(lin.initial.clone()),
            BUDGET,
        ).unwrap();
        prop_assert_eq!(relin.lts.num_states(), lin.source.lts.num_states());
        prop_assert!(strong_bisim(&relin.lts, &lin.source.lts).equivalent);
    }

    #[test]
    fn strong_implies_branching_implies_weak_trace(l1 in arb_lts(4, &LABELS_TAU_AB), l2 in arb_lts(4, &LABELS_TAU_AB)) {
        let strong = strong_bisim(&l1, &l2).equivalent;
        let rooted = branching_bisim(&l1, &l2, true).equivalent;
        let branching = branching_bisim(&l1, &l2, false).equivalent;
        prop_assert!(!strong || rooted);
        prop_assert!(!rooted || branching);
        prop_assert!(!branching || weak_trace_equivalent(&l1, &l2));
    }

    #[test]
    fn every_lts_is_equivalent_to_itself(l in arb_lts(6, &LABELS_TAU_AB)) {
        prop_assert!(strong_bisim(&l, &l).equivalent);
        prop_assert!(branching_bisim(&l, &l, true).equivalent);
    }

    #[test]
    fn quotients_are_idempotent_and_equivalent(l in arb_lts(6, &LABELS_TAU_AB)) {
        let qs = quotient(&l, &strong_partition(&l));
        prop_assert!(strong_bisim(&l, &qs).equivalent);
        prop_assert_eq!(strong_partition(&qs).num_blocks(), qs.num_states());

        let qb = quotient(&l, &branching_partition(&l));
        prop_assert!(branching_bisim(&l, &qb, false).equivalent);
        let qb2 = quotient(&qb, &branching_partition(&qb));
        prop_assert_eq!(qb2.num_states(), qb.num_states());
        prop_assert_eq!(qb2.num_transitions(), qb.num_transitions());
    }

    #[test]
    fn cfar_collapse_adds_no_weak_traces(l in arb_lts(6, &LABELS_TAU_AB)) {
        let c = cfar_collapse(&l);
        prop_assert!(c.num_states() <= l.num_states() + 1);
        prop_assert_eq!(weak_trace_inclusion(&c, &l), None);
        prop_assert!(branching_bisim(&c, &l, true).equivalent);
    }

    #[test]
    fn aut_export_round_trips(l in arb_lts(6, &LABELS_TAU_AB)) {
        let text = to_aut(&l);
        let back = from_aut(&text).unwrap();
        prop_assert_eq!(to_aut(&back), text);
        prop_assert_eq!(back.initial, l.initial);
        prop_assert_eq!(back.transitions, l.transitions);
    }

    #[test]
    fn partitions_agree_with_naive_fixpoints(l in arb_lts(6, &LABELS_TAU_AB)) {
        let (ps, pb) = (strong_partition(&l), branching_partition(&l));
        let (rs, rb) = (naive_strong(&l), naive_branching(&l));
        for s in 0..l.num_states() {
            for t in 0..l.num_states() {
                prop_assert_eq!(ps.same_block(s, t), rs[s][t], "strong {} {}", s, t);
                prop_assert_eq!(pb.same_block(s, t), rb[s][t], "branching {} {}", s, t);
            }
        }
    }

    #[test]
    fn rooted_check_agrees_with_naive_oracle(l1 in arb_lts(4, &LABELS_TAU_AB), l2 in arb_lts(4, &LABELS_TAU_AB)) {
        let u = disjoint_union(&l1, &l2);
        let rb = naive_branching(&u);
        let (i1, i2) = (l1.initial, l1.num_states() + l2.initial);
        prop_assert_eq!(branching_bisim(&l1, &l2, false).equivalent, rb[i1][i2]);
        prop_assert_eq!(branching_bisim(&l1, &l2, true).equivalent, naive_rooted(&u, &rb, i1, i2));
        prop_assert_eq!(strong_bisim(&l1, &l2).equivalent, naive_strong(&u)[i1][i2]);
    }

    #[test]
    fn counterexamples_are_reported_exactly_for_inequivalence(l1 in arb_lts(4, &LABELS_TAU_AB), l2 in arb_lts(4, &LABELS_TAU_AB)) {
        for v in [strong_bisim(&l1, &l2), branching_bisim(&l1, &l2, true), branching_bisim(&l1, &l2, false)] {
            prop_assert_eq!(v.equivalent, v.counterexample.is_none());
        }
    }
}

#[test]
fn accepted_traces_of_a_quotient_match_the_original() {
    let l = lts(4, &[(0, "a", 1), (1, "tau", 2), (2, "b", 3), (1, "tau", 1), (3, "tau", 0)]);
    let q = quotient(&l, &branching_partition(&l));
    assert!(weak_trace_equivalent(&l, &q));
    assert!(q.num_states() < l.num_states());
}
