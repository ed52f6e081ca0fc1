use num_complex::Complex64;
use proptest::prelude::*;
use qacp::qsim::*;
use qacp::term::{DataValue, Label};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn epr_pair_amplitudes() {
    let mut s = QuantumState::new();
    make_epr(&mut s, "A", "B").unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let want = [r, 0.0, 0.0, r];
    for (a, w) in s.amplitudes().iter().zip(want) {
        assert!((a - c(w)).norm() < 1e-12);
    }
    assert!((s.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn epr_halves_always_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut ones = 0;
    for _ in 0..1000 {
        let mut s = QuantumState::new();
        make_epr(&mut s, "A", "B").unwrap();
        let a = s.measure("A", &mut rng).unwrap();
        let b = s.measure("B", &mut rng).unwrap();
        assert_eq!(a, b);
        ones += a as usize;
    }
    // 3 sigma around 500 for 1000 fair shots is about 47.
    assert!((ones as f64 - 500.0).abs() < 3.0 * (1000.0f64 * 0.25).sqrt(), "{ones}");
}

#[test]
fn bell_measurement_of_00_splits_between_phi_plus_and_phi_minus() {
    let mut rng = ChaCha8Rng::seed_from_u64(4000);
    let mut counts = [0usize; 4];
    for _ in 0..4000 {
        let mut s = QuantumState::new();
        s.allocate("a").unwrap();
        s.allocate("b").unwrap();
        let kl = bell_measure(&mut s, "a", "b", &mut rng).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        counts[(kl.k * 2 + kl.l) as usize] += 1;
    }
    assert_eq!(counts[1] + counts[3], 0, "{counts:?}");
    let sigma = (4000.0f64 * 0.25).sqrt();
    assert!((counts[0] as f64 - 2000.0).abs() < 3.0 * sigma, "{counts:?}");
}

#[test]
fn decoding_an_untouched_pair_gives_00() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut s = QuantumState::new();
    make_epr(&mut s, "M", "N").unwrap();
    assert_eq!(superdense_decode(&mut s, "M", "N", &mut rng).unwrap(), Kl::new(0, 0));
}

#[test]
fn corruption_rate_matches_the_channel_probability() {
    let mut ch = NoisyChannel::new(0.3, NoiseModel::DetectableFlag, 42).unwrap();
    let n = 10_000;
    let hits = (0..n).filter(|_| ch.corrupts()).count() as f64;
    let sigma = (n as f64 * 0.3 * 0.7).sqrt();
    assert!((hits - 3000.0).abs() < 3.0 * sigma, "{hits}");
}

#[test]
fn extreme_probabilities_are_deterministic() {
    let mut s = QuantumState::new();
    let mut never = NoisyChannel::new(0.0, NoiseModel::BitFlip, 1).unwrap();
    let mut always = NoisyChannel::new(1.0, NoiseModel::BitFlip, 1).unwrap();
    for i in 0..100 {
        assert_eq!(never.transmit(&mut s, None, i).unwrap(), Delivery::Intact(i));
        assert_eq!(always.transmit(&mut s, None, i).unwrap(), Delivery::Corrupted);
    }
}

#[test]
fn flag_noise_leaves_the_qubit_and_pauli_noise_does_not() {
    let mut s = QuantumState::new();
    s.allocate("m").unwrap();
    let mut flag = NoisyChannel::new(1.0, NoiseModel::DetectableFlag, 0).unwrap();
    flag.transmit(&mut s, Some("m"), ()).unwrap();
    assert!((s.amplitudes()[0] - c(1.0)).norm() < 1e-12);
    let mut bit = NoisyChannel::new(1.0, NoiseModel::BitFlip, 0).unwrap();
    bit.transmit(&mut s, Some("m"), ()).unwrap();
    assert!((s.amplitudes()[1] - c(1.0)).norm() < 1e-12);
}

#[test]
fn register_limit_is_enforced() {
    let mut s = QuantumState::new();
    for i in 0..MAX_QUBITS {
        s.allocate(&format!("q{i}")).unwrap();
    }
    assert_eq!(s.allocate("extra"), Err(StateError::TooManyQubits));
    assert_eq!(s.allocate("q0"), Err(StateError::DuplicateQubit("q0".into())));
}

fn is(l: &qacp::term::ActionLabel, name: &str) -> bool {
    l.name == name
}

#[test]
fn sessions_alternate_and_end_with_delivery() {
    let data = QubitData::random_batch(12, 9);
    let mut ch = NoisyChannel::new(0.3, NoiseModel::DetectableFlag, 9).unwrap();
    let r = run_protocol(&data, &mut ch, 9, &RunOptions { delta: 3, ..RunOptions::default() }).unwrap();
    for (i, s) in r.trace.sessions.iter().enumerate() {
        assert_eq!(s.index, i + 1);
        assert_eq!(s.bit as usize, i % 2, "odd sessions use b = 0");
        assert_eq!(s.datum as usize, i % 3 + 1);
    }
    let reads = r.trace.actions.iter().filter(|a| is(a, "read_Q")).count();
    let sends: Vec<_> = r.trace.actions.iter().filter(|a| is(a, "send_P")).collect();
    assert_eq!((reads, sends.len()), (12, 12));
    assert!(is(r.trace.actions.last().unwrap(), "send_P"));
    let data_sent: Vec<_> = sends.iter().map(|a| a.args[0].clone()).collect();
    let expected: Vec<_> = (0..12).map(|i| DataValue::Datum(i % 3 + 1)).collect();
    assert_eq!(data_sent, expected);
    assert!(conforms(&r.trace, 3).unwrap());
}

#[test]
fn a_corrupted_pair_is_never_decoded() {
    // Under bit-flip noise a decoded corrupted pair would yield the wrong kl.
    let mut noisy_sessions = 0;
    for seed in 0..10 {
        let data = QubitData::random_batch(10, seed);
        let mut ch = NoisyChannel::new(0.4, NoiseModel::BitFlip, seed).unwrap();
        let r = run_protocol(&data, &mut ch, seed, &RunOptions::default()).unwrap();
        assert!(r.trace.sessions.iter().all(|s| s.decode_mismatches == 0));
        assert!(r.delivered.iter().all(|d| (d.fidelity - 1.0).abs() < 1e-9));
        noisy_sessions += r.trace.sessions.iter().filter(|s| s.noise_events > 0).count();
    }
    assert!(noisy_sessions > 50);
}

#[test]
fn trace_text_is_one_label_per_line() {
    let data = QubitData::random_batch(1, 0);
    let mut ch = NoisyChannel::new(0.0, NoiseModel::DetectableFlag, 0).unwrap();
    let r = run_protocol(&data, &mut ch, 0, &RunOptions::default()).unwrap();
    let text = r.trace.to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        [
            "read_Q[d1]",
            "C_D[0]",
            "GEN[M,N]",
            "C_D[M]",
            "Me[A,d1,kl]",
            "sigma[kl,M]",
            "C_D[M]",
            "C_D[0]",
            "Me[M,N,kl]",
            "sigma[kl,B]",
            "send_P[d1]",
        ]
    );
    for l in lines {
        assert!(matches!(qacp::syntax::parse_label(l).unwrap(), Label::Act(_)));
    }
}

#[test]
fn runs_are_reproducible() {
    let go = || {
        let data = QubitData::random_batch(8, 3);
        let mut ch = NoisyChannel::new(0.25, NoiseModel::PhaseFlip, 3).unwrap();
        run_protocol(&data, &mut ch, 3, &RunOptions::default()).unwrap()
    };
    assert_eq!(go(), go());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn delivery_is_complete_ordered_and_conformant(
        seed in any::<u64>(),
        p in prop::sample::select(vec![0.0, 0.1, 0.25, 0.5]),
        model in prop::sample::select(vec![NoiseModel::DetectableFlag, NoiseModel::BitFlip, NoiseModel::PhaseFlip]),
        count in 1usize..12,
    ) {
        let data = QubitData::random_batch(count, seed);
        let mut ch = NoisyChannel::new(p, model, seed).unwrap();
        let r = run_protocol(&data, &mut ch, seed, &RunOptions::default()).unwrap();
        let idx: Vec<usize> = r.delivered.iter().map(|d| d.index).collect();
        prop_assert_eq!(idx, (1..=count).collect::<Vec<_>>());
        prop_assert!(r.delivered.iter().all(|d| (d.fidelity - 1.0).abs() < 1e-9));
        prop_assert!(r.max_norm_error < 1e-9);
        prop_assert!(r.max_live_qubits <= 6);
        prop_assert!(conforms(&r.trace, 1).unwrap());
    }

    #[test]
    fn x_is_an_involution(seed in any::<u64>()) {
        let d = QubitData::random_batch(1, seed)[0];
        let mut s = QuantumState::new();
        s.allocate_state("q", d.alpha, d.beta).unwrap();
        let before = s.clone();
        s.x("q").unwrap();
        s.x("q").unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn teleportation_works_for_any_input(seed in any::<u64>()) {
        let d = QubitData::random_batch(1, seed)[0];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = QuantumState::new();
        s.allocate("x").unwrap();
        s.allocate_state("q", d.alpha, d.beta).unwrap();
        make_epr(&mut s, "A", "B").unwrap();
        let kl = bell_measure(&mut s, "q", "A", &mut rng).unwrap();
        pauli_correct(&mut s, "B", kl).unwrap();
        prop_assert!((s.fidelity("B", d.alpha, d.beta).unwrap() - 1.0).abs() < 1e-9);
    }
}
