use countra_core::enumerate::{check_against, difftest, DEFAULT_MAX_WORDS};
use countra_core::format::{load_machine, save_machine};
use countra_core::languages::scl_counter_decomposition;
use countra_core::random::{random_machine, random_qscl_machine, random_threshold_machine, Shape};
use countra_core::semilinear::{decompose_qscl, parikh, semilinear_member};
use countra_core::transforms::{
    combine, general_to_threshold, threshold_to_general, to_incremental, to_stateless,
    BooleanCombinator, RingCounterPlan,
};
use countra_core::{CounterMachine, UpdateAction};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn machine(seed: u64) -> CounterMachine {
    random_machine(&mut ChaCha8Rng::seed_from_u64(seed), &Shape::default())
}

fn word_for(m: &CounterMachine, raw: &[usize]) -> Vec<usize> {
    raw.iter().map(|s| s % m.alphabet().len()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_step_per_token(seed: u64, raw in prop::collection::vec(0usize..3, 0..30)) {
        let m = machine(seed);
        let w = word_for(&m, &raw);
        let trace = m.run_trace(&w).unwrap();
        prop_assert_eq!(trace.len(), w.len() + 1);
        prop_assert_eq!(&trace[0], &m.initial());
        for (t, pair) in trace.windows(2).enumerate() {
            prop_assert_eq!(&m.step(&pair[0], w[t]).unwrap(), &pair[1]);
        }
        prop_assert_eq!(trace.last().unwrap(), &m.run(&w).unwrap());
    }

    #[test]
    fn trace_of_prefix_is_prefix_of_trace(seed: u64, raw in prop::collection::vec(0usize..3, 0..20), cut in 0usize..20) {
        let m = machine(seed);
        let w = word_for(&m, &raw);
        let cut = cut.min(w.len());
        let full = m.run_trace(&w).unwrap();
        let part = m.run_trace(&w[..cut]).unwrap();
        prop_assert_eq!(&full[..=cut], &part[..]);
    }

    #[test]
    fn parikh_is_additive(x in prop::collection::vec(0usize..3, 0..20), y in prop::collection::vec(0usize..3, 0..20)) {
        let sigma = countra_core::Alphabet::from_chars("abc").unwrap();
        let xy: Vec<usize> = x.iter().chain(&y).copied().collect();
        prop_assert_eq!(parikh(&sigma, &xy).unwrap(), parikh(&sigma, &x).unwrap().add(&parikh(&sigma, &y).unwrap()));
    }

    #[test]
    fn reset_free_counters_are_linear_in_parikh(seed: u64, raw in prop::collection::vec(0usize..3, 0..40)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_qscl_machine(&mut rng, 2, 3);
        let w = word_for(&m, &raw);
        let d = decompose_qscl(&m).unwrap();
        let config = m.run(&w).unwrap();
        for (i, c) in d.counters.iter().enumerate() {
            let start = w.iter().rposition(|s| c.resets.contains(s)).map_or(0, |p| p + 1);
            let suffix = parikh(m.alphabet(), &w[start..]).unwrap();
            prop_assert_eq!(config.counters[i], suffix.dot(&c.u).unwrap());
        }
        prop_assert_eq!(semilinear_member(&d, &w), m.accepts(&w).unwrap());
    }

    #[test]
    fn stateless_block_is_one_hot(seed: u64, raw in prop::collection::vec(0usize..3, 0..25)) {
        let m = machine(seed);
        let s = to_stateless(&m).unwrap();
        let w = word_for(&m, &raw);
        let (src, sim) = (m.run_trace(&w).unwrap(), s.run_trace(&w).unwrap());
        let k = m.num_counters();
        for (a, b) in src.iter().zip(&sim) {
            prop_assert_eq!(b.state, 0);
            prop_assert_eq!(&b.counters[..k], &a.counters[..]);
            for (j, &v) in b.counters[k..].iter().enumerate() {
                prop_assert_eq!(v, i64::from(j == a.state && j != 0));
            }
        }
        prop_assert_eq!(m.accepts(&w).unwrap(), s.accepts(&w).unwrap());
    }

    #[test]
    fn ring_counter_tracks_source(seed: u64, raw in prop::collection::vec(0usize..3, 0..25)) {
        let m = machine(seed);
        let inc = to_incremental(&m).unwrap();
        prop_assert!(inc.classify().is_incremental);
        let plan = RingCounterPlan::for_machine(&m);
        let w = word_for(&m, &raw);
        for (a, b) in m.run_trace(&w).unwrap().iter().zip(inc.run_trace(&w).unwrap()) {
            prop_assert_eq!(&plan.decode(&b).unwrap(), a);
            prop_assert_eq!(&plan.encode(a).unwrap(), &b);
        }
    }

    #[test]
    fn threshold_round_trips(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_threshold_machine(&mut rng, &Shape::default());
        let plain = threshold_to_general(&t).unwrap();
        prop_assert!(difftest(&t, &plain, 6, DEFAULT_MAX_WORDS).unwrap().agrees());
        let g = machine(seed);
        let back = general_to_threshold(&g).unwrap();
        prop_assert!(difftest(&g, &back, 6, DEFAULT_MAX_WORDS).unwrap().agrees());
    }

    #[test]
    fn products_follow_the_table(a: u64, b: u64, table in 0u8..16) {
        let (x, y) = (machine(a), machine(b));
        prop_assume!(x.alphabet() == y.alphabet());
        let bits: String = (0..4).map(|i| if (table >> i) & 1 == 1 { '1' } else { '0' }).collect();
        let p = BooleanCombinator::parse(2, &bits).unwrap();
        let product = combine(&[&x, &y], &p).unwrap();
        let report = check_against(&product, 5, DEFAULT_MAX_WORDS, |w| {
            p.eval(&[x.accepts(w).unwrap(), y.accepts(w).unwrap()])
        }).unwrap();
        prop_assert!(report.agrees());
    }

    #[test]
    fn save_then_load_is_identity(seed: u64) {
        let m = machine(seed);
        prop_assert_eq!(load_machine(&save_machine(&m)).unwrap(), m.clone());
        let t = random_threshold_machine(&mut ChaCha8Rng::seed_from_u64(seed), &Shape::default());
        prop_assert_eq!(load_machine(&save_machine(&t)).unwrap(), t);
    }

    #[test]
    fn simplified_counter_is_linear(ua in -1i64..=1, ub in -1i64..=1, m in 0u64..=20, l in 0u64..=20) {
        let machine = CounterMachine::from_fn(
            countra_core::Alphabet::from_chars("ab").unwrap(),
            1,
            1,
            None,
            |s, _, _| countra_core::Entry::new(vec![UpdateAction::Add(if s == 0 { ua } else { ub })], 0),
            |_, _| true,
        ).unwrap();
        let w: Vec<usize> = std::iter::repeat_n(0, m as usize).chain(std::iter::repeat_n(1, l as usize)).collect();
        prop_assert_eq!(machine.run(&w).unwrap().counters[0], scl_counter_decomposition(ua, ub, m, l));
    }
}
