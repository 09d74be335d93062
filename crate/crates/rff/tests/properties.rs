//! Property tests over the domain invariants.

use proptest::prelude::*;

use rff::core::{EngineConfig, SearchTrace};
use rff::engines::run_rff_t;
use rff::game24::{
    legal_moves, rat, Game24Oracle, Game24State, Game24Target, NumberSet, Op,
};
use rff::DomainAdapter;

fn small_rationals() -> impl Strategy<Value = rff::game24::Rat> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rff::game24::rat_frac(n, d))
}

fn multisets(max_len: usize) -> impl Strategy<Value = NumberSet> {
    proptest::collection::vec(1i64..=13, 1..=max_len)
        .prop_map(|values| NumberSet::from_ints(&values))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // canonicalize is idempotent for both payload kinds
    #[test]
    fn canonicalization_is_idempotent(values in proptest::collection::vec(small_rationals(), 1..6)) {
        let oracle = Game24Oracle::standard(5);
        let state = Game24State {
            numbers: NumberSet::from_values(values.clone()),
            moves: Vec::new(),
        };
        let once = oracle.canonicalize_state(state);
        let twice = oracle.canonicalize_state(once.clone());
        prop_assert_eq!(&once, &twice);
        let target = Game24Target { values: NumberSet::from_values(values), transition: None };
        let once = oracle.canonicalize_target(target);
        let twice = oracle.canonicalize_target(once.clone());
        prop_assert_eq!(once.values.key(), twice.values.key());
    }

    // exact division round-trips: (a / b) * b == a whenever b != 0
    #[test]
    fn division_round_trips(a in small_rationals(), b in small_rationals()) {
        prop_assume!(b != rat(0));
        let q = Op::Div.apply(&a, &b).expect("nonzero divisor");
        prop_assert_eq!(Op::Mul.apply(&q, &b).expect("total"), a);
    }

    // every backward candidate, applied forward, reproduces the parent
    // target multiset exactly
    #[test]
    fn backward_candidates_are_sound(current in multisets(5)) {
        let oracle = Game24Oracle::standard(13);
        let parent = Game24Target::root(rat(24));
        for cand in oracle.backward_candidates(&current, &parent, 13) {
            let m = cand.transition.as_ref().expect("generated candidates carry transitions");
            prop_assert!(m.is_exact());
            let applied = cand.values
                .remove_two(&m.lhs, &m.rhs)
                .expect("operands are candidate members")
                .insert(m.result.clone());
            prop_assert_eq!(applied.key(), parent.values.key());
        }
    }

    // legal moves always shrink the set by one and stay exact
    #[test]
    fn legal_moves_shrink_exactly(set in multisets(5)) {
        prop_assume!(set.len() >= 2);
        for (m, new) in legal_moves(&set) {
            prop_assert!(m.is_exact());
            prop_assert_eq!(new.len(), set.len() - 1);
        }
    }

    // serialized traces parse back to themselves, and the visited counter
    // equals the forward-step count at every prefix
    #[test]
    fn traces_round_trip_and_count_visits(values in proptest::collection::vec(1i64..=13, 4..=5)) {
        let set = NumberSet::from_ints(&values);
        let cfg = EngineConfig::new(20, 13);
        let oracle = Game24Oracle::standard(cfg.width);
        let trace = run_rff_t(
            &oracle,
            Game24State::initial(set),
            Game24Target::root(rat(24)),
            &cfg,
        ).expect("valid config");
        let text = trace.serialize();
        let parsed = SearchTrace::parse(&text).expect("own output parses");
        prop_assert_eq!(&parsed, &trace);
        let mut seen = 0u64;
        for event in &trace.events {
            if event.kind == rff::core::EventKind::ForwardStep {
                seen += 1;
            }
            prop_assert!(seen <= trace.visited_states);
        }
        prop_assert_eq!(seen, trace.visited_states);
    }
}
