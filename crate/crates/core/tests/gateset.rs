use diffuse_core::gateset::{
    augment_with_inverses, cyclic_shifts, evaluate_word, integer_to_word, make_diffusive_qubit_set,
    standard_diffusive_set, word_to_integer, GateSet, MixerSource, Word,
};
use diffuse_core::geometry::{distance_from_identity, sample_haar_unitary};
use num_bigint::BigUint;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn word_strategy(m: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..m, 0..=max_len).prop_map(Word::new)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn encoding_round_trips(m in 2usize..=4, len in 0usize..=8, seed in any::<u64>()) {
        let total = (m as u64).pow(len as u32);
        let k = BigUint::from(seed % total);
        let w = integer_to_word(&k, len, m).unwrap();
        prop_assert_eq!(w.len(), len);
        prop_assert_eq!(word_to_integer(&w, m).unwrap(), k);
    }

    #[test]
    fn concatenation_is_multiplicative(a in word_strategy(2, 12), b in word_strategy(2, 12)) {
        let gs = standard_diffusive_set().unwrap();
        let lhs = evaluate_word(&gs, &a.concat(&b)).unwrap();
        let rhs = evaluate_word(&gs, &a).unwrap().try_mul(&evaluate_word(&gs, &b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * (a.len() + b.len() + 1) as f64);
    }

    #[test]
    fn inverse_words_evaluate_to_adjoints(w in word_strategy(4, 10)) {
        let gs = augment_with_inverses(&standard_diffusive_set().unwrap());
        let inv = w.inverse_in(&gs).unwrap();
        let p = evaluate_word(&gs, &w.concat(&inv)).unwrap();
        prop_assert!(distance_from_identity(&p).unwrap() < 1e-10);
    }

    #[test]
    fn seeded_sets_survive_the_text_format(seed in any::<u64>()) {
        let set = make_diffusive_qubit_set(MixerSource::Seed(seed)).unwrap().gate_set;
        let back = GateSet::from_text(&set.to_text()).unwrap();
        prop_assert_eq!(back.fingerprint(), set.fingerprint());
    }
}

#[test]
fn encoding_is_a_bijection_on_small_ranges() {
    for m in 2..=4usize {
        for len in 0..=8usize {
            let total = m.pow(len as u32);
            let mut seen = std::collections::HashSet::with_capacity(total);
            for k in 0..total {
                let w = integer_to_word(&BigUint::from(k), len, m).unwrap();
                assert_eq!(word_to_integer(&w, m).unwrap(), BigUint::from(k));
                assert!(seen.insert(w));
            }
            assert!(integer_to_word(&BigUint::from(total), len, m).is_err());
        }
    }
}

#[test]
fn rotations_keep_the_distance_for_all_short_words() {
    let gs = standard_diffusive_set().unwrap();
    for len in 1..=8usize {
        for k in 0..(1usize << len) {
            let w = integer_to_word(&BigUint::from(k), len, 2).unwrap();
            let d = distance_from_identity(&evaluate_word(&gs, &w).unwrap()).unwrap();
            let shifts = cyclic_shifts(&w).unwrap();
            assert_eq!(shifts.len(), len);
            for s in shifts {
                let ds = distance_from_identity(&evaluate_word(&gs, &s).unwrap()).unwrap();
                assert!((ds - d).abs() < 1e-10, "{w:?} vs {s:?}");
            }
        }
    }
}

#[test]
fn arbitrary_gate_sets_are_checked() {
    let u = sample_haar_unitary(2, 1).unwrap();
    assert!(GateSet::new("one", vec![u.clone()], false).is_err());
    let gs = GateSet::new(
        "two",
        vec![u.clone(), sample_haar_unitary(2, 2).unwrap()],
        false,
    )
    .unwrap();
    assert!(evaluate_word(&gs, &Word::new(vec![0, 2])).is_err());
    assert!(cyclic_shifts(&Word::empty()).is_err());
}
