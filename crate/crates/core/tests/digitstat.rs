use kempner_core::digitstat::{
    complement_digit, count_occurrences, digit_count, digit_sum, is_suffix, word_value, BlockCounter,
    OccurrenceAutomaton,
};
use kempner_core::{StatisticSpec, Word};
use proptest::prelude::*;

fn w(s: &str) -> Word {
    Word::binary(s).unwrap()
}

#[test]
fn word_values() {
    assert_eq!(word_value(&w("101")).unwrap(), 5);
    assert_eq!(word_value(&w("0")).unwrap(), 0);
    assert_eq!(word_value(&w("11")).unwrap(), 3);
    assert!(Word::new(3, vec![1, 2]).is_ok());
    assert!(word_value(&Word::new(3, vec![1, 2]).unwrap()).is_err());
    assert!(Word::new(2, vec![2]).is_err());
    assert!(Word::binary("").is_err());
}

#[test]
fn digit_sums() {
    assert_eq!(digit_sum(5, 2), 2);
    assert_eq!(digit_sum(5, 3), 3);
    assert_eq!(digit_sum(0, 7), 0);
    for n in 1..=1000 {
        assert_eq!(digit_sum(2 * n, 2), digit_sum(n, 2));
    }
}

#[test]
fn occurrence_examples() {
    assert_eq!(count_occurrences(&w("01"), 5).unwrap(), 2);
    assert_eq!(count_occurrences(&w("000"), 8).unwrap(), 1);
    assert_eq!(count_occurrences(&w("11"), 7).unwrap(), 2);
    assert_eq!(count_occurrences(&w("0"), 0).unwrap(), 0);
    assert_eq!(count_occurrences(&w("01"), 0).unwrap(), 0);
    for n in 1..=1000 {
        assert_eq!(count_occurrences(&w("1"), n).unwrap() as u64, digit_sum(n, 2));
    }
}

#[test]
fn complement_and_suffix() {
    assert_eq!(complement_digit(0).unwrap(), 1);
    assert_eq!(complement_digit(1).unwrap(), 0);
    assert!(complement_digit(2).is_err());
    assert!(is_suffix(&[1], &[1, 1]));
    assert!(!is_suffix(&[0, 1], &[0, 1, 0]));
    assert!(is_suffix(&[0], &[0, 1, 0]));
    assert!(is_suffix(&[], &[0, 1]));
}

#[test]
fn recurrence_over_full_range() {
    for b in [2u64, 3, 5, 10] {
        for n in 0..=100_000u64 {
            let s = digit_sum(n, b);
            for j in 0..b {
                assert_eq!(digit_sum(b * n + j, b), s + j);
            }
        }
    }
    for n in 1..=100_000 {
        assert_eq!(count_occurrences(&w("1"), n).unwrap() as u64, digit_sum(n, 2));
    }
}

#[test]
fn scanners_agree_on_all_short_words() {
    for len in 1..=4usize {
        for v in 0..(1u32 << len) {
            let syms: Vec<u8> = (0..len).rev().map(|i| ((v >> i) & 1) as u8).collect();
            let word = Word::new(2, syms).unwrap();
            let dfa = OccurrenceAutomaton::new(&word);
            let fast = BlockCounter::new(&word);
            for n in 0..=10_000 {
                let scan = count_occurrences(&word, n).unwrap();
                assert_eq!(dfa.count(n), scan, "{word} {n}");
                assert_eq!(fast.count(n), scan, "{word} {n}");
            }
        }
    }
}

#[test]
fn spec_validation() {
    assert!(StatisticSpec::digit_sum(1).is_err());
    assert_eq!(StatisticSpec::digit_sum(3).unwrap().eval(5), 3);
    assert_eq!(StatisticSpec::block_count(w("11")).unwrap().eval(7), 2);
    assert!(StatisticSpec::block_count(Word::new(3, vec![2]).unwrap()).is_err());
    assert_eq!(StatisticSpec::digit_sum(2).unwrap().to_string(), "s2");
    assert_eq!(StatisticSpec::block_count(w("011")).unwrap().to_string(), "word:011");
}

fn binary_word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 1..=10).prop_map(|s| Word::new(2, s).unwrap())
}

proptest! {
    #[test]
    fn digit_sum_bounded_by_length(n in 0u64..u64::MAX / 2, b in 2u64..=16) {
        let s = digit_sum(n, b);
        let len = u64::from(digit_count(n, b));
        prop_assert!(s <= (b - 1) * len);
        let all_max = n > 0 && b.checked_pow(len as u32).is_some_and(|p| p - 1 == n);
        prop_assert_eq!(s == (b - 1) * len, all_max || n == 0);
    }

    #[test]
    fn digit_sum_recurrence(n in 0u64..1 << 40, b in 2u64..=16, j in 0u64..16) {
        let j = j % b;
        prop_assert_eq!(digit_sum(b * n + j, b), digit_sum(n, b) + j);
    }

    #[test]
    fn counters_agree(word in binary_word(), n in any::<u64>()) {
        let scan = count_occurrences(&word, n).unwrap();
        prop_assert_eq!(OccurrenceAutomaton::new(&word).count(n), scan);
        prop_assert_eq!(BlockCounter::new(&word).count(n), scan);
    }

    #[test]
    fn word_round_trip(word in binary_word()) {
        let text = word.to_string();
        prop_assert_eq!(Word::binary(&text).unwrap(), word);
    }
}
