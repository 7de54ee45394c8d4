use formtop_core::baire::cover_singleton;
use formtop_core::pairing::{checked_pair, first, pair, second, unpair};
use formtop_core::seq::{all_up_to_length, leq_b};
use formtop_core::FiniteSeq;
use proptest::prelude::*;

/// `a ≤ b` iff `b` is a prefix of `a`, computed entry by entry.
fn prefix_oracle(a: &[u64], b: &[u64]) -> bool {
    b.len() <= a.len() && b.iter().zip(a).all(|(x, y)| x == y)
}

#[test]
fn baire_order_is_a_partial_order() {
    let all = all_up_to_length(3, 4);
    assert_eq!(all.len(), 1 + 3 + 9 + 27 + 81);
    for a in &all {
        assert!(leq_b(a, a));
        for b in &all {
            let ab = leq_b(a, b);
            assert_eq!(ab, prefix_oracle(a.entries(), b.entries()), "{a} ≤ {b}");
            assert_eq!(cover_singleton(a, b), ab, "{a} ◁ {{{b}}}");
            if ab && leq_b(b, a) {
                assert_eq!(a, b);
            }
            if ab {
                for c in &all {
                    if leq_b(b, c) {
                        assert!(leq_b(a, c), "{a} ≤ {b} ≤ {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn nil_is_top() {
    for a in all_up_to_length(2, 5) {
        assert!(leq_b(&a, &FiniteSeq::nil()));
        assert_eq!(leq_b(&FiniteSeq::nil(), &a), a.is_nil());
    }
}

#[test]
fn pairing_on_small_arguments() {
    let mut seen = std::collections::HashSet::new();
    for n in 0..=50u64 {
        for m in 0..=50u64 {
            let c = pair(n, m);
            assert_eq!(c, (n + m) * (n + m + 1) / 2 + m);
            assert_eq!(unpair(c), (n, m));
            assert_eq!((first(c), second(c)), (n, m));
            // Dominance: both components are bounded by the code.
            assert!(n <= c && m <= c);
            assert!(seen.insert(c));
        }
    }
    // Codes below 51·52/2 are exactly the pairs with n + m ≤ 50.
    for c in 0..(51 * 52 / 2) {
        let (n, m) = unpair(c);
        assert!(n + m <= 50 && seen.contains(&c));
    }
}

proptest! {
    #[test]
    fn unpair_inverts_pair(n in 0u64..1 << 30, m in 0u64..1 << 30) {
        prop_assert_eq!(unpair(pair(n, m)), (n, m));
    }

    #[test]
    fn pair_inverts_unpair(c in any::<u64>()) {
        let (n, m) = unpair(c);
        prop_assert_eq!(checked_pair(n, m), Some(c));
    }

    #[test]
    fn sequence_tokens_round_trip(v in prop::collection::vec(any::<u64>(), 0..8)) {
        let a = FiniteSeq::new(v);
        prop_assert_eq!(a.to_string().parse::<FiniteSeq>(), Ok(a));
    }

    #[test]
    fn concatenation_extends(
        a in prop::collection::vec(0u64..5, 0..6),
        b in prop::collection::vec(0u64..5, 0..6),
    ) {
        let (a, b) = (FiniteSeq::new(a), FiniteSeq::new(b));
        let ab = a.concat(&b);
        prop_assert!(leq_b(&ab, &a));
        prop_assert_eq!(ab.len(), a.len() + b.len());
        prop_assert_eq!(leq_b(&a, &ab), b.is_nil());
    }
}
