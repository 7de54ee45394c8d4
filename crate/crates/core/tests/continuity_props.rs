use formtop_core::baire::{ChoiceStream, DecidableSubset};
use formtop_core::continuity::{
    eval_point, modulus, monotonise, restrict_below_length, sigma_to_decidable_bar, Pi01BarConstruction,
    Pi01Presentation, SeqNatRelation, Sigma01Presentation,
};
use formtop_core::pairing::pair;
use formtop_core::seq::all_up_to_length;
use formtop_core::FiniteSeq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FUEL: usize = 1_000;

fn random_stream(rng: &mut ChaCha8Rng) -> ChoiceStream {
    let prefix: Vec<u64> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..10)).collect();
    let cycle: Vec<u64> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..10)).collect();
    ChoiceStream::table(prefix, cycle).unwrap()
}

/// A relation given by a random finite table on sequences of length ≤ 2 over {0, 1, 2}.
fn random_table(rng: &mut ChaCha8Rng) -> SeqNatRelation {
    let pairs: Vec<(FiniteSeq, u64)> = all_up_to_length(3, 2)
        .into_iter()
        .filter_map(|a| {
            let keep = rng.gen_bool(0.2);
            let n = rng.gen_range(0..3);
            keep.then_some((a, n))
        })
        .collect();
    SeqNatRelation::from_table(pairs)
}

fn builtins() -> Vec<(&'static str, SeqNatRelation)> {
    vec![
        ("first-entry", SeqNatRelation::first_entry()),
        ("sum-first-k", SeqNatRelation::sum_first_k(3)),
        ("constant", SeqNatRelation::constant(7)),
    ]
}

#[test]
fn modulus_value_is_stable_under_perturbation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, s) in builtins() {
        for _ in 0..50 {
            let alpha = random_stream(&mut rng);
            let (a, n) = modulus(&s, &alpha, FUEL).unwrap();
            assert!(alpha.passes_through(&a));
            for _ in 0..50 {
                let beta = random_stream(&mut rng).with_prefix(&a);
                assert_eq!(eval_point(&s, &beta, FUEL), Ok(n), "{name} at {a}");
            }
        }
    }
}

#[test]
fn monotonise_is_extensive_idempotent_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let s = random_table(&mut rng);
        let m = monotonise(&s);
        let mm = monotonise(&m);
        for a in all_up_to_length(3, 3) {
            let fa = m.fiber(&a);
            assert!(s.fiber(&a).iter().all(|n| fa.contains(n)));
            assert_eq!(mm.fiber(&a), fa);
            if let Ok((parent, _)) = a.split_last() {
                assert!(m.fiber(&parent).iter().all(|n| fa.contains(n)));
            }
        }
    }
}

/// For a monotone relation, `a` extends elements of both `s⁻n` and `s⁻m`
/// exactly when it lies in both.
#[test]
fn inverse_images_meet_as_intersections() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let s = monotonise(&random_table(&mut rng));
        for n in 0..3 {
            for m in 0..3 {
                let (un, um) = (s.inverse_image(n), s.inverse_image(m));
                for a in all_up_to_length(3, 3) {
                    let extends = |u: &DecidableSubset| a.prefixes().any(|b| u.contains(&b));
                    assert_eq!(extends(&un) && extends(&um), un.contains(&a) && um.contains(&a));
                }
            }
        }
    }
}

#[test]
fn restricted_relation_evaluates_like_the_original() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for (name, s) in builtins() {
        let r = restrict_below_length(&s);
        for _ in 0..50 {
            let alpha = random_stream(&mut rng);
            assert_eq!(eval_point(&r, &alpha, FUEL), eval_point(&s, &alpha, FUEL), "{name}");
            let (a, n) = modulus(&r, &alpha, FUEL).unwrap();
            assert!(n < a.len() as u64);
        }
    }
}

#[test]
fn sigma_transform_catches_every_hit() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        // `U = {a | lh a ≥ k ∧ ∃n. n = a₀ + w}`: monotone, the witness depends on the first entry.
        let k = rng.gen_range(1..4usize);
        let w = rng.gen_range(0..3u64);
        let p = Sigma01Presentation::new(move |a, n| a.len() >= k && n == a[0] + w);
        let v = sigma_to_decidable_bar(&p);
        for _ in 0..10 {
            let alpha = random_stream(&mut rng);
            let n = alpha.at(0) + w;
            let depth = pair(k as u64, n) as usize;
            let hit = alpha.prefix(depth);
            assert!(v.contains(&hit), "k={k} n={n}");
            // U is monotone, so V ⊆ U.
            for j in 0..=depth {
                let b = alpha.prefix(j);
                if v.contains(&b) {
                    assert!(b.get(0).is_some_and(|x| p.holds(b.entries(), x + w)));
                }
            }
        }
    }
}

/// `D(a, n)` from a random table for `n < 3`, true beyond; closed so that
/// `U = {a | ∀n D′(a, n)}` is monotone.
fn random_pi01(rng: &mut ChaCha8Rng) -> Pi01Presentation {
    let table: Vec<(Vec<u64>, [bool; 3])> = all_up_to_length(3, 3)
        .into_iter()
        .map(|a| {
            (
                a.into_entries(),
                [rng.gen_bool(0.85), rng.gen_bool(0.85), rng.gen_bool(0.85)],
            )
        })
        .collect();
    let d = move |a: &[u64], n: u64| {
        n >= 3
            || table
                .iter()
                .find(|(b, _)| b.as_slice() == a)
                .is_none_or(|(_, row)| row[n as usize])
    };
    Pi01Presentation::new(move |a, n| (0..=a.len()).any(|k| (0..=n).all(|m| d(&a[..k], m))))
}

/// The relation computed straight from its defining formula.
fn literal_relation(d: &Pi01Presentation, a: &[u64], n: u64) -> bool {
    let horizon = 3;
    let dbar = |b: &[u64]| b.is_empty() || d.holds(&b[..b.len() - 1], b[b.len() - 1]);
    let u = (0..horizon).all(|k| d.holds(a, k));
    let ubar = u && dbar(a);
    let len = a.len() as u64;
    let first = n < len && !dbar(&a[..n as usize]) && (0..len).all(|m| n >= m || dbar(&a[..m as usize]));
    let second = (0..len).all(|m| dbar(&a[..m as usize])) && n == 1;
    ubar && (first || second)
}

#[test]
fn pi01_bar_construction_matches_truth_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut cases = [0usize; 2];
    for _ in 0..60 {
        let d = random_pi01(&mut rng);
        let c = Pi01BarConstruction::new(d.clone(), 3);
        let s = c.relation();
        for a in all_up_to_length(3, 3) {
            let fiber = s.fiber(&a);
            let oracle: Vec<u64> = (0..5).filter(|&n| literal_relation(&d, a.entries(), n)).collect();
            assert_eq!(fiber, oracle, "at {a}");
            assert!(fiber.len() <= 1);
            if let [n] = fiber[..] {
                cases[usize::from(c.case_value(a.entries()) == 1 && n == 1)] += 1;
            }
            assert_eq!(!fiber.is_empty(), c.ubar_member(a.entries()));
            if let Ok((parent, _)) = a.split_last() {
                let above = s.fiber(&parent);
                assert!(above.iter().all(|n| fiber.contains(n)), "monotone at {a}");
            }
        }
    }
    assert!(cases[0] > 0 && cases[1] > 0, "{cases:?}");
}
