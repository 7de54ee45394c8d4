#[path = "common/grid.rs"]
mod grid;

use formtop_core::reals::{
    certify, decide, finite_cover_decide, heine_borel, target_segment, validate, Decision, EnumeratedCover, Mode,
    RatInterval,
};
use formtop_core::Rational;
use grid::{frac, grid_covered, hand_instances, Frac};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_interval((a, b): (Frac, Frac)) -> RatInterval {
    RatInterval::new(Rational::new(a.num, a.den), Rational::new(b.num, b.den)).unwrap()
}

fn mode_of(unit: bool) -> Mode {
    if unit {
        Mode::UnitInterval
    } else {
        Mode::Real
    }
}

/// A random interval in `[-2, 3]` whose endpoint denominators come from `palette`.
fn random_pair(rng: &mut ChaCha8Rng, palette: &[i64], max_width: i64) -> (Frac, Frac) {
    loop {
        let d1 = palette[rng.gen_range(0..palette.len())];
        let d2 = palette[rng.gen_range(0..palette.len())];
        let a = frac(rng.gen_range(-2 * d1..=3 * d1), d1);
        let width = rng.gen_range(1..=max_width * d2);
        // a + width/d2, rounded down onto the d2 grid.
        let b = frac((a.num * d2).div_euclid(d1) + width, d2);
        if (a.num as i128) * (b.den as i128) < (b.num as i128) * (a.den as i128) {
            return (a, b);
        }
    }
}

/// Random instance with denominators at most 32; two denominators per
/// instance keep the grid small enough to scan.
fn random_instance(rng: &mut ChaCha8Rng) -> ((Frac, Frac), Vec<(Frac, Frac)>) {
    let palette = [rng.gen_range(1..=32), rng.gen_range(1..=32)];
    let t = random_pair(rng, &palette, 2);
    let u = (0..rng.gen_range(0..=6))
        .map(|_| random_pair(rng, &palette, 2))
        .collect();
    (t, u)
}

#[test]
fn oracle_matches_hand_instances() {
    for (unit, t, u, covered) in hand_instances() {
        assert_eq!(grid_covered(unit, t, &u), covered, "oracle on {t:?} {u:?}");
        let u: Vec<RatInterval> = u.into_iter().map(to_interval).collect();
        assert_eq!(finite_cover_decide(mode_of(unit), &to_interval(t), &u), covered);
    }
}

#[test]
fn decision_agrees_with_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut outcomes = [0usize; 2];
    for _ in 0..1000 {
        let (t, u) = random_instance(&mut rng);
        for unit in [false, true] {
            let mode = mode_of(unit);
            let expected = grid_covered(unit, t, &u);
            let (ti, ui) = (to_interval(t), u.iter().copied().map(to_interval).collect::<Vec<_>>());
            let decision = decide(mode, &ti, &ui);
            assert_eq!(decision.is_covered(), expected, "{mode} {ti} {ui:?}");
            outcomes[usize::from(expected)] += 1;
            if let Decision::Uncovered { witness } = decision {
                let seg = target_segment(mode, &ti).unwrap();
                assert!(seg.contains(&witness));
                assert!(ui.iter().all(|iv| !iv.contains(&witness)), "{witness} is covered");
            }
        }
    }
    assert!(outcomes.iter().all(|&n| n > 200), "{outcomes:?}");
}

#[test]
fn certificates_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut certified = 0;
    for _ in 0..1000 {
        let (t, u) = random_instance(&mut rng);
        let (ti, ui) = (to_interval(t), u.iter().copied().map(to_interval).collect::<Vec<_>>());
        for mode in [Mode::Real, Mode::UnitInterval] {
            match certify(mode, &ti, &ui) {
                Ok(cert) => {
                    certified += 1;
                    assert_eq!(cert.conclusion(), &ti);
                    if let Err(v) = validate(mode, &ti, &ui, &cert) {
                        panic!("{mode} {ti} {ui:?}: {v}\n{cert}");
                    }
                }
                Err(_) => assert!(!finite_cover_decide(mode, &ti, &ui)),
            }
        }
    }
    assert!(certified > 200);
}

#[test]
fn validator_rejects_foreign_certificates() {
    let t = RatInterval::of(0, 1, 1, 1);
    let u = [RatInterval::of(-1, 1, 3, 5), RatInterval::of(1, 2, 2, 1)];
    let cert = certify(Mode::Real, &t, &u).unwrap();
    // The same tree does not certify a cover that lacks one of its leaves.
    assert!(validate(Mode::Real, &t, &u[..1], &cert).is_err());
    assert!(validate(Mode::Real, &RatInterval::of(0, 1, 1, 2), &u, &cert).is_err());
}

#[test]
fn cover_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..500 {
        let (t, u) = random_instance(&mut rng);
        let (ti, ui) = (to_interval(t), u.iter().copied().map(to_interval).collect::<Vec<_>>());
        for mode in [Mode::Real, Mode::UnitInterval] {
            let covered = finite_cover_decide(mode, &ti, &ui);

            // Adding members never loses a cover.
            let mut more = ui.clone();
            more.push(to_interval(random_pair(&mut rng, &[t.0.den, 8], 2)));
            assert!(!covered || finite_cover_decide(mode, &ti, &more));

            // Subintervals of a covered interval are covered.
            let (p, q) = (ti.left(), ti.right());
            for (i, j) in [(0, 4), (1, 3), (0, 1), (2, 4), (1, 2)] {
                let sub = RatInterval::new(p.lerp(q, i, 4), p.lerp(q, j, 4)).unwrap();
                assert!(sub.leq(&ti));
                assert!(!covered || finite_cover_decide(mode, &sub, &ui), "{sub} ≤ {ti}");
            }

            // Covered iff every strictly smaller interval is: sampled forward, witnessed backward.
            if covered {
                for i in 1..8 {
                    for j in (i + 1)..8 {
                        let inner = RatInterval::new(p.lerp(q, i, 8), p.lerp(q, j, 8)).unwrap();
                        assert!(inner.lt(&ti) || i == 0);
                        assert!(finite_cover_decide(mode, &inner, &ui));
                    }
                }
            } else if let Decision::Uncovered { witness } = decide(mode, &ti, &ui) {
                let inner = RatInterval::new(p.midpoint(&witness), witness.midpoint(q)).unwrap();
                assert!(inner.lt(&ti));
                assert!(!finite_cover_decide(mode, &inner, &ui), "{inner} around {witness}");
            }
        }
    }
}

#[test]
fn heine_borel_prefixes_are_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut found = 0;
    for _ in 0..300 {
        let (t, mut u) = random_instance(&mut rng);
        u.push(random_pair(&mut rng, &[1], 1));
        let (ti, ui) = (to_interval(t), u.iter().copied().map(to_interval).collect::<Vec<_>>());
        let cover = EnumeratedCover::from_list(ui.clone()).unwrap();
        for mode in [Mode::Real, Mode::UnitInterval] {
            match heine_borel(mode, &ti, &cover, ui.len()) {
                Ok(sub) => {
                    found += 1;
                    let k = sub.prefix.len();
                    assert_eq!(sub.prefix, ui[..k]);
                    assert!(finite_cover_decide(mode, &ti, &sub.prefix));
                    assert!(finite_cover_decide(mode, &ti, &sub.chain));
                    assert!(k == 1 || !finite_cover_decide(mode, &ti, &ui[..k - 1]));
                }
                Err(_) => assert!(!finite_cover_decide(mode, &ti, &ui)),
            }
        }
    }
    assert!(found > 100);
}
