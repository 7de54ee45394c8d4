//! Brute-force cover oracle over a rational grid, in plain `i128` arithmetic.
//!
//! With `N = 2·lcm` of every denominator involved, the uncovered part of the
//! target is a finite union of points and intervals whose endpoints are
//! multiples of `1/(N/2)`; each piece therefore contains a point `i/N`.

#![allow(dead_code)]

/// `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub num: i64,
    pub den: i64,
}

pub const fn frac(num: i64, den: i64) -> Frac {
    Frac { num, den }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The grid denominator for a family of fractions.
pub fn grid_denominator(fracs: &[Frac]) -> i128 {
    let lcm = fracs
        .iter()
        .fold(1i128, |l, f| l / gcd(l, f.den as i128) * f.den as i128);
    2 * lcm
}

fn scaled(f: Frac, n: i128) -> i128 {
    f.num as i128 * (n / f.den as i128)
}

/// `None` when every grid point of the target segment lies in some member;
/// otherwise the first uncovered point as `(i, N)`.
pub fn grid_uncovered(unit_interval: bool, t: (Frac, Frac), u: &[(Frac, Frac)]) -> Option<(i128, i128)> {
    let mut all = vec![t.0, t.1];
    all.extend(u.iter().flat_map(|&(a, b)| [a, b]));
    let n = grid_denominator(&all);
    let (p, q) = (scaled(t.0, n), scaled(t.1, n));
    let members: Vec<(i128, i128)> = u.iter().map(|&(a, b)| (scaled(a, n), scaled(b, n))).collect();
    let in_segment = |i: i128| {
        if unit_interval {
            (p < i || (p < 0 && i == 0)) && (i < q || (q > n && i == n)) && (0..=n).contains(&i)
        } else {
            p < i && i < q
        }
    };
    (p..=q)
        .filter(|&i| in_segment(i))
        .find(|&i| !members.iter().any(|&(a, b)| a < i && i < b))
        .map(|i| (i, n))
}

pub fn grid_covered(unit_interval: bool, t: (Frac, Frac), u: &[(Frac, Frac)]) -> bool {
    grid_uncovered(unit_interval, t, u).is_none()
}

pub type Interval = (Frac, Frac);

/// `(unit_interval, target, cover, covered)`.
pub type Instance = (bool, Interval, Vec<Interval>, bool);

/// Hand-checked instances.
pub fn hand_instances() -> Vec<Instance> {
    let i = |a: i64, b: i64, c: i64, d: i64| (frac(a, b), frac(c, d));
    vec![
        (false, i(0, 1, 1, 1), vec![i(0, 1, 1, 1)], true),
        (false, i(0, 1, 2, 1), vec![i(0, 1, 1, 1), i(1, 1, 2, 1)], false),
        (false, i(0, 1, 1, 1), vec![i(-1, 1, 3, 5), i(1, 2, 2, 1)], true),
        (true, i(2, 1, 3, 1), vec![], true),
        (true, i(-1, 2, 3, 2), vec![i(-1, 10, 11, 10)], true),
        (false, i(-1, 2, 3, 2), vec![i(-1, 10, 11, 10)], false),
        (true, i(-1, 1, 1, 2), vec![i(0, 1, 1, 1)], false),
        (true, i(0, 1, 1, 2), vec![i(0, 1, 1, 1)], true),
        (true, i(-1, 1, 0, 1), vec![], true),
        (false, i(0, 1, 1, 1), vec![i(0, 1, 1, 3), i(1, 3, 1, 1)], false),
        (
            false,
            i(0, 1, 1, 1),
            vec![i(0, 1, 1, 3), i(1, 4, 2, 3), i(1, 2, 1, 1)],
            true,
        ),
    ]
}
