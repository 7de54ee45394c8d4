//! Exact rational arithmetic against an `i128` fraction oracle.

use formtop_core::Rational;
use proptest::prelude::*;

/// A fraction in lowest terms with a positive denominator, computed in `i128`.
fn reduce(n: i128, d: i128) -> (i128, i128) {
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let g = gcd(n, d).max(1);
    let (n, d) = (n / g, d / g);
    if d < 0 {
        (-n, -d)
    } else {
        (n, d)
    }
}

fn parts(r: &Rational) -> (i128, i128) {
    (
        r.numerator().to_string().parse().unwrap(),
        r.denominator().to_string().parse().unwrap(),
    )
}

fn value() -> impl Strategy<Value = (i64, i64)> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_operations_match_oracle((a, b) in value(), (c, d) in value()) {
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        prop_assert_eq!(parts(&x), reduce(a, b));
        prop_assert_eq!(parts(&(&x + &y)), reduce(a * d + c * b, b * d));
        prop_assert_eq!(parts(&(&x - &y)), reduce(a * d - c * b, b * d));
        prop_assert_eq!(parts(&(&x * &y)), reduce(a * c, b * d));
        if c != 0 {
            prop_assert_eq!(parts(&(&x / &y)), reduce(a * d, b * c));
        }
        prop_assert_eq!(x.cmp(&y), (a * d).cmp(&(c * b)));
        prop_assert_eq!(parts(&x.midpoint(&y)), reduce(a * d + c * b, 2 * b * d));
    }

    #[test]
    fn display_round_trips((a, b) in value()) {
        let x = Rational::new(a, b);
        let (n, d) = reduce(a as i128, b as i128);
        prop_assert_eq!(x.to_string(), format!("{n}/{d}"));
        prop_assert_eq!(x.to_string().parse::<Rational>(), Ok(x));
    }

    #[test]
    fn midpoint_lies_strictly_between((a, b) in value(), (c, d) in value()) {
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        let m = x.midpoint(&y);
        if x < y {
            prop_assert!(x < m && m < y);
        } else {
            prop_assert!(y <= m && m <= x);
        }
    }

    #[test]
    fn additive_and_multiplicative_inverses((a, b) in value()) {
        let x = Rational::new(a, b);
        prop_assert!((&x + &(-&x)).is_zero());
        match x.recip() {
            None => prop_assert!(x.is_zero()),
            Some(r) => prop_assert_eq!(&x * &r, Rational::one()),
        }
    }
}

#[test]
fn integers_parse_without_denominator() {
    assert_eq!("7".parse::<Rational>(), Ok(Rational::integer(7)));
    assert_eq!("-3/6".parse::<Rational>(), Ok(Rational::new(-1, 2)));
    assert!("1/0".parse::<Rational>().is_err());
    assert!("x".parse::<Rational>().is_err());
}
