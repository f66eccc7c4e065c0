//! Exact rational arithmetic used for every flow and cut value.
//!
//! All solver logic works on [`Rational`]; floating point never enters the
//! picture, so equality tests between derived quantities are exact.

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

/// Exact rational number in canonical reduced form (positive denominator,
/// gcd of numerator and denominator equal to one).
pub type Rational = Ratio<i64>;

/// Shorthand constructor. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}

/// `floor(num / x)` for an integer numerator and a positive rational `x`.
pub fn floor_div(num: i64, x: Rational) -> i64 {
    assert!(x > Rational::zero(), "floor_div requires a positive divisor");
    (Rational::from_integer(num) / x).floor().to_integer()
}

/// Renders a rational as `num/den`, denominator always present ("3/1", "-1/2").
pub fn format_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}` in rational literal")]
    BadInteger(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}

/// Parses `num/den` or a bare integer `num`.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: i64 = num_text
        .parse()
        .map_err(|_| RationalParseError::BadInteger(num_text.to_string()))?;
    let den: i64 = den_text
        .parse()
        .map_err(|_| RationalParseError::BadInteger(den_text.to_string()))?;
    if den == 0 {
        return Err(RationalParseError::ZeroDenominator);
    }
    Ok(Ratio::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};

    fn big(r: Rational) -> (BigInt, BigInt) {
        (BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    // Reference arithmetic via arbitrary-precision cross multiplication,
    // independent of the Ratio implementation.
    fn add_big(a: Rational, b: Rational) -> (BigInt, BigInt) {
        let (an, ad) = big(a);
        let (bn, bd) = big(b);
        (&an * &bd + &bn * &ad, ad * bd)
    }

    fn cmp_big(a: Rational, b: Rational) -> std::cmp::Ordering {
        let (an, ad) = big(a);
        let (bn, bd) = big(b);
        (an * bd).cmp(&(bn * ad))
    }

    fn equal_big(sum: Rational, reference: &(BigInt, BigInt)) -> bool {
        let (sn, sd) = big(sum);
        sn * &reference.1 == sd * &reference.0
    }

    #[test]
    fn arithmetic_matches_bigint_cross_multiplication() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xACC0);
        for _ in 0..10_000 {
            let a = ratio(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=1_000_000));
            let b = ratio(rng.gen_range(-1_000_000..=1_000_000), rng.gen_range(1..=1_000_000));
            assert!(equal_big(a + b, &add_big(a, b)));
            assert_eq!(a.cmp(&b), cmp_big(a, b));
        }
    }

    #[test]
    fn canonical_form() {
        let r = ratio(6, -4);
        assert_eq!((*r.numer(), *r.denom()), (-3, 2));
        assert_eq!(ratio(0, 7), Rational::zero());
    }

    #[test]
    fn floor_div_examples() {
        assert_eq!(floor_div(4, ratio(4, 1)), 1);
        assert_eq!(floor_div(6, ratio(5, 2)), 2);
        assert_eq!(floor_div(5, ratio(1, 1)), 5);
        assert_eq!(floor_div(0, ratio(3, 1)), 0);
    }

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert_eq!(parse_rational("-2/6").unwrap(), ratio(-1, 3));
        assert_eq!(format_rational(ratio(1, 1)), "1/1");
        assert_eq!(format_rational(ratio(-1, 2)), "-1/2");
        assert!(matches!(parse_rational("1/0"), Err(RationalParseError::ZeroDenominator)));
        assert!(matches!(parse_rational("x/2"), Err(RationalParseError::BadInteger(_))));
        assert!(matches!(parse_rational("  "), Err(RationalParseError::Empty)));
    }
}
