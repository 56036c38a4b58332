//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"` or an integer `"p"`.
pub fn parse(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = n
        .parse()
        .map_err(|_| format!("invalid rational `{text}`"))?;
    let denom: BigInt = d
        .parse()
        .map_err(|_| format!("invalid rational `{text}`"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(Rational::new(numer, denom))
}

/// Always `"p/q"` in lowest terms, with `q > 0`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse(" 3 ").unwrap(), ratio(3, 1));
        assert_eq!(format(&ratio(3, 1)), "3/1");
        assert_eq!(format(&ratio(2, -6)), "-1/3");
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("a/b").is_err());
    }
}
