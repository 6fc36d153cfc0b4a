//! Arbitrary-precision rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact scalar. Always reduced with a positive denominator.
pub type Rational = BigRational;

/// Dense vector of exact scalars.
pub type RatVector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Builds a vector from integer pairs `(numerator, denominator)`.
pub fn rvec(entries: &[(i64, i64)]) -> RatVector {
    entries.iter().map(|&(n, d)| ratio(n, d)).collect()
}

/// Builds an integer vector.
pub fn ivec(entries: &[i64]) -> RatVector {
    entries.iter().map(|&n| int(n)).collect()
}

/// Parses `"p/q"`, `"p"`, or a signed integer string.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not a rational: {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not a rational: {text:?}")))?;
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, with `/q` omitted when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(s: &Rational, v: &[Rational]) -> RatVector {
    v.iter().map(|x| s * x).collect()
}

pub fn neg(v: &[Rational]) -> RatVector {
    v.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn unit(dim: usize, i: usize) -> RatVector {
    (0..dim).map(|j| if i == j { one() } else { zero() }).collect()
}

/// Flips `v` so that its first nonzero coordinate is positive.
pub fn canonical_sign(v: RatVector) -> RatVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&v),
        _ => v,
    }
}

/// Largest denominator among the entries.
pub fn max_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .map(|x| x.denom().clone())
        .max()
        .unwrap_or_else(BigInt::one)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-1, 3)), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn canonical_sign_flips_leading_negative() {
        assert_eq!(canonical_sign(ivec(&[0, -1, 2])), ivec(&[0, 1, -2]));
        assert_eq!(canonical_sign(ivec(&[1, -1])), ivec(&[1, -1]));
        assert_eq!(canonical_sign(ivec(&[0, 0])), ivec(&[0, 0]));
    }
}
