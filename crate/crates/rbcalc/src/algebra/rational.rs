//! Exact scalar arithmetic.
//!
//! All coefficients in the library are arbitrary-precision rationals.
//! `num_rational::BigRational` already keeps values in lowest terms with a
//! positive denominator, which is exactly the normal form we rely on for
//! deterministic serialization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical `p/q` rendering; the denominator is always printed so the
/// serialized form has a single shape.
pub fn rat_str(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn rat_parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

/// TeX rendering of a rational: integers bare, fractions via `\frac`.
pub fn rat_latex(x: &Rational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else if x.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", -x.numer(), x.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let x = rat(2, -4);
        assert_eq!(x.numer(), &BigInt::from(-1));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(rat_str(&x), "-1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/4", "-7/2", "0/5", "12"] {
            let x = rat_parse(s).unwrap();
            assert_eq!(rat_parse(&rat_str(&x)).unwrap(), x);
        }
        assert!(rat_parse("1/0").is_none());
        assert!(rat_parse("a/b").is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), rat_int(35));
        assert_eq!(binomial(3, 7), rat_int(0));
        assert_eq!(binomial(0, 0), rat_int(1));
        assert_eq!(factorial(5), rat_int(120));
    }
}
