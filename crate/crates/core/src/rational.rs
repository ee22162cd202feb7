//! Rational scalar helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn dot_iq(v: &[i64], u: &[Q]) -> Q {
    v.iter()
        .zip(u)
        .fold(Q::zero(), |acc, (a, b)| acc + b * BigInt::from(*a))
}

pub fn dot_ii(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Least common multiple of the denominators of `values`.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow(x: &Q, e: usize) -> Q {
    let mut out = Q::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

/// Parses `"p/q"`, `"-p/q"` or an integer string.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Lowest-terms text form: `"12"`, `"-1/3"`.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Positional decimal with `sig` significant digits, rounded half away from zero.
pub fn format_decimal(x: &Q, sig: usize) -> String {
    assert!(sig > 0);
    let ten = BigInt::from(10);
    let neg = x.is_negative();
    let a = x.abs();
    // exponent e with 10^e <= a < 10^(e+1); zero is treated as e = 0
    let mut e: i64 = 0;
    if !a.is_zero() {
        let ten_q = Q::from_integer(ten.clone());
        let mut lo = Q::one();
        while a >= &lo * &ten_q {
            lo *= &ten_q;
            e += 1;
        }
        let mut lo = Q::one();
        while a < lo {
            lo /= &ten_q;
            e -= 1;
        }
    }
    // keep `frac_digits` digits after the decimal point
    let frac_digits = (sig as i64 - 1 - e).max(0) as usize;
    let scale = num_traits::pow(ten.clone(), frac_digits);
    let scaled = &a * Q::from_integer(scale.clone());
    let mut n = scaled.floor().to_integer();
    let rem = scaled - Q::from_integer(n.clone());
    if rem * BigInt::from(2) >= Q::one() {
        n += 1;
    }
    let digits = n.to_string();
    let (int_part, frac_part) = if frac_digits == 0 {
        (digits, String::new())
    } else if digits.len() > frac_digits {
        let (i, f) = digits.split_at(digits.len() - frac_digits);
        (i.to_string(), f.to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", digits, width = frac_digits))
    };
    let mut out = String::new();
    if neg && !n.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(&frac_part);
    }
    out
}
