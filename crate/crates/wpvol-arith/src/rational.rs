//! Arbitrary-precision rational numbers and small combinatorial helpers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::sync::RwLock;

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// `n` as a `BigInt`.
pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// The rational `n / d`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(big(n), big(d))
}

/// The rational `n / 1`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(big(n))
}

/// `n!` as a `BigInt`.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// The double factorial `m!! = m (m-2) (m-4) ... ` for odd `m >= -1`,
/// with `(-1)!! = 1`.
///
/// Cached because the recursions evaluate these constantly.
///
/// # Panics
///
/// Panics if `m` is even or `m < -1`.
pub fn odd_double_factorial(m: i64) -> BigInt {
    assert!(m >= -1 && m % 2 != 0, "odd_double_factorial needs odd m >= -1, got {m}");
    if m == -1 {
        return BigInt::one();
    }
    let idx = (m / 2) as usize; // m = 2*idx + 1
    {
        let table = ODD_DFAC_TABLE.read().unwrap();
        if idx < table.len() {
            return table[idx].clone();
        }
    }
    let mut table = ODD_DFAC_TABLE.write().unwrap();
    while table.len() <= idx {
        let k = table.len() as i64; // next entry is (2k+1)!!
        let prev = table.last().cloned().unwrap_or_else(BigInt::one);
        table.push(prev * (2 * k + 1));
    }
    table[idx].clone()
}

static ODD_DFAC_TABLE: Lazy<RwLock<Vec<BigInt>>> = Lazy::new(|| RwLock::new(vec![BigInt::one()]));

/// Binomial coefficient `C(n, k)` as a `BigInt` (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Integer power `base^exp` of a rational.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Renders an exact rational as a decimal string with `digits` places after
/// the point, rounding half-up (ties toward positive infinity).
pub fn decimal_string(value: &Rational, digits: u32) -> String {
    use num_integer::Integer;
    let scale = BigInt::from(10u32).pow(digits);
    // floor(value * scale + 1/2)
    let scaled = value * Rational::from_integer(scale.clone());
    let num = scaled.numer();
    let den = scaled.denom(); // > 0
    let rounded: BigInt = (num * 2i32 + den).div_floor(&(den * 2i32));
    let neg = rounded.is_negative();
    let abs = rounded.abs();
    let (ipart, fpart) = (&abs / &scale, &abs % &scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ipart}")
    } else {
        format!("{sign}{ipart}.{fpart:0>width$}", width = digits as usize)
    }
}

/// Renders `value` with exactly `digits` decimal places, dropping every
/// further digit (truncation toward zero).
pub fn decimal_string_trunc(value: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value * Rational::from_integer(scale.clone());
    let truncated = scaled.trunc().to_integer();
    let neg = truncated.is_negative();
    let abs = truncated.abs();
    let (ipart, fpart) = (&abs / &scale, &abs % &scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ipart}")
    } else {
        format!("{sign}{ipart}.{fpart:0>width$}", width = digits as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(5), big(120));
        assert_eq!(factorial(10), big(3628800));
    }

    #[test]
    fn odd_double_factorial_values() {
        assert_eq!(odd_double_factorial(-1), big(1));
        assert_eq!(odd_double_factorial(1), big(1));
        assert_eq!(odd_double_factorial(5), big(15));
        assert_eq!(odd_double_factorial(9), big(945));
        assert_eq!(odd_double_factorial(3), big(3));
    }

    #[test]
    #[should_panic(expected = "odd m")]
    fn odd_double_factorial_rejects_even() {
        odd_double_factorial(4);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(4, 7), big(0));
        assert_eq!(binomial(60, 30), "118264581564861424".parse().unwrap());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal_string(&rat(1, 2), 0), "1");
        assert_eq!(decimal_string(&rat(-1, 2), 0), "0");
        assert_eq!(decimal_string(&rat(1, 8), 2), "0.13");
        assert_eq!(decimal_string(&rat(1, 3), 6), "0.333333");
        assert_eq!(decimal_string(&rat(905801, 1000000), 6), "0.905801");
        assert_eq!(decimal_string(&rat_int(3), 3), "3.000");
        assert_eq!(decimal_string(&rat(-1, 8), 2), "-0.12");
        assert_eq!(decimal_string(&rat(1, 2), 3), "0.500");
    }

    #[test]
    fn decimal_truncation() {
        assert_eq!(decimal_string_trunc(&rat(1, 8), 2), "0.12");
        assert_eq!(decimal_string_trunc(&rat(2, 3), 6), "0.666666");
        assert_eq!(decimal_string_trunc(&rat(1_000_107, 1_000_000), 6), "1.000107");
        assert_eq!(decimal_string_trunc(&rat(10_001_069, 10_000_000), 6), "1.000106");
        assert_eq!(decimal_string_trunc(&rat_int(3), 3), "3.000");
        assert_eq!(decimal_string_trunc(&rat(-1, 8), 2), "-0.12");
        assert_eq!(decimal_string_trunc(&rat(7, 2), 0), "3");
    }
}
