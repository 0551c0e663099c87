//! Bernoulli numbers, even zeta values, and the coefficient sequence of
//! x / (2 sinh(x/2)) that drives the volume recursion kernels.

use crate::pi_value::PiValue;
use crate::rational::{binomial, factorial, rat, Rational};
use num_traits::One;
use once_cell::sync::Lazy;
use std::sync::RwLock;

static BERNOULLI_TABLE: Lazy<RwLock<Vec<Rational>>> =
    Lazy::new(|| RwLock::new(vec![Rational::one(), rat(-1, 2)]));

/// Bernoulli number `B_m` in the convention `B_1 = -1/2`, computed from the
/// defining recurrence `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
pub fn bernoulli(m: u64) -> Rational {
    let idx = m as usize;
    {
        let table = BERNOULLI_TABLE.read().unwrap();
        if idx < table.len() {
            return table[idx].clone();
        }
    }
    let mut table = BERNOULLI_TABLE.write().unwrap();
    while table.len() <= idx {
        let m = table.len() as u64;
        let mut s = Rational::from_integer(0.into());
        for (j, bj) in table.iter().enumerate() {
            s += Rational::from_integer(binomial(m + 1, j as u64)) * bj;
        }
        table.push(-s / Rational::from_integer((m + 1).into()));
    }
    table[idx].clone()
}

/// `zeta(2L)` as an exact element of Q[pi^2], via
/// `zeta(2L) = (-1)^(L+1) B_{2L} (2 pi)^(2L) / (2 (2L)!)`.
///
/// # Panics
///
/// Panics if `L == 0`.
pub fn zeta_even(l: u32) -> PiValue {
    assert!(l >= 1, "zeta_even is defined for L >= 1");
    let b = bernoulli(2 * l as u64);
    let sign = if l % 2 == 1 { 1 } else { -1 };
    let two_pow = Rational::from_integer(num_bigint::BigInt::from(2).pow(2 * l));
    let coeff = rat(sign, 1) * b * two_pow
        / (Rational::from_integer(2.into()) * Rational::from_integer(factorial(2 * l as u64)));
    PiValue::term(coeff, l)
}

/// Coefficient `a_L` of the expansion of `x / (2 sinh(x/2))`: `a_0 = 1/2`
/// and `a_L = zeta(2L) (1 - 2^(1-2L))` for `L >= 1`.
pub fn sinh_coeff(l: u32) -> PiValue {
    if l == 0 {
        return PiValue::from_rational(rat(1, 2));
    }
    // 1 - 2^(1-2L) = (2^(2L-1) - 1) / 2^(2L-1)
    let p = num_bigint::BigInt::from(2).pow(2 * l - 1);
    let scale = Rational::new(&p - num_bigint::BigInt::from(1), p);
    zeta_even(l).scale(&scale)
}
