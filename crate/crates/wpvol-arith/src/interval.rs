//! Certified decimal evaluation of Q[pi^2] values.
//!
//! All numerics go through integer fixed-point interval arithmetic around
//! enclosures of pi computed with Machin's formula, so every rendered digit
//! and every reported sign is provably correct.

use crate::pi_value::PiValue;
use crate::rational::{decimal_string, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::RwLock;
use thiserror::Error;

/// Raised when the interval precision ladder reaches its ceiling without
/// resolving a sign or a rounded digit string.
#[derive(Debug, Error)]
#[error("could not certify the result with {max_digits} working digits")]
pub struct PrecisionError {
    pub max_digits: u32,
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

/// Lower and upper fixed-point bounds on arctan(1/x) at the given scale,
/// by the alternating series with floored divisions.
fn arctan_recip(x: u64, scale: &BigInt) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = scale / BigInt::from(x);
    let mut sum = power.clone();
    let mut k: u64 = 1;
    let mut steps: u64 = 1;
    while !power.is_zero() {
        power = &power / &x2;
        let contrib = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= contrib;
        } else {
            sum += contrib;
        }
        k += 1;
        steps += 1;
    }
    // Every floored division loses at most one unit in the last place and
    // the truncated alternating tail is below one unit, so this slack is a
    // safe (very loose) enclosure.
    let slack = BigInt::from(2 * steps + 2);
    (&sum - &slack, &sum + &slack)
}

/// Fixed-point enclosure of pi at scale `10^w`, computed at extra internal
/// precision and cached per working precision.
fn pi_fixed(w: u32) -> (BigInt, BigInt) {
    static CACHE: Lazy<RwLock<HashMap<u32, (BigInt, BigInt)>>> =
        Lazy::new(|| RwLock::new(HashMap::new()));
    if let Some(hit) = CACHE.read().unwrap().get(&w) {
        return hit.clone();
    }
    let guard = 10u32;
    let scale = pow10(w + guard);
    let (a5_lo, a5_hi) = arctan_recip(5, &scale);
    let (a239_lo, a239_hi) = arctan_recip(239, &scale);
    let lo_big = a5_lo * 16i32 - a239_hi * 4i32;
    let hi_big = a5_hi * 16i32 - a239_lo * 4i32;
    let down = pow10(guard);
    let value = (lo_big.div_floor(&down), div_ceil(&hi_big, &down));
    CACHE.write().unwrap().insert(w, value.clone());
    value
}

/// Closed interval with integer endpoints at an implicit scale `10^w`.
#[derive(Clone, Debug)]
struct FixInterval {
    lo: BigInt,
    hi: BigInt,
}

impl FixInterval {
    fn from_rational(c: &Rational, scale: &BigInt) -> Self {
        let scaled_num = c.numer() * scale;
        FixInterval {
            lo: scaled_num.div_floor(c.denom()),
            hi: div_ceil(&scaled_num, c.denom()),
        }
    }

    fn add(&self, other: &FixInterval) -> Self {
        FixInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    fn mul(&self, other: &FixInterval, scale: &BigInt) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().div_floor(scale);
        let hi = div_ceil(products.iter().max().unwrap(), scale);
        FixInterval { lo, hi }
    }
}

/// Encloses `v` at scale `10^w`.
fn eval_fixed(v: &PiValue, w: u32) -> FixInterval {
    let scale = pow10(w);
    let (pi_lo, pi_hi) = pi_fixed(w);
    let pi = FixInterval { lo: pi_lo, hi: pi_hi };
    let pi2 = pi.mul(&pi, &scale);
    let max_e = v.max_exponent().unwrap_or(0);
    let mut powers: Vec<FixInterval> =
        Vec::with_capacity(max_e as usize + 1);
    powers.push(FixInterval { lo: scale.clone(), hi: scale.clone() });
    for e in 1..=max_e {
        let next = powers[(e - 1) as usize].mul(&pi2, &scale);
        powers.push(next);
    }
    let mut acc = FixInterval { lo: BigInt::zero(), hi: BigInt::zero() };
    for (e, c) in v.iter() {
        let cf = FixInterval::from_rational(c, &scale);
        acc = acc.add(&cf.mul(&powers[e as usize], &scale));
    }
    acc
}

const SIGN_LADDER: [u32; 5] = [100, 200, 400, 800, 1000];

/// Certified sign of `v`: symbolic zero short-circuits, anything else is
/// resolved by interval evaluation with escalating precision.
pub fn pi_value_sign(v: &PiValue) -> Result<Ordering, PrecisionError> {
    if v.is_zero() {
        return Ok(Ordering::Equal);
    }
    if let Some(c) = v.as_rational() {
        return Ok(c.cmp(&Rational::zero()));
    }
    for &w in SIGN_LADDER.iter() {
        let iv = eval_fixed(v, w);
        if iv.lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if iv.hi.is_negative() {
            return Ok(Ordering::Less);
        }
    }
    Err(PrecisionError { max_digits: *SIGN_LADDER.last().unwrap() })
}

/// Certified three-way comparison of two values, exact on symbolically
/// equal inputs.
pub fn pi_value_cmp(a: &PiValue, b: &PiValue) -> Result<Ordering, PrecisionError> {
    pi_value_sign(&(a - b))
}

/// Rounds both interval endpoints half-up to `digits` fractional places;
/// `Some` when they agree on the result (scaled by `10^digits`).
fn round_agree(iv: &FixInterval, w: u32, digits: u32) -> Option<BigInt> {
    // floor(x / 10^w * 10^digits + 1/2) = floor((2 x 10^digits + 10^w) / (2 * 10^w))
    let shift = pow10(digits);
    let scale = pow10(w);
    let den = &scale * 2i32;
    let r_lo = (&iv.lo * 2i32 * &shift + &scale).div_floor(&den);
    let r_hi = (&iv.hi * 2i32 * &shift + &scale).div_floor(&den);
    (r_lo == r_hi).then_some(r_lo)
}

fn render_scaled(r: &BigInt, digits: u32) -> String {
    let neg = r.is_negative();
    let abs = r.abs();
    let scale = pow10(digits);
    let (ipart, fpart) = (&abs / &scale, &abs % &scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ipart}")
    } else {
        format!("{sign}{ipart}.{fpart:0>width$}", width = digits as usize)
    }
}

/// Decimal rendering of `v` to `digits` fractional places, half-up,
/// certified by interval arithmetic (exact for pure rationals).
pub fn pi_eval(v: &PiValue, digits: u32) -> Result<String, PrecisionError> {
    if let Some(c) = v.as_rational() {
        return Ok(decimal_string(&c, digits));
    }
    let mut w = digits + 30;
    let mut last = w;
    for _ in 0..6 {
        let iv = eval_fixed(v, w);
        if let Some(r) = round_agree(&iv, w, digits) {
            return Ok(render_scaled(&r, digits));
        }
        last = w;
        w *= 2;
    }
    Err(PrecisionError { max_digits: last })
}

/// Decimal rendering of the quotient `num / den` of two values, certified;
/// fails if `den` cannot be certified nonzero.
pub fn pi_eval_ratio(
    num: &PiValue,
    den: &PiValue,
    digits: u32,
) -> Result<String, PrecisionError> {
    if let (Some(a), Some(b)) = (num.as_rational(), den.as_rational()) {
        if b.is_zero() {
            return Err(PrecisionError { max_digits: 0 });
        }
        return Ok(decimal_string(&(a / b), digits));
    }
    if pi_value_sign(den)? == Ordering::Equal {
        return Err(PrecisionError { max_digits: 0 });
    }
    let mut w = digits + 30;
    let mut last = w;
    for _ in 0..6 {
        let n = eval_fixed(num, w);
        let d = eval_fixed(den, w);
        let zero = BigInt::zero();
        let den_positive = d.lo > zero;
        let den_negative = d.hi < zero;
        if den_positive || den_negative {
            // Quotient interval endpoints, as exact rationals at scale 1.
            let quots = [
                Rational::new(n.lo.clone(), d.lo.clone()),
                Rational::new(n.lo.clone(), d.hi.clone()),
                Rational::new(n.hi.clone(), d.lo.clone()),
                Rational::new(n.hi.clone(), d.hi.clone()),
            ];
            let q_lo = quots.iter().min().unwrap();
            let q_hi = quots.iter().max().unwrap();
            // Scale-free rounding agreement on the rational endpoints.
            let shift = pow10(digits);
            let round = |q: &Rational| -> BigInt {
                (q.numer() * 2i32 * &shift + q.denom()).div_floor(&(q.denom() * 2i32))
            };
            let r_lo = round(q_lo);
            let r_hi = round(q_hi);
            if r_lo == r_hi {
                return Ok(render_scaled(&r_lo, digits));
            }
        }
        last = w;
        w *= 2;
    }
    Err(PrecisionError { max_digits: last })
}
