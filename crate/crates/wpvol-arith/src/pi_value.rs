//! The scalar ring Q[pi^2]: exact polynomials in pi^2 with rational
//! coefficients.

use crate::rational::Rational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of Q[pi^2], stored as a map from the exponent `e` of
/// `pi^(2e)` to its rational coefficient.
///
/// # Invariants
///
/// No stored coefficient is zero, so structural equality is semantic
/// equality and the rendered form is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PiValue {
    terms: BTreeMap<u32, Rational>,
}

impl PiValue {
    /// The zero element.
    pub fn zero() -> Self {
        PiValue { terms: BTreeMap::new() }
    }

    /// The unit element.
    pub fn one() -> Self {
        PiValue::from_rational(Rational::from_integer(1.into()))
    }

    /// Embeds a rational as the degree-zero term.
    pub fn from_rational(c: Rational) -> Self {
        PiValue::term(c, 0)
    }

    /// The single term `c * pi^(2e)`.
    pub fn term(c: Rational, e: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        PiValue { terms }
    }

    /// `pi^(2e)`.
    pub fn pi2_pow(e: u32) -> Self {
        PiValue::term(Rational::from_integer(1.into()), e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `pi^(2e)` (zero if absent).
    pub fn coeff(&self, e: u32) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the value is the pure rational `c` (including zero).
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Iterates `(exponent, coefficient)` pairs with ascending exponents.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Largest exponent present, if any.
    pub fn max_exponent(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PiValue::zero();
        }
        PiValue { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Multiplies by `pi^(2e)`.
    pub fn mul_pi2_pow(&self, e: u32) -> Self {
        PiValue { terms: self.terms.iter().map(|(k, v)| (k + e, v.clone())).collect() }
    }

    fn add_term(&mut self, e: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl Add for &PiValue {
    type Output = PiValue;
    fn add(self, rhs: &PiValue) -> PiValue {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &PiValue {
    type Output = PiValue;
    fn sub(self, rhs: &PiValue) -> PiValue {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(*e, &(-c));
        }
        out
    }
}

impl Mul for &PiValue {
    type Output = PiValue;
    fn mul(self, rhs: &PiValue) -> PiValue {
        let mut out = PiValue::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        PiValue { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PiValue {
            type Output = PiValue;
            fn $method(self, rhs: PiValue) -> PiValue {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PiValue> for PiValue {
            type Output = PiValue;
            fn $method(self, rhs: &PiValue) -> PiValue {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        -&self
    }
}

impl fmt::Display for PiValue {
    /// Canonical form: terms in descending powers of pi joined by ` + `,
    /// each written `p/q*pi^(2e)` with the exponent spelled out (`pi^2`,
    /// `pi^4`, ...), degree-zero terms as a bare rational, zero as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *e == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*pi^{}", 2 * e)?;
            }
        }
        Ok(())
    }
}
