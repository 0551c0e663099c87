//! Dense polynomials, rational functions, and 1/g power series in a single
//! formal variable `g`, with exact rational coefficients.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Polynomial in `g` stored as ascending coefficients with no trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GPoly {
    coeffs: Vec<Rational>,
}

impl GPoly {
    pub fn zero() -> Self {
        GPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        GPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        GPoly::from_coeffs(vec![c])
    }

    /// The variable `g` itself.
    pub fn var() -> Self {
        GPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `c * g^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        GPoly::from_coeffs(coeffs)
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        GPoly { coeffs }
    }

    /// Builds from ascending integer coefficients.
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        GPoly::from_coeffs(coeffs.iter().map(|&c| crate::rational::rat_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `g^k` (zero if absent).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&crate::rational::rat_int(x))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GPoly::zero();
        }
        GPoly { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    /// Composition `p(g - s)`, exact.
    pub fn shift(&self, s: i64) -> Self {
        let lin = GPoly::from_coeffs(vec![crate::rational::rat_int(-s), Rational::one()]);
        let mut acc = GPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &GPoly::constant(c.clone());
        }
        acc
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Exact division: `self = q * d + r` with `deg r < deg d`.
    ///
    /// # Panics
    ///
    /// Panics if `d` is zero.
    pub fn divmod(&self, d: &GPoly) -> (GPoly, GPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let dl = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (GPoly::zero(), self.clone());
        }
        let qlen = rem.len() - dd;
        let mut q = vec![Rational::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem[i + j] -= t;
            }
            q[i] = c;
        }
        (GPoly::from_coeffs(q), GPoly::from_coeffs(rem))
    }

    /// Monic greatest common divisor over Q (1 for coprime inputs).
    pub fn gcd(&self, other: &GPoly) -> GPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return GPoly::zero();
        }
        let lead = a.leading().unwrap().clone();
        a.scale(&lead.recip())
    }
}

impl Add for &GPoly {
    type Output = GPoly;
    fn add(self, rhs: &GPoly) -> GPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        GPoly::from_coeffs(out)
    }
}

impl Sub for &GPoly {
    type Output = GPoly;
    fn sub(self, rhs: &GPoly) -> GPoly {
        self + &(-rhs)
    }
}

impl Mul for &GPoly {
    type Output = GPoly;
    fn mul(self, rhs: &GPoly) -> GPoly {
        if self.is_zero() || rhs.is_zero() {
            return GPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        GPoly::from_coeffs(out)
    }
}

impl Neg for &GPoly {
    type Output = GPoly;
    fn neg(self) -> GPoly {
        GPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for GPoly {
    /// Descending powers with no spaces, e.g. `36g^2-36g+15`; unit
    /// coefficients are suppressed on powers of `g`; non-integer
    /// coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            let unit = a.is_one();
            if k == 0 || !unit {
                if a.denom().is_one() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "g")?,
                _ => write!(f, "g^{k}")?,
            }
        }
        Ok(())
    }
}

/// Ratio of two polynomials in `g`, kept in canonical form.
///
/// # Invariants
///
/// Numerator and denominator are coprime integer-coefficient polynomials,
/// jointly primitive (no common integer factor across the two), and the
/// denominator has positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRationalFn {
    numer: GPoly,
    denom: GPoly,
}

impl GRationalFn {
    /// Builds and canonicalizes `numer / denom`.
    ///
    /// # Panics
    ///
    /// Panics if `denom` is zero.
    pub fn new(numer: GPoly, denom: GPoly) -> Self {
        assert!(!denom.is_zero(), "rational function with zero denominator");
        if numer.is_zero() {
            return GRationalFn { numer: GPoly::zero(), denom: GPoly::one() };
        }
        let g = numer.gcd(&denom);
        let (mut n, mut d) = if g.degree() == Some(0) {
            (numer, denom)
        } else {
            (numer.divmod(&g).0, denom.divmod(&g).0)
        };
        // Scale by a single rational so both become integral and jointly
        // primitive.
        let mut den_lcm = BigInt::one();
        for c in n.coeffs().iter().chain(d.coeffs().iter()) {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let lcm_rat = Rational::from_integer(den_lcm);
        n = n.scale(&lcm_rat);
        d = d.scale(&lcm_rat);
        let mut content = BigInt::zero();
        for c in n.coeffs().iter().chain(d.coeffs().iter()) {
            content = content.gcd(c.numer());
        }
        if !content.is_one() {
            let inv = Rational::from_integer(content).recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        if d.leading().unwrap().is_negative() {
            n = -&n;
            d = -&d;
        }
        GRationalFn { numer: n, denom: d }
    }

    pub fn from_poly(p: GPoly) -> Self {
        GRationalFn::new(p, GPoly::one())
    }

    pub fn numer(&self) -> &GPoly {
        &self.numer
    }

    pub fn denom(&self) -> &GPoly {
        &self.denom
    }

    /// Exact value at `g = x`, or `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.denom.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.numer.eval(x) / d)
    }

    pub fn eval_int(&self, x: i64) -> Option<Rational> {
        self.eval(&crate::rational::rat_int(x))
    }

    pub fn add(&self, rhs: &GRationalFn) -> GRationalFn {
        GRationalFn::new(
            &(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom),
            &self.denom * &rhs.denom,
        )
    }

    pub fn mul(&self, rhs: &GRationalFn) -> GRationalFn {
        GRationalFn::new(&self.numer * &rhs.numer, &self.denom * &rhs.denom)
    }
}

impl fmt::Display for GRationalFn {
    /// Canonical `(numerator)/(denominator)` form, e.g.
    /// `(12g^2-12g+5)/(12g^2-6g)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.numer, self.denom)
    }
}

/// Truncated expansion of a rational function in powers of 1/g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseGSeries {
    pub order: usize,
    /// `coefficients[j]` multiplies `g^-j`; length `order + 1`.
    pub coefficients: Vec<Rational>,
}

/// Error from [`expand_inverse_g`].
#[derive(Debug, Error)]
pub enum ExpandError {
    #[error("rational function is unbounded as g grows (numerator degree exceeds denominator degree)")]
    Unbounded,
}

/// Expands `f` as `c_0 + c_1/g + ... + c_order/g^order`, requiring
/// `deg numer <= deg denom` so the expansion exists.
pub fn expand_inverse_g(f: &GRationalFn, order: usize) -> Result<InverseGSeries, ExpandError> {
    let m = f.denom().degree().expect("canonical denominator is nonzero");
    if let Some(dn) = f.numer().degree() {
        if dn > m {
            return Err(ExpandError::Unbounded);
        }
    }
    let nc = |i: i64| -> Rational {
        if i < 0 {
            Rational::zero()
        } else {
            f.numer().coeff(i as usize)
        }
    };
    let dc = |i: i64| -> Rational {
        if i < 0 {
            Rational::zero()
        } else {
            f.denom().coeff(i as usize)
        }
    };
    let lead = dc(m as i64);
    let mut coefficients: Vec<Rational> = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut s = nc(m as i64 - j as i64);
        for (t, prev) in coefficients.iter().enumerate() {
            // t runs over 0..j as the index of c_t; subtract D_{m-(j-t)} c_t
            s -= dc(m as i64 - (j - t) as i64) * prev;
        }
        coefficients.push(s / &lead);
    }
    Ok(InverseGSeries { order, coefficients })
}
