//! Independent oracle for two-point intersection numbers, via Dijkgraaf's
//! closed generating series. Shares no code with the DVV recursion.
//!
//! With `F(x, y) = (x + y)^{-1} exp((x^3 + y^3)/24) S(x, y)` where
//! `S = sum_k k!/(2k+1)! (x y (x + y)/2)^k`, the coefficient extraction
//! below reads `<tau_a tau_b>` off the truncated product
//! `E = exp((x^3 + y^3)/24) S` without ever forming the division by
//! `x + y` explicitly.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use wpvol_arith::rational::{factorial, odd_double_factorial, Rational};

/// Triangular bivariate polynomial: `coeff[i][j]` multiplies `x^i y^j`,
/// stored for total degree `i + j <= deg`.
struct Bivariate {
    deg: usize,
    coeff: Vec<Vec<Rational>>,
}

impl Bivariate {
    fn zero(deg: usize) -> Self {
        let coeff = (0..=deg).map(|i| vec![Rational::zero(); deg - i + 1]).collect();
        Bivariate { deg, coeff }
    }

    fn get(&self, i: usize, j: usize) -> Rational {
        if i + j <= self.deg {
            self.coeff[i][j].clone()
        } else {
            Rational::zero()
        }
    }

    fn add_at(&mut self, i: usize, j: usize, c: Rational) {
        if i + j <= self.deg {
            self.coeff[i][j] += c;
        }
    }

    fn mul(&self, other: &Bivariate) -> Bivariate {
        let mut out = Bivariate::zero(self.deg);
        for i1 in 0..=self.deg {
            for j1 in 0..=(self.deg - i1) {
                let a = &self.coeff[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(self.deg - i1 - j1) {
                    for j2 in 0..=(self.deg - i1 - j1 - i2) {
                        let b = &other.coeff[i2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        out.coeff[i1 + i2][j1 + j2] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// `<tau_a tau_b>` at the genus implied by `a + b = 3g - 1`; zero when no
/// such genus exists (`a + b` not congruent to 2 mod 3).
pub fn two_point_oracle(a: u32, b: u32) -> Rational {
    if (a + b) % 3 != 2 {
        return Rational::zero();
    }
    let deg = (a + b + 1) as usize;

    // exp((x^3 + y^3)/24) = sum_{p,q} x^{3p} y^{3q} / (24^{p+q} p! q!)
    let mut exp_part = Bivariate::zero(deg);
    for p in 0..=(deg / 3) {
        for q in 0..=((deg - 3 * p) / 3) {
            let den = BigInt::from(24).pow((p + q) as u32)
                * factorial(p as u64)
                * factorial(q as u64);
            exp_part.add_at(3 * p, 3 * q, Rational::new(BigInt::one(), den));
        }
    }

    // S = sum_k k!/(2k+1)! (x y (x + y)/2)^k
    //   = sum_k k!/(2k+1)!/2^k sum_t C(k,t) x^{k+t} y^{2k-t}
    let mut s_part = Bivariate::zero(deg);
    for k in 0..=(deg / 3) {
        let scale = Rational::new(
            factorial(k as u64),
            BigInt::from(2).pow(k as u32) * factorial(2 * k as u64 + 1),
        );
        for t in 0..=k {
            let c = Rational::from_integer(wpvol_arith::rational::binomial(k as u64, t as u64))
                * scale.clone();
            s_part.add_at(k + t, 2 * k - t, c);
        }
    }

    let e = exp_part.mul(&s_part);

    // <tau_a tau_b> = sum_{j=0}^{b} (-1)^j [x^{a+1+j} y^{b-j}] E
    let mut acc = Rational::zero();
    for j in 0..=b {
        let term = e.get((a + 1 + j) as usize, (b - j) as usize);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Normalized form `(2a+1)!! (2b+1)!! <tau_a tau_b>`.
pub fn two_point_oracle_normalized(a: u32, b: u32) -> Rational {
    let scale = odd_double_factorial(2 * a as i64 + 1) * odd_double_factorial(2 * b as i64 + 1);
    two_point_oracle(a, b) * Rational::from_integer(scale)
}
