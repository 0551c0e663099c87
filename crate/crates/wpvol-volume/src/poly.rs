//! Volume polynomials: coefficient tables, text export, and evaluation.

use crate::{dimension, BracketError, VolumeEngine};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;
use wpvol_arith::rational::{factorial, Rational};
use wpvol_arith::PiValue;

/// Evaluation was given the wrong number of boundary lengths.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("expected {expected} boundary lengths, got {got}")]
pub struct ArityError {
    pub expected: usize,
    pub got: usize,
}

/// The volume polynomial of a `(g,n)` moduli space, stored in the
/// doubled-length convention: the coefficient at a degree vector `d` is
/// `[d]_{g,n} / prod (2 d_i + 1)!`, and the monomial it multiplies is
/// `prod x_i^(2 d_i)` where each boundary length is `2 x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumePolynomial {
    g: u32,
    n: usize,
    coeffs: BTreeMap<Vec<u32>, PiValue>,
}

/// Non-increasing vectors of length `n` with entry sum at most `budget`.
fn degree_vectors(n: usize, budget: u32) -> Vec<Vec<u32>> {
    fn rec(slots: usize, cap: u32, budget: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            out.push(acc.clone());
            return;
        }
        for v in 0..=cap.min(budget) {
            acc.push(v);
            rec(slots - 1, v, budget - v, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, budget, budget, &mut Vec::new(), &mut out);
    out
}

/// Distinct rearrangements of the multiset `d` (each produced exactly once).
fn distinct_permutations(d: &[u32]) -> Vec<Vec<u32>> {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &v in d {
        *counts.entry(v).or_insert(0) += 1;
    }
    fn rec(
        remaining: usize,
        counts: &mut BTreeMap<u32, u32>,
        acc: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        let values: Vec<u32> = counts.iter().filter(|(_, &m)| m > 0).map(|(&v, _)| v).collect();
        for v in values {
            *counts.get_mut(&v).unwrap() -= 1;
            acc.push(v);
            rec(remaining - 1, counts, acc, out);
            acc.pop();
            *counts.get_mut(&v).unwrap() += 1;
        }
    }
    let mut out = Vec::new();
    rec(d.len(), &mut counts.clone(), &mut Vec::new(), &mut out);
    out
}

impl VolumePolynomial {
    /// Computes every coefficient of the `(g,n)` volume polynomial.
    pub fn compute(engine: &VolumeEngine, g: u32, n: usize) -> Result<Self, BracketError> {
        if !crate::is_stable(g, n) {
            return Err(BracketError::Unstable { g, n });
        }
        let dim = dimension(g, n) as u32;
        let mut coeffs = BTreeMap::new();
        for d in degree_vectors(n, dim) {
            let bracket = engine.bracket(g, &d)?;
            let mut divisor = Rational::from_integer(1.into());
            for &di in d.iter() {
                divisor *= Rational::from_integer(factorial(2 * di as u64 + 1));
            }
            let coeff = bracket.scale(&(Rational::from_integer(1.into()) / divisor));
            coeffs.insert(d, coeff);
        }
        Ok(VolumePolynomial { g, n, coeffs })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn boundary_count(&self) -> usize {
        self.n
    }

    /// Coefficient at a degree vector (order of entries irrelevant).
    pub fn coefficient(&self, d: &[u32]) -> PiValue {
        let mut key = d.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        self.coeffs.get(&key).cloned().unwrap_or_else(PiValue::zero)
    }

    /// The stored coefficient table, keyed by non-increasing degree vectors.
    pub fn coefficients(&self) -> &BTreeMap<Vec<u32>, PiValue> {
        &self.coeffs
    }

    /// Versioned text form: one `d1,...,dn: <value>` line per degree vector,
    /// sorted lexicographically.
    pub fn export(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# wpvol volume-poly v1").unwrap();
        writeln!(out, "# g={} n={}", self.g, self.n).unwrap();
        for (d, value) in self.coeffs.iter() {
            let key = d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            writeln!(out, "{key}: {value}").unwrap();
        }
        out
    }

    /// Evaluates the polynomial at actual boundary lengths (substituting
    /// half of each length for the stored doubled-length variable).
    pub fn evaluate(&self, lengths: &[Rational]) -> Result<PiValue, ArityError> {
        if lengths.len() != self.n {
            return Err(ArityError { expected: self.n, got: lengths.len() });
        }
        let halves: Vec<Rational> =
            lengths.iter().map(|l| l / Rational::from_integer(2.into())).collect();
        let mut total = PiValue::zero();
        for (d, coeff) in self.coeffs.iter() {
            let mut monomial_sum = Rational::from_integer(0.into());
            for perm in distinct_permutations(d) {
                let mut product = Rational::from_integer(1.into());
                for (x, &e) in halves.iter().zip(perm.iter()) {
                    for _ in 0..2 * e {
                        product *= x;
                    }
                }
                monomial_sum += product;
            }
            total = total + coeff.scale(&monomial_sum);
        }
        Ok(total)
    }
}
