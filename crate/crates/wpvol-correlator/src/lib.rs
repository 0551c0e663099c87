//! Intersection numbers of psi classes on moduli spaces of stable curves.
//!
//! The central entry point is [`Engine::correlator`], which computes
//! `<tau_{d_1} ... tau_{d_n}>_g` by the Dijkgraaf-Verlinde-Verlinde (DVV)
//! recursion with string and dilaton reductions, over a concurrent memo
//! table. [`two_point::two_point_oracle`] provides an independent check for
//! the two-point numbers, deliberately sharing no code with the recursion.

pub mod cache;
pub mod two_point;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use wpvol_arith::rational::{factorial, odd_double_factorial, rat, Rational};

/// Multiset of tau indices, kept sorted in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauVector(Vec<u32>);

impl TauVector {
    pub fn new(mut entries: Vec<u32>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        TauVector(entries)
    }

    pub fn empty() -> Self {
        TauVector(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the indices.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, value: u32) -> bool {
        self.0.contains(&value)
    }

    /// Distinct values with multiplicities, descending by value.
    pub fn counts(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &v in self.0.iter() {
            match out.last_mut() {
                Some((value, mult)) if *value == v => *mult += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    /// New multiset with the given extra entries merged in.
    pub fn with_extra(&self, extra: &[u32]) -> TauVector {
        let mut v = self.0.clone();
        v.extend_from_slice(extra);
        TauVector::new(v)
    }

    /// New multiset with one occurrence of `value` removed.
    ///
    /// # Panics
    ///
    /// Panics if `value` is absent.
    pub fn remove_one(&self, value: u32) -> TauVector {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&x| x == value).expect("value present in multiset");
        v.remove(pos);
        TauVector(v)
    }

    /// New multiset with one occurrence of `from` replaced by `to`.
    pub fn replace_one(&self, from: u32, to: u32) -> TauVector {
        self.remove_one(from).with_extra(&[to])
    }

    /// All sub-multisets, each with its complement and the number of ways
    /// to select it from labeled points: the product over values of
    /// `C(multiplicity, taken)`.
    pub fn sub_multisets(&self) -> Vec<(TauVector, TauVector, BigInt)> {
        let counts = self.counts();
        let mut out: Vec<(Vec<u32>, Vec<u32>, BigInt)> = vec![(Vec::new(), Vec::new(), BigInt::one())];
        for &(value, mult) in counts.iter() {
            let mut next = Vec::with_capacity(out.len() * (mult as usize + 1));
            for (sub, comp, weight) in out.iter() {
                for take in 0..=mult {
                    let mut s = sub.clone();
                    let mut c = comp.clone();
                    s.extend(std::iter::repeat(value).take(take as usize));
                    c.extend(std::iter::repeat(value).take((mult - take) as usize));
                    let w = weight * wpvol_arith::rational::binomial(mult as u64, take as u64);
                    next.push((s, c, w));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(s, c, w)| (TauVector(s), TauVector(c), w))
            .collect()
    }
}

impl fmt::Display for TauVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Memo key: genus plus canonical index multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorKey {
    pub g: u32,
    pub taus: TauVector,
}

/// Closed form for the one-point numbers `<tau_{3g-2}>_g = 1 / (24^g g!)`.
///
/// Kept outside the engine so it can serve as an oracle against the
/// recursion; the engine never consults it.
///
/// # Panics
///
/// Panics if `g == 0`.
pub fn one_point_closed(g: u32) -> Rational {
    assert!(g >= 1, "one-point numbers need g >= 1");
    let den = BigInt::from(24).pow(g) * factorial(g as u64);
    Rational::new(BigInt::one(), den)
}

/// Memoizing evaluator for psi intersection numbers.
pub struct Engine {
    memo: DashMap<CorrelatorKey, Rational>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    /// Fresh engine, seeded with the base value `<tau_1>_1 = 1/24`.
    pub fn new() -> Self {
        let memo = DashMap::new();
        memo.insert(CorrelatorKey { g: 1, taus: TauVector::new(vec![1]) }, rat(1, 24));
        Engine { memo }
    }

    /// `<tau_{d_1} ... tau_{d_n}>_g` for an arbitrary (unsorted) index
    /// list. Returns zero for unstable `(g, n)` and whenever the dimension
    /// constraint `sum d_i = 3g - 3 + n` fails.
    pub fn correlator(&self, g: u32, indices: &[u32]) -> Rational {
        self.eval(g, TauVector::new(indices.to_vec()))
    }

    /// Correlator scaled by `prod (2 d_i + 1)!!`.
    pub fn normalized_correlator(&self, g: u32, indices: &[u32]) -> Rational {
        let mut scale = BigInt::one();
        for &d in indices {
            scale *= odd_double_factorial(2 * d as i64 + 1);
        }
        self.correlator(g, indices) * Rational::from_integer(scale)
    }

    /// Number of memoized values.
    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Snapshot of all memoized values in canonical key order.
    pub fn entries_sorted(&self) -> Vec<(CorrelatorKey, Rational)> {
        let mut out: Vec<(CorrelatorKey, Rational)> = self
            .memo
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect();
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub(crate) fn memo(&self) -> &DashMap<CorrelatorKey, Rational> {
        &self.memo
    }

    fn eval(&self, g: u32, taus: TauVector) -> Rational {
        let n = taus.len() as i64;
        if 2 * (g as i64) - 2 + n <= 0 {
            return Rational::zero();
        }
        if taus.total() as i64 != 3 * (g as i64) - 3 + n {
            return Rational::zero();
        }
        let key = CorrelatorKey { g, taus };
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let value = self.compute(&key);
        self.memo.insert(key, value.clone());
        value
    }

    fn compute(&self, key: &CorrelatorKey) -> Rational {
        let g = key.g;
        let taus = &key.taus;
        if g == 0 {
            return genus_zero(taus);
        }
        if taus.contains(0) {
            return self.string_step(g, taus);
        }
        if taus.contains(1) {
            return self.dilaton_step(g, taus);
        }
        self.dvv_step(g, taus)
    }
}

/// Genus zero closed form `(n-3)! / prod d_i!`.
fn genus_zero(taus: &TauVector) -> Rational {
    let n = taus.len() as u64;
    let mut den = BigInt::one();
    for &d in taus.entries() {
        den *= factorial(d as u64);
    }
    Rational::new(factorial(n - 3), den)
}

impl Engine {
    /// String equation: remove one `tau_0` and lower each remaining index.
    fn string_step(&self, g: u32, taus: &TauVector) -> Rational {
        let rest = taus.remove_one(0);
        let mut acc = Rational::zero();
        for (value, mult) in rest.counts() {
            if value == 0 {
                continue;
            }
            let child = rest.replace_one(value, value - 1);
            acc += self.eval(g, child) * Rational::from_integer(BigInt::from(mult));
        }
        acc
    }

    /// Dilaton equation: remove one `tau_1`, scaling by `2g - 2 + (n - 1)`.
    fn dilaton_step(&self, g: u32, taus: &TauVector) -> Rational {
        let rest = taus.remove_one(1);
        let factor = 2 * (g as i64) - 2 + rest.len() as i64;
        self.eval(g, rest) * rat(factor, 1)
    }

    /// One step of the DVV recursion on the largest index.
    fn dvv_step(&self, g: u32, taus: &TauVector) -> Rational {
        let d1 = taus.entries()[0];
        let rest = taus.remove_one(d1);
        let mut acc = Rational::zero();

        // Merge the distinguished index into each remaining insertion point.
        for (value, mult) in rest.counts() {
            let num = odd_double_factorial(2 * (d1 + value) as i64 - 1) * BigInt::from(mult);
            let den = odd_double_factorial(2 * value as i64 - 1);
            let child = rest.replace_one(value, value + d1 - 1);
            acc += self.eval(g, child) * Rational::new(num, den);
        }

        if d1 >= 2 {
            for r in 0..=(d1 - 2) {
                let s = d1 - 2 - r;
                let base = Rational::new(
                    odd_double_factorial(2 * r as i64 + 1) * odd_double_factorial(2 * s as i64 + 1),
                    BigInt::from(2),
                );

                // Non-separating: drop the genus, add two new points.
                acc += self.eval(g - 1, rest.with_extra(&[r, s])) * base.clone();

                // Separating: split the remaining points and the genus. The
                // dimension constraint pins the genus of the first factor,
                // so no genus loop is needed.
                for (sub, comp, weight) in rest.sub_multisets() {
                    let t = r as i64 + sub.total() as i64 + 2 - sub.len() as i64;
                    if t % 3 != 0 || t < 0 {
                        continue;
                    }
                    let g1 = (t / 3) as u32;
                    if g1 > g {
                        continue;
                    }
                    let f1 = self.eval(g1, sub.with_extra(&[r]));
                    if f1.is_zero() {
                        continue;
                    }
                    let f2 = self.eval(g - g1, comp.with_extra(&[s]));
                    if f2.is_zero() {
                        continue;
                    }
                    acc += f1 * f2 * base.clone() * Rational::from_integer(weight);
                }
            }
        }

        acc / Rational::from_integer(odd_double_factorial(2 * d1 as i64 + 1))
    }

    /// Checks the KdV relation obtained by adding one `tau_0` insertion:
    /// `(2g + n - 1) <tau_0 prod tau_{d_j}>_g` against the genus-lowering
    /// and separating contributions with four and two extra `tau_0`s.
    pub fn kdv_check(&self, g: u32, d: &[u32]) -> bool {
        let taus = TauVector::new(d.to_vec());
        let n = taus.len() as i64;
        let lhs = self.eval(g, taus.with_extra(&[0])) * rat(2 * g as i64 + n - 1, 1);
        let mut rhs = Rational::zero();
        if g >= 1 {
            rhs += self.eval(g - 1, taus.with_extra(&[0, 0, 0, 0])) * rat(1, 12);
        }
        let mut split = Rational::zero();
        for (sub, comp, weight) in taus.sub_multisets() {
            let t = sub.total() as i64 + 1 - sub.len() as i64;
            if t % 3 != 0 || t < 0 {
                continue;
            }
            let g1 = (t / 3) as u32;
            if g1 > g {
                continue;
            }
            let f1 = self.eval(g1, sub.with_extra(&[0, 0]));
            if f1.is_zero() {
                continue;
            }
            let f2 = self.eval(g - g1, comp.with_extra(&[0, 0]));
            split += f1 * f2 * Rational::from_integer(weight);
        }
        rhs += split * rat(1, 2);
        lhs == rhs
    }
}
