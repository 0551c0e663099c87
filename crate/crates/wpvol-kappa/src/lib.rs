//! Mixed psi-kappa intersection numbers via the Kaufmann-Manin-Zagier
//! expansion, which trades every kappa monomial for a signed combination of
//! extra tau insertions.

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use wpvol_arith::rational::{factorial, Rational};
use wpvol_correlator::{Engine, TauVector};

/// Monomial in the kappa classes: a multiset of indices `j >= 1`, stored as
/// index -> multiplicity with no zero multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KappaMonomial {
    mult: BTreeMap<u32, u32>,
}

impl KappaMonomial {
    /// The empty monomial (the constant 1).
    pub fn empty() -> Self {
        KappaMonomial::default()
    }

    /// Builds from `(index, multiplicity)` pairs.
    ///
    /// # Panics
    ///
    /// Panics on a zero index.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut mult = BTreeMap::new();
        for &(j, m) in pairs {
            assert!(j >= 1, "kappa indices start at 1");
            if m > 0 {
                *mult.entry(j).or_insert(0) += m;
            }
        }
        KappaMonomial { mult }
    }

    /// `kappa_1^k`.
    pub fn kappa1_power(k: u32) -> Self {
        KappaMonomial::from_pairs(&[(1, k)])
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    /// Total degree `|m| = sum j * m(j)`.
    pub fn total_degree(&self) -> u64 {
        self.mult.iter().map(|(&j, &m)| j as u64 * m as u64).sum()
    }

    /// Number of factors `||m|| = sum m(j)`.
    pub fn weight(&self) -> u64 {
        self.mult.values().map(|&m| m as u64).sum()
    }

    pub fn multiplicity(&self, j: u32) -> u32 {
        self.mult.get(&j).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.mult.iter().map(|(&j, &m)| (j, m))
    }

    /// `prod_j m(j)!`.
    pub fn multiplicity_factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &m in self.mult.values() {
            acc *= factorial(m as u64);
        }
        acc
    }

    /// All nonzero sub-monomials (the empty one excluded).
    fn nonzero_submonomials(&self) -> Vec<KappaMonomial> {
        let entries: Vec<(u32, u32)> = self.iter().collect();
        let mut out: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new()];
        for &(j, m) in entries.iter() {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for base in out.iter() {
                for take in 0..=m {
                    let mut b = base.clone();
                    if take > 0 {
                        b.insert(j, take);
                    }
                    next.push(b);
                }
            }
            out = next;
        }
        out.into_iter()
            .filter(|m| !m.is_empty())
            .map(|mult| KappaMonomial { mult })
            .collect()
    }

    fn subtract(&self, part: &KappaMonomial) -> KappaMonomial {
        let mut mult = self.mult.clone();
        for (j, m) in part.iter() {
            let entry = mult.get_mut(&j).expect("part fits inside the monomial");
            assert!(*entry >= m, "part fits inside the monomial");
            *entry -= m;
            if *entry == 0 {
                mult.remove(&j);
            }
        }
        KappaMonomial { mult }
    }
}

impl fmt::Display for KappaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, m) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "kappa{j}")?;
            } else {
                write!(f, "kappa{j}^{m}")?;
            }
        }
        Ok(())
    }
}

/// Multinomial coefficient of a split `m = m_1 + ... + m_p`:
/// `prod_i m(i)! / prod_j m_j(i)!`.
fn split_multinomial(whole: &KappaMonomial, parts: &[KappaMonomial]) -> Rational {
    let mut num = BigInt::one();
    for (_, m) in whole.iter() {
        num *= factorial(m as u64);
    }
    let mut den = BigInt::one();
    for part in parts {
        for (_, m) in part.iter() {
            den *= factorial(m as u64);
        }
    }
    Rational::new(num, den)
}

/// All ordered decompositions of `m` into `p` nonzero kappa monomials,
/// each with its multinomial coefficient.
pub fn decompositions(m: &KappaMonomial, p: usize) -> Vec<(Vec<KappaMonomial>, Rational)> {
    fn rec(remaining: &KappaMonomial, slots: usize, out: &mut Vec<Vec<KappaMonomial>>, acc: &mut Vec<KappaMonomial>) {
        if slots == 0 {
            if remaining.is_empty() {
                out.push(acc.clone());
            }
            return;
        }
        for part in remaining.nonzero_submonomials() {
            acc.push(part.clone());
            rec(&remaining.subtract(&part), slots - 1, out, acc);
            acc.pop();
        }
    }
    let mut tuples = Vec::new();
    rec(m, p, &mut tuples, &mut Vec::new());
    tuples
        .into_iter()
        .map(|parts| {
            let coeff = split_multinomial(m, &parts);
            (parts, coeff)
        })
        .collect()
}

/// One merged term of the KMZ expansion: a signed rational coefficient on a
/// multiset of extra tau insertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmzTerm {
    pub coefficient: Rational,
    pub extra_taus: TauVector,
}

/// Unordered multiset partitions of `m` into nonzero parts, each with its
/// repetition profile `prod (multiplicity of identical parts)!`.
fn multiset_partitions(m: &KappaMonomial) -> Vec<(Vec<KappaMonomial>, BigInt)> {
    fn rec(
        remaining: &KappaMonomial,
        max_part: Option<&KappaMonomial>,
        acc: &mut Vec<KappaMonomial>,
        out: &mut Vec<(Vec<KappaMonomial>, BigInt)>,
    ) {
        if remaining.is_empty() {
            let mut rep = BigInt::one();
            let mut run = 1u64;
            for i in 1..acc.len() {
                if acc[i] == acc[i - 1] {
                    run += 1;
                } else {
                    rep *= factorial(run);
                    run = 1;
                }
            }
            rep *= factorial(run.max(1));
            out.push((acc.clone(), rep));
            return;
        }
        for part in remaining.nonzero_submonomials() {
            if let Some(cap) = max_part {
                if part > *cap {
                    continue;
                }
            }
            let rest = remaining.subtract(&part);
            acc.push(part.clone());
            rec(&rest, Some(&part), acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if m.is_empty() {
        out.push((Vec::new(), BigInt::one()));
        return out;
    }
    rec(m, None, &mut Vec::new(), &mut out);
    out
}

/// KMZ expansion of a kappa monomial as a signed combination of extra tau
/// multisets: summing `coefficient * <prod tau_d prod tau_{extra}>` over
/// the returned terms evaluates `<prod tau_d kappa(m)>`. Memoized globally.
pub fn kmz_expand(m: &KappaMonomial) -> Arc<Vec<KmzTerm>> {
    static MEMO: Lazy<DashMap<KappaMonomial, Arc<Vec<KmzTerm>>>> = Lazy::new(DashMap::new);
    if let Some(hit) = MEMO.get(m) {
        return hit.clone();
    }
    let mut by_taus: BTreeMap<TauVector, Rational> = BTreeMap::new();
    let weight = m.weight();
    for (parts, repetition) in multiset_partitions(m) {
        let p = parts.len() as u64;
        let sign = if (weight - p) % 2 == 0 { 1 } else { -1 };
        let coeff = split_multinomial(m, &parts)
            * Rational::new(BigInt::from(sign), repetition);
        let taus = TauVector::new(
            parts.iter().map(|part| part.total_degree() as u32 + 1).collect(),
        );
        let entry = by_taus.entry(taus).or_insert_with(Rational::zero);
        *entry += coeff;
    }
    let terms: Vec<KmzTerm> = by_taus
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(extra_taus, coefficient)| KmzTerm { coefficient, extra_taus })
        .collect();
    let arc = Arc::new(terms);
    MEMO.insert(m.clone(), arc.clone());
    arc
}

/// `<tau_{d_1} ... tau_{d_n} kappa(m)>_g`: zero unless
/// `sum d_i + |m| = 3g - 3 + n`, otherwise evaluated through the KMZ
/// expansion and the psi correlator engine.
pub fn mixed_correlator(engine: &Engine, g: u32, d: &[u32], m: &KappaMonomial) -> Rational {
    let n = d.len() as i64;
    let total = d.iter().map(|&x| x as i64).sum::<i64>() + m.total_degree() as i64;
    if total != 3 * g as i64 - 3 + n {
        return Rational::zero();
    }
    let mut acc = Rational::zero();
    for term in kmz_expand(m).iter() {
        let mut indices: Vec<u32> = d.to_vec();
        indices.extend_from_slice(term.extra_taus.entries());
        let corr = engine.correlator(g, &indices);
        if corr.is_zero() {
            continue;
        }
        acc += corr * term.coefficient.clone();
    }
    acc
}
