//! Weil-Petersson volumes of moduli spaces of bordered hyperbolic surfaces.
//!
//! The central object is the normalized coefficient bracket
//! `[tau_{d_1} ... tau_{d_n}]_{g,n}`, which packages the coefficient of the
//! volume polynomial at a degree vector together with its power of `pi^2`.
//! Two independent evaluation routes are provided: the definition route,
//! which reduces a bracket to a mixed psi-kappa intersection number, and the
//! boundary recursion route, which shrinks one boundary component at a time
//! using the coefficients of `x / (2 sinh(x/2))`. Agreement of the two
//! routes is a strong end-to-end check and is exercised by the test suites.

mod poly;
pub mod identities;

pub use poly::{ArityError, VolumePolynomial};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::Arc;
use thiserror::Error;
use wpvol_arith::bernoulli::sinh_coeff;
use wpvol_arith::rational::{factorial, odd_double_factorial, rat_int, Rational};
use wpvol_arith::PiValue;
use wpvol_correlator::{Engine, TauVector};
use wpvol_kappa::{mixed_correlator, KappaMonomial};

/// Why a bracket request was rejected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    /// `2g - 2 + n <= 0`: no stable surface of this type exists.
    #[error("no stable surface with genus {g} and {n} boundary components")]
    Unstable { g: u32, n: usize },
    /// The index total exceeds the complex dimension `3g - 3 + n`.
    #[error("index total {total} exceeds 3g-3+n = {dim} for genus {g} with {n} boundary components")]
    ExcessDegree { g: u32, n: usize, total: u64, dim: i64 },
    /// The boundary recursion needs a boundary to shrink.
    #[error("the boundary recursion needs at least one boundary component")]
    NoBoundary,
}

/// Memo key: genus plus the full (possibly zero-padded) index multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct BracketKey {
    g: u32,
    taus: TauVector,
}

pub(crate) fn dimension(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

pub(crate) fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// A bracket is identically zero (for recursion purposes) when its surface
/// type is unstable or its index total overshoots the dimension.
fn vanishes(g: u32, taus: &TauVector) -> bool {
    !is_stable(g, taus.len()) || (taus.total() as i64) > dimension(g, taus.len())
}

/// Evaluator for brackets and volume polynomials, with separate memo tables
/// for the definition route and the recursion route.
pub struct VolumeEngine {
    corr: Arc<Engine>,
    def_memo: DashMap<BracketKey, PiValue>,
    rec_memo: DashMap<BracketKey, PiValue>,
}

impl Default for VolumeEngine {
    fn default() -> Self {
        VolumeEngine::new()
    }
}

impl VolumeEngine {
    pub fn new() -> Self {
        VolumeEngine::with_correlator(Arc::new(Engine::new()))
    }

    /// Builds on an existing correlator engine (for example one whose memo
    /// was loaded from a cache file).
    pub fn with_correlator(corr: Arc<Engine>) -> Self {
        VolumeEngine { corr, def_memo: DashMap::new(), rec_memo: DashMap::new() }
    }

    /// The underlying psi correlator engine.
    pub fn correlator_engine(&self) -> &Arc<Engine> {
        &self.corr
    }

    fn admit(g: u32, taus: &TauVector) -> Result<u32, BracketError> {
        let n = taus.len();
        if !is_stable(g, n) {
            return Err(BracketError::Unstable { g, n });
        }
        let dim = dimension(g, n);
        let total = taus.total();
        if (total as i64) > dim {
            return Err(BracketError::ExcessDegree { g, n, total, dim });
        }
        Ok((dim - total as i64) as u32)
    }

    /// `[tau_{d_1} ... tau_{d_n}]_{g,n}` by the definition route: the
    /// bracket equals
    /// `prod (2d_i+1)!! * 2^(2|d|) * (2 pi^2)^(d0) / d0! * <prod tau_d kappa_1^(d0)>_g`
    /// with `d0 = 3g - 3 + n - |d|`. The empty index list (`n = 0`) is
    /// allowed and yields the constant total volume for `g >= 2`.
    ///
    /// # Invariants
    ///
    /// The result is a single term `c * pi^(2 d0)` with `c > 0`.
    pub fn bracket(&self, g: u32, indices: &[u32]) -> Result<PiValue, BracketError> {
        let taus = TauVector::new(indices.to_vec());
        let d0 = Self::admit(g, &taus)?;
        Ok(self.def_eval(g, taus, d0))
    }

    fn def_eval(&self, g: u32, taus: TauVector, d0: u32) -> PiValue {
        let key = BracketKey { g, taus };
        if let Some(hit) = self.def_memo.get(&key) {
            return hit.clone();
        }
        let mixed = mixed_correlator(
            &self.corr,
            g,
            key.taus.entries(),
            &KappaMonomial::kappa1_power(d0),
        );
        let value = if mixed.is_zero() {
            PiValue::zero()
        } else {
            let mut scalar = mixed;
            for &d in key.taus.entries() {
                scalar *= Rational::from_integer(odd_double_factorial(2 * d as i64 + 1));
            }
            let two_pow = BigInt::from(2).pow(2 * key.taus.total() as u32 + d0);
            scalar *= Rational::from_integer(two_pow);
            scalar /= Rational::from_integer(factorial(d0 as u64));
            PiValue::term(scalar, d0)
        };
        self.def_memo.insert(key, value.clone());
        value
    }

    /// `[tau_{d_1} ... tau_{d_n}]_{g,n}` by the boundary recursion route,
    /// which removes the boundary carrying the largest index. Base cases:
    /// `[tau_0^3]_{0,3} = 1`, and every `(g,n) = (1,1)` bracket delegates to
    /// the definition route (the recursion cannot bootstrap the one-holed
    /// torus from unstable data).
    pub fn bracket_by_recursion(&self, g: u32, indices: &[u32]) -> Result<PiValue, BracketError> {
        let taus = TauVector::new(indices.to_vec());
        if taus.is_empty() {
            return Err(BracketError::NoBoundary);
        }
        Self::admit(g, &taus)?;
        Ok(self.rec_eval(g, taus))
    }

    fn rec_or_zero(&self, g: u32, taus: TauVector) -> PiValue {
        if vanishes(g, &taus) {
            return PiValue::zero();
        }
        self.rec_eval(g, taus)
    }

    fn rec_eval(&self, g: u32, taus: TauVector) -> PiValue {
        let n = taus.len();
        if (g, n) == (0, 3) {
            return PiValue::one();
        }
        let d0 = (dimension(g, n) - taus.total() as i64) as u32;
        if (g, n) == (1, 1) {
            return self.def_eval(g, taus, d0);
        }
        let key = BracketKey { g, taus };
        if let Some(hit) = self.rec_memo.get(&key) {
            return hit.clone();
        }
        let taus = &key.taus;
        let d1 = taus.entries()[0];
        let rest = TauVector::new(taus.entries()[1..].to_vec());

        // Shrink the distinguished boundary into another boundary.
        let mut a_sum = PiValue::zero();
        for (v, mult) in rest.counts() {
            let leg_factor = rat_int((2 * v as i64 + 1) * mult as i64);
            let reduced = rest.remove_one(v);
            for l in 0..=d0 {
                let idx = d1 as i64 + v as i64 + l as i64 - 1;
                if idx < 0 {
                    continue;
                }
                let child = self.rec_or_zero(g, reduced.with_extra(&[idx as u32]));
                if child.is_zero() {
                    continue;
                }
                a_sum = a_sum + (child * &sinh_coeff(l)).scale(&leg_factor);
            }
        }

        // Cut a handle off at the distinguished boundary.
        let mut b_sum = PiValue::zero();
        if g >= 1 {
            for l in 0..=d0 {
                let s = l as i64 + d1 as i64 - 2;
                if s < 0 {
                    continue;
                }
                let mut inner = PiValue::zero();
                for k1 in 0..=s {
                    let k2 = s - k1;
                    inner = inner + self.rec_or_zero(g - 1, rest.with_extra(&[k1 as u32, k2 as u32]));
                }
                if !inner.is_zero() {
                    b_sum = b_sum + inner * &sinh_coeff(l);
                }
            }
        }

        // Split the surface at the distinguished boundary.
        let mut c_sum = PiValue::zero();
        for (i_part, j_part, weight) in rest.sub_multisets() {
            let w = Rational::from_integer(weight);
            let mut split_sum = PiValue::zero();
            for g1 in 0..=g {
                let g2 = g - g1;
                for l in 0..=d0 {
                    let s = l as i64 + d1 as i64 - 2;
                    if s < 0 {
                        continue;
                    }
                    let mut inner = PiValue::zero();
                    for k1 in 0..=s {
                        let k2 = s - k1;
                        let t1 = i_part.with_extra(&[k1 as u32]);
                        let t2 = j_part.with_extra(&[k2 as u32]);
                        // Check both factors before recursing into either:
                        // a genus-g factor carrying all boundaries would
                        // reproduce the parent bracket, and only its partner
                        // factor being zero rules that term out.
                        if vanishes(g1, &t1) || vanishes(g2, &t2) {
                            continue;
                        }
                        inner = inner + self.rec_eval(g1, t1) * &self.rec_eval(g2, t2);
                    }
                    if !inner.is_zero() {
                        split_sum = split_sum + inner * &sinh_coeff(l);
                    }
                }
            }
            c_sum = c_sum + split_sum.scale(&w);
        }

        let result = a_sum.scale(&rat_int(8)) + b_sum.scale(&rat_int(16)) + c_sum.scale(&rat_int(16));
        debug_assert_eq!(result, PiValue::term(result.coeff(d0), d0));
        self.rec_memo.insert(key.clone(), result.clone());
        result
    }

    /// Total Weil-Petersson volume `V_{g,n}`: the all-zero bracket.
    pub fn volume(&self, g: u32, n: usize) -> Result<PiValue, BracketError> {
        self.bracket(g, &vec![0; n])
    }

    /// The full volume polynomial of the `(g,n)` moduli space.
    pub fn volume_polynomial(&self, g: u32, n: usize) -> Result<VolumePolynomial, BracketError> {
        VolumePolynomial::compute(self, g, n)
    }

    /// Coefficient `a_{g,k}` of the one-boundary volume polynomial, computed
    /// as `[tau_k]_{g,1}` and cross-checked against the closed prefactor
    /// form `(2k+1)!! * 2^(3g-2+k) * pi^(6g-4-2k) / (3g-2-k)! * <tau_k kappa_1^(3g-2-k)>_g`.
    ///
    /// # Panics
    ///
    /// Panics if the two forms disagree.
    pub fn one_point_coeff(&self, g: u32, k: u32) -> Result<PiValue, BracketError> {
        let via_bracket = self.bracket(g, &[k])?;
        let d0 = 3 * g - 2 - k;
        let mixed = mixed_correlator(&self.corr, g, &[k], &KappaMonomial::kappa1_power(d0));
        let scalar = Rational::from_integer(odd_double_factorial(2 * k as i64 + 1))
            * Rational::from_integer(BigInt::from(2).pow(3 * g - 2 + k))
            / Rational::from_integer(factorial(d0 as u64))
            * mixed;
        let display_form = PiValue::term(scalar, d0);
        assert_eq!(
            via_bracket, display_form,
            "one-boundary coefficient: bracket and prefactor forms disagree at g={g}, k={k}"
        );
        Ok(via_bracket)
    }

    /// Number of memoized brackets on the definition route.
    pub fn def_memo_len(&self) -> usize {
        self.def_memo.len()
    }

    /// Number of memoized brackets on the recursion route.
    pub fn rec_memo_len(&self) -> usize {
        self.rec_memo.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wpvol_arith::rational::rat;

    #[test]
    fn stability_and_dimension_guards() {
        let eng = VolumeEngine::new();
        assert_eq!(eng.bracket(0, &[0, 0]), Err(BracketError::Unstable { g: 0, n: 2 }));
        assert_eq!(eng.bracket(1, &[]), Err(BracketError::Unstable { g: 1, n: 0 }));
        assert_eq!(
            eng.bracket(1, &[2]),
            Err(BracketError::ExcessDegree { g: 1, n: 1, total: 2, dim: 1 })
        );
        assert_eq!(eng.bracket_by_recursion(2, &[]), Err(BracketError::NoBoundary));
    }

    #[test]
    fn definition_route_base_values() {
        let eng = VolumeEngine::new();
        assert_eq!(eng.bracket(0, &[0, 0, 0]).unwrap(), PiValue::one());
        assert_eq!(eng.bracket(1, &[0]).unwrap(), PiValue::term(rat(1, 12), 1));
        assert_eq!(eng.bracket(1, &[1]).unwrap(), PiValue::from_rational(rat(1, 2)));
    }

    #[test]
    fn two_boundary_torus_values() {
        let eng = VolumeEngine::new();
        assert_eq!(eng.bracket(1, &[0, 0]).unwrap(), PiValue::term(rat(1, 4), 2));
        assert_eq!(eng.bracket(1, &[1, 0]).unwrap(), PiValue::term(rat(2, 1), 1));
        assert_eq!(eng.bracket(1, &[2, 0]).unwrap(), PiValue::from_rational(rat(10, 1)));
        assert_eq!(eng.bracket(1, &[1, 1]).unwrap(), PiValue::from_rational(rat(6, 1)));
    }

    #[test]
    fn recursion_route_matches_on_small_cases() {
        let eng = VolumeEngine::new();
        for (g, d) in [
            (0u32, vec![0u32, 0, 0]),
            (0, vec![0, 0, 0, 0]),
            (0, vec![1, 0, 0, 0]),
            (1, vec![0]),
            (1, vec![1]),
            (1, vec![0, 0]),
            (1, vec![1, 0]),
            (1, vec![2, 0]),
            (1, vec![1, 1]),
            (2, vec![0]),
            (2, vec![0, 0]),
        ] {
            let def = eng.bracket(g, &d).unwrap();
            let rec = eng.bracket_by_recursion(g, &d).unwrap();
            assert_eq!(def, rec, "route mismatch at g={g}, d={d:?}");
        }
    }
}
