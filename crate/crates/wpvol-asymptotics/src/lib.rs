//! Large-genus behavior of psi and kappa intersection numbers.
//!
//! The central quantity is the normalized ratio
//! `C(d; g) = prod (2d_i+1)!! * <tau_{d_1}...tau_{d_n} tau_{3g-2+n-|d|}>_g
//! / ((6g)^{|d|} <tau_{3g-2}>_g)`, which tends to 1 as the genus grows.
//! Scaled by `(6g)^{|d|}` it becomes an integer-valued polynomial `P_d(g)`
//! computed here two independent ways: by a boundary-type polynomial
//! recursion and by Lagrange interpolation of exact correlator ratios. On top of the
//! polynomials sit the coefficient-ratio rational functions for one-boundary
//! volume coefficients, their expansions in inverse powers of the genus, the
//! tabulated convergence diagnostic `Q_{k,g}`, and the limit values for
//! higher kappa classes.

use dashmap::DashMap;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::sync::Arc;
use thiserror::Error;
use wpvol_arith::rational::{
    decimal_string_trunc, factorial, odd_double_factorial, rat, rat_int, rat_pow,
};
use wpvol_arith::{expand_inverse_g, GPoly, GRationalFn, Rational};
use wpvol_correlator::{Engine, TauVector};
use wpvol_kappa::{kmz_expand, KappaMonomial};

/// Errors from admissibility and evaluation guards.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsymptoticsError {
    /// The trailing tau index `3g-2+n-total` would be negative.
    #[error("no trailing tau slot at genus {g}: need 3g-2+{n} >= {total}")]
    Inadmissible { g: u32, n: usize, total: u64 },
    /// Ratio quantities are indexed by genus at least one.
    #[error("normalized ratios are indexed by genus >= 1, got {g}")]
    GenusTooSmall { g: u32 },
    /// The first-order closed form requires every index to be at least two.
    #[error("first-order closed form needs every index >= 2, found {value}")]
    EntryTooSmall { value: u32 },
    /// `k` exceeds the coefficient range of a genus-`g` one-boundary volume.
    #[error("k = {k} exceeds the coefficient range 0..=3g-2 at genus {g}")]
    KExceedsRange { k: u32, g: u32 },
    /// Evaluation hit a pole or a vanishing truncated denominator.
    #[error("division by zero evaluating the k = {k} diagnostic at genus {g}")]
    DivisionByZero { k: u32, g: u32 },
}

/// Exact value of the normalized correlator ratio at one genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRatio {
    pub d: TauVector,
    pub g: u32,
    pub value: Rational,
}

/// Polynomial form of the scaled ratio `(6g)^{|d|} C(d; g)`.
///
/// # Invariants
///
/// The polynomial has degree `|d|`, leading coefficient `6^{|d|}`, and takes
/// an integer value at every integer genus. Its coefficients are integers
/// for most keys; starting at `|d| = 6` a few keys acquire coefficients
/// with denominator two while staying integer-valued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPoly {
    pub d: TauVector,
    pub poly: Arc<GPoly>,
}

/// Rational function of the genus carried by the one-boundary volume
/// coefficient ratio for one value of `k`.
///
/// # Invariants
///
/// `a_{g,3g-2-k} / (g^k a_{g,3g-2}) = (pi^{2k} / (5^k k!)) * func(g)` for
/// every genus with `3g-2-k >= 0`, and `func(g) -> 1` as `g -> infinity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioFunction {
    pub k: u32,
    pub func: GRationalFn,
}

static CORR: Lazy<Engine> = Lazy::new(Engine::new);
static P_MEMO: Lazy<DashMap<Vec<u32>, Arc<GPoly>>> = Lazy::new(DashMap::new);
static RATIO_MEMO: Lazy<DashMap<u32, Arc<RatioFunction>>> = Lazy::new(DashMap::new);

fn shared_engine() -> &'static Engine {
    &CORR
}

/// `prod (2d_i+1)!! * <tau_d tau_{3g-2+n-|d|}>_g / ((6g)^{|d|} <tau_{3g-2}>_g)`.
///
/// Requires `g >= 1` and a nonnegative trailing index `3g-2+n-|d|`.
pub fn c_value(d: &TauVector, g: u32) -> Result<Rational, AsymptoticsError> {
    if g < 1 {
        return Err(AsymptoticsError::GenusTooSmall { g });
    }
    let n = d.len();
    let total = d.total();
    let slot = 3 * i64::from(g) - 2 + n as i64 - total as i64;
    if slot < 0 {
        return Err(AsymptoticsError::Inadmissible { g, n, total });
    }
    let engine = shared_engine();
    let mut taus = d.entries().to_vec();
    taus.push(slot as u32);
    let numer = engine.correlator(g, &taus);
    let denom = engine.correlator(g, &[3 * g - 2]);
    let mut value = numer / denom;
    for &di in d.entries() {
        value *= Rational::from_integer(odd_double_factorial(2 * i64::from(di) + 1));
    }
    Ok(value / rat_pow(&rat_int(6 * i64::from(g)), total as u32))
}

/// [`c_value`] packaged with its inputs.
pub fn c_ratio(d: &TauVector, g: u32) -> Result<CRatio, AsymptoticsError> {
    Ok(CRatio { d: d.clone(), g, value: c_value(d, g)? })
}

/// Distinct values of a sorted key with multiplicities, largest first.
fn value_counts(key: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &v in key {
        match out.last_mut() {
            Some((last, mult)) if *last == v => *mult += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Merged key, re-sorted non-increasing.
fn sorted_with(base: &[u32], extra: &[u32]) -> Vec<u32> {
    let mut out = base.to_vec();
    out.extend_from_slice(extra);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Key with one copy of `v` replaced by `replacement`, re-sorted.
fn replace_one(key: &[u32], v: u32, replacement: u32) -> Vec<u32> {
    let mut out = key.to_vec();
    let pos = out.iter().position(|&x| x == v).expect("value present in key");
    out[pos] = replacement;
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn p_poly_cached(key: &[u32]) -> Arc<GPoly> {
    if let Some(hit) = P_MEMO.get(key) {
        return hit.value().clone();
    }
    let poly = compute_p(key);
    P_MEMO.entry(key.to_vec()).or_insert_with(|| Arc::new(poly)).value().clone()
}

/// Polynomial recursion for `P_d(g)`, on keys sorted non-increasing.
///
/// Keys containing 0 or 1 are first reduced by the string and dilaton
/// relations so the boundary-type recursion only ever sees indices >= 2;
/// every child key strictly decreases `|d| + n`, so the recursion
/// terminates.
fn compute_p(key: &[u32]) -> GPoly {
    let n = key.len();
    if key.iter().all(|&v| v == 0) {
        return GPoly::one();
    }
    if *key.last().unwrap() == 0 {
        // String reduction: drop one zero index, raise each survivor once.
        let rest = &key[..n - 1];
        let mut acc = (*p_poly_cached(rest)).clone();
        for (v, mult) in value_counts(rest) {
            if v == 0 {
                continue;
            }
            let child = replace_one(rest, v, v - 1);
            let scale = rat_int((2 * i64::from(v) + 1) * i64::from(mult));
            acc = &acc + &p_poly_cached(&child).scale(&scale);
        }
        return acc;
    }
    if *key.last().unwrap() == 1 {
        // Dilaton reduction: drop one index equal to one.
        let rest = &key[..n - 1];
        let factor = GPoly::from_int_coeffs(&[3 * (n as i64 - 2), 6]);
        return &factor * &p_poly_cached(rest);
    }

    // All indices >= 2: recursion on the largest index d1.
    let d1 = key[0];
    let rest = &key[1..];
    let total: i64 = key.iter().map(|&v| i64::from(v)).sum();
    let mut acc = GPoly::zero();

    // Merge terms: d1 combines with one of the other indices.
    for (v, mult) in value_counts(rest) {
        let child = replace_one(rest, v, v + d1 - 1);
        let scale = rat_int((2 * i64::from(v) + 1) * i64::from(mult));
        acc = &acc + &p_poly_cached(&child).scale(&scale);
    }

    // Plain removal of d1 against a product of linear factors.
    let mut prod = (*p_poly_cached(rest)).clone();
    for j in 1..=i64::from(d1) {
        prod = &prod * &GPoly::from_int_coeffs(&[2 * n as i64 - 2 * total + 2 * j - 5, 6]);
    }
    acc = &acc + &prod;

    // Genus-lowering term, evaluated at g-1 and scaled by 12g.
    let mut lowered = GPoly::zero();
    for r in 0..=d1 - 2 {
        let s = d1 - 2 - r;
        lowered = &lowered + &p_poly_cached(&sorted_with(rest, &[r, s]));
    }
    acc = &acc + &(&lowered.shift(1) * &GPoly::from_int_coeffs(&[0, 12]));

    // Splitting term: one side becomes a closed correlator of genus g',
    // fixed by its dimension constraint, weighted by double factorials.
    let rest_tv = TauVector::new(rest.to_vec());
    let splits = rest_tv.sub_multisets();
    for r in 0..=d1 - 2 {
        let s = d1 - 2 - r;
        for (carried, kept, ways) in &splits {
            let numer =
                i64::from(r) + carried.total() as i64 + 2 - carried.len() as i64;
            if numer % 3 != 0 {
                continue;
            }
            let gp = numer / 3;
            debug_assert!(gp >= 1, "indices >= 2 force a positive split genus");
            let mut taus = carried.entries().to_vec();
            taus.push(r);
            let corr = shared_engine().correlator(gp as u32, &taus);
            if corr.is_zero() {
                continue;
            }
            let mut scalar = corr
                * Rational::from_integer(ways.clone())
                * rat_pow(&rat_int(24), gp as u32)
                * Rational::from_integer(odd_double_factorial(2 * i64::from(r) + 1));
            for &di in carried.entries() {
                scalar *= Rational::from_integer(odd_double_factorial(2 * i64::from(di) + 1));
            }
            let mut falling = GPoly::one();
            for t in 0..gp {
                falling = &falling * &GPoly::from_int_coeffs(&[-t, 1]);
            }
            let child = p_poly_cached(&sorted_with(kept.entries(), &[s])).shift(gp);
            acc = &acc + &(&child * &falling).scale(&scalar);
        }
    }
    acc
}

/// `P_d(g) = (6g)^{|d|} C(d; g)` by the polynomial recursion, memoized.
pub fn p_poly(d: &TauVector) -> PPoly {
    PPoly { d: d.clone(), poly: p_poly_cached(d.entries()) }
}

/// `P_d(g)` by Lagrange interpolation of exact correlator ratios.
///
/// Samples `|d| + 1` consecutive genera starting from the smallest genus at
/// which the trailing tau index is defined, and returns the unique
/// interpolating polynomial of degree at most `|d|`. Independent of the
/// recursion in [`p_poly`].
pub fn p_poly_oracle(d: &TauVector) -> PPoly {
    let n = d.len() as i64;
    let total = d.total() as i64;
    let g0 = std::cmp::max(1, (total + 2 - n + 2).div_euclid(3));
    let mut points = Vec::with_capacity(total as usize + 1);
    for i in 0..=total {
        let g = g0 + i;
        let c = c_value(d, g as u32).expect("sample genus is admissible by construction");
        points.push((g, c * rat_pow(&rat_int(6 * g), total as u32)));
    }
    PPoly { d: d.clone(), poly: Arc::new(lagrange(&points)) }
}

fn lagrange(points: &[(i64, Rational)]) -> GPoly {
    let mut acc = GPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = GPoly::one();
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &GPoly::from_int_coeffs(&[-xj, 1]);
            denom *= rat_int(xi - xj);
        }
        acc = &acc + &basis.scale(&(yi / &denom));
    }
    acc
}

/// Closed form of the first-order coefficient in the `1/g` expansion of
/// `C(d; g)`: `-|d|^2/6 + (n-1)|d|/3 + n^2/12 - 5n/12`.
///
/// Requires every index to be at least two.
pub fn c1_closed(d: &TauVector) -> Result<Rational, AsymptoticsError> {
    if let Some(&v) = d.entries().iter().find(|&&v| v < 2) {
        return Err(AsymptoticsError::EntryTooSmall { value: v });
    }
    let n = d.len() as i64;
    let t = d.total() as i64;
    Ok(rat(-t * t, 6) + rat((n - 1) * t, 3) + rat(n * n, 12) - rat(5 * n, 12))
}

/// The rational function `func` with
/// `a_{g,3g-2-k} / (g^k a_{g,3g-2}) = (pi^{2k} / (5^k k!)) * func(g)`.
///
/// Assembled by expanding the `k`-th power of the first kappa class into
/// extra tau insertions and summing the matching `P` polynomials against
/// `2^k g^k prod_{j=1..k} (6g-2j-1)`.
///
/// # Panics
///
/// Panics if `k = 0`; the `k = 0` ratio is identically one.
pub fn ratio_fn(k: u32) -> Arc<RatioFunction> {
    assert!(k >= 1, "the coefficient-ratio function needs k >= 1");
    if let Some(hit) = RATIO_MEMO.get(&k) {
        return hit.value().clone();
    }
    let terms = kmz_expand(&KappaMonomial::kappa1_power(k));
    let mut numer = GPoly::zero();
    for term in terms.iter() {
        let mut c = term.coefficient.clone();
        for &t in term.extra_taus.entries() {
            c /= Rational::from_integer(odd_double_factorial(2 * i64::from(t) + 1));
        }
        numer = &numer + &p_poly_cached(term.extra_taus.entries()).scale(&c);
    }
    numer = numer.scale(&rat_pow(&rat_int(5), k));
    let mut denom = GPoly::monomial(rat_pow(&rat_int(2), k), k as usize);
    for j in 1..=i64::from(k) {
        denom = &denom * &GPoly::from_int_coeffs(&[-(2 * j + 1), 6]);
    }
    let built = RatioFunction { k, func: GRationalFn::new(numer, denom) };
    RATIO_MEMO.entry(k).or_insert_with(|| Arc::new(built)).value().clone()
}

/// Expansion coefficients `[1, b_{1,k}, ..., b_{order,k}]` of
/// [`ratio_fn`]`(k)` in inverse powers of the genus.
pub fn b_coeffs(k: u32, order: usize) -> Vec<Rational> {
    expand_inverse_g(&ratio_fn(k).func, order)
        .expect("numerator and denominator have equal degree 2k")
        .coefficients
}

/// Exact convergence diagnostic `Q_{k,g}`: the ratio function at `g`
/// divided by its first-order truncation `1 + b_{1,k}/g`.
pub fn q_value(k: u32, g: u32) -> Result<Rational, AsymptoticsError> {
    assert!(k >= 1, "the convergence diagnostic needs k >= 1");
    if 3 * i64::from(g) - 2 - i64::from(k) < 0 {
        return Err(AsymptoticsError::KExceedsRange { k, g });
    }
    let rf = ratio_fn(k);
    let value = rf
        .func
        .eval_int(i64::from(g))
        .ok_or(AsymptoticsError::DivisionByZero { k, g })?;
    let truncated = Rational::one() + b_coeffs(k, 1)[1].clone() / rat_int(i64::from(g));
    if truncated.is_zero() {
        return Err(AsymptoticsError::DivisionByZero { k, g });
    }
    Ok(value / truncated)
}

/// [`q_value`] with six decimal places kept and the rest dropped.
pub fn q_render(k: u32, g: u32) -> Result<String, AsymptoticsError> {
    Ok(decimal_string_trunc(&q_value(k, g)?, 6))
}

/// Tab-separated table of `Q_{k,g}` over `k = 1..=k_max` (row-major) and the
/// given genera, with header `k\tg\tQ` and six-decimal cells; byte-stable.
pub fn q_table(k_max: u32, g_list: &[u32]) -> Result<String, AsymptoticsError> {
    let mut out = String::from("k\tg\tQ\n");
    for k in 1..=k_max {
        for &g in g_list {
            out.push_str(&format!("{k}\t{g}\t{}\n", q_render(k, g)?));
        }
    }
    Ok(out)
}

/// `<tau_d tau_slot kappa(m)>_g / ((6g)^{|d|+|m|+||m||} <tau_{3g-2}>_g)`
/// with `slot = 3g-2+n-|d|-|m|`, computed through the kappa expansion and
/// the `P` polynomials, exact at every admissible genus.
pub fn kappa_limit_value(
    d: &TauVector,
    m: &KappaMonomial,
    g: u32,
) -> Result<Rational, AsymptoticsError> {
    if g < 1 {
        return Err(AsymptoticsError::GenusTooSmall { g });
    }
    let n = d.len();
    let dt = d.total();
    let mt = m.total_degree();
    let slot = 3 * i64::from(g) - 2 + n as i64 - dt as i64 - mt as i64;
    if slot < 0 {
        return Err(AsymptoticsError::Inadmissible { g, n, total: dt + mt });
    }
    let mut sum = Rational::zero();
    for term in kmz_expand(m).iter() {
        let mut c = term.coefficient.clone();
        for &t in term.extra_taus.entries() {
            c /= Rational::from_integer(odd_double_factorial(2 * i64::from(t) + 1));
        }
        let key = sorted_with(d.entries(), term.extra_taus.entries());
        sum += c * p_poly_cached(&key).eval_int(i64::from(g));
    }
    for &di in d.entries() {
        sum /= Rational::from_integer(odd_double_factorial(2 * i64::from(di) + 1));
    }
    let exponent = dt + mt + m.weight();
    Ok(sum / rat_pow(&rat_int(6 * i64::from(g)), exponent as u32))
}

/// Large-genus limit of [`kappa_limit_value`]:
/// `m! / (||m||! prod (2d_i+1)!! prod_j ((2j+3)!!)^{m(j)})`.
pub fn kappa_limit_target(d: &TauVector, m: &KappaMonomial) -> Rational {
    let mut value = Rational::from_integer(m.multiplicity_factorial())
        / Rational::from_integer(factorial(m.weight()));
    for &di in d.entries() {
        value /= Rational::from_integer(odd_double_factorial(2 * i64::from(di) + 1));
    }
    for (j, mult) in m.iter() {
        value /= rat_pow(
            &Rational::from_integer(odd_double_factorial(2 * i64::from(j) + 3)),
            mult,
        );
    }
    value
}
