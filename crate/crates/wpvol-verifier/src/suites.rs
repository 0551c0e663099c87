//! The verification suites.
//!
//! Each suite enumerates its cases in a canonical order, evaluates them (in
//! parallel where profitable), and assembles a [`CheckReport`]. Strict
//! inequalities pass only with a certified nonzero margin from exact
//! interval arithmetic; identities pass only when the exact residual is
//! identically zero. No floating-point comparison decides any verdict.

use crate::report::{CheckCase, CheckReport, Verdict};
use num_traits::Signed;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::sync::Arc;
use wpvol_arith::bernoulli::sinh_coeff;
use wpvol_arith::rational::{decimal_string, rat, rat_int, rat_pow};
use wpvol_arith::{pi_eval_ratio, pi_value_sign, PiValue, Rational};
use wpvol_asymptotics::{kappa_limit_target, kappa_limit_value};
use wpvol_correlator::TauVector;
use wpvol_kappa::KappaMonomial;
use wpvol_volume::identities::{dilaton_residual, kdv2_residual, string_residual};
use wpvol_volume::{BracketError, VolumeEngine};

/// Default complexity bound `2g-2+n` for the inequality suites.
pub const DEFAULT_INEQUALITY_COMPLEXITY: u32 = 6;
/// Default complexity bound `2g-2+n` for the identity suites.
pub const DEFAULT_IDENTITY_COMPLEXITY: u32 = 5;
/// Default largest index for the hyperbolic coefficient sequence suite.
pub const DEFAULT_SEQUENCE_LENGTH: u32 = 30;
/// Default top genus for the trend suite.
pub const DEFAULT_TREND_GENUS: u32 = 12;
/// Default extra boundary counts for the trend suite.
pub const DEFAULT_TREND_BOUNDARIES: usize = 0;

/// Runs `f` inside a dedicated worker pool. `None` keeps the default
/// parallelism. Case order in every report is canonical regardless of the
/// worker count, so this setting affects speed only, never output bytes.
pub fn with_thread_pool<T, F>(threads: Option<usize>, f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(count) = threads {
        builder = builder.num_threads(count);
    }
    let pool = builder.build().expect("worker pool construction cannot fail");
    pool.install(f)
}

/// Stable surface types `(g, n)` with `1 <= 2g-2+n <= max_complexity`,
/// ascending in `(g, n)`.
fn stable_pairs(max_complexity: u32) -> Vec<(u32, usize)> {
    let mc = i64::from(max_complexity);
    let mut out = Vec::new();
    for g in 0..=((mc + 2) / 2) {
        let lo = (3 - 2 * g).max(0);
        for n in lo..=(mc + 2 - 2 * g) {
            out.push((g as u32, n as usize));
        }
    }
    out
}

/// Complex dimension `3g - 3 + n` of the moduli space.
fn dim(g: u32, n: usize) -> i64 {
    3 * i64::from(g) - 3 + n as i64
}

/// All non-increasing index vectors of exact length `n` with total at most
/// `bound`, largest leading entries first.
fn multisets(n: usize, bound: i64) -> Vec<Vec<u32>> {
    fn extend(
        prefix: &mut Vec<u32>,
        cap: i64,
        left: usize,
        budget: i64,
        out: &mut Vec<Vec<u32>>,
    ) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=cap.min(budget)).rev() {
            prefix.push(v as u32);
            extend(prefix, v, left - 1, budget - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if bound >= 0 {
        extend(&mut Vec::new(), bound, n, bound, &mut out);
    }
    out
}

/// As [`multisets`], restricted to vectors whose total is exactly `total`.
fn multisets_exact(n: usize, total: i64) -> Vec<Vec<u32>> {
    multisets(n, total)
        .into_iter()
        .filter(|d| d.iter().map(|&v| i64::from(v)).sum::<i64>() == total)
        .collect()
}

/// Sign of a value in Q[pi^2], or a rendered refusal when interval
/// refinement cannot separate it from zero.
fn certified_sign(value: &PiValue) -> Result<Ordering, String> {
    pi_value_sign(value).map_err(|e| format!("sign not certified: {e}"))
}

/// Case outcome for a claim `value > 0` that must hold strictly.
fn strict_positive_case(params: String, claim: String, margin: PiValue) -> CheckCase {
    match certified_sign(&margin) {
        Ok(Ordering::Greater) => CheckCase {
            params,
            claim,
            verdict: Verdict::Pass,
            margin: Some(margin.to_string()),
        },
        Ok(_) => CheckCase {
            params,
            claim,
            verdict: Verdict::Fail,
            margin: Some(margin.to_string()),
        },
        Err(reason) => CheckCase {
            params,
            claim,
            verdict: Verdict::Fail,
            margin: Some(reason),
        },
    }
}

/// Case outcome for a claim `value >= 0`.
fn nonnegative_case(params: String, claim: String, margin: PiValue) -> CheckCase {
    match certified_sign(&margin) {
        Ok(Ordering::Greater) | Ok(Ordering::Equal) => CheckCase {
            params,
            claim,
            verdict: Verdict::Pass,
            margin: Some(margin.to_string()),
        },
        Ok(Ordering::Less) => CheckCase {
            params,
            claim,
            verdict: Verdict::Fail,
            margin: Some(margin.to_string()),
        },
        Err(reason) => CheckCase {
            params,
            claim,
            verdict: Verdict::Fail,
            margin: Some(reason),
        },
    }
}

/// Case outcome for an identity whose exact residual must vanish.
fn residual_case(
    params: String,
    claim: String,
    residual: Result<PiValue, BracketError>,
) -> CheckCase {
    match residual {
        Ok(r) if r.is_zero() => CheckCase {
            params,
            claim,
            verdict: Verdict::Pass,
            margin: Some("0".into()),
        },
        Ok(r) => CheckCase {
            params,
            claim,
            verdict: Verdict::Fail,
            margin: Some(r.to_string()),
        },
        Err(e) => CheckCase {
            params,
            claim,
            verdict: Verdict::Fail,
            margin: Some(format!("evaluation error: {e}")),
        },
    }
}

/// Runs verification suites against one shared bracket/volume engine, so
/// memoized intersection numbers are reused across suites.
pub struct Verifier {
    engine: Arc<VolumeEngine>,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier::new()
    }
}

impl Verifier {
    /// A verifier with a fresh engine.
    pub fn new() -> Self {
        Verifier {
            engine: Arc::new(VolumeEngine::new()),
        }
    }

    /// A verifier sharing an existing engine (and its memo tables).
    pub fn with_engine(engine: Arc<VolumeEngine>) -> Self {
        Verifier { engine }
    }

    /// The underlying engine.
    pub fn engine(&self) -> &Arc<VolumeEngine> {
        &self.engine
    }

    /// Lowering any positive index strictly increases the bracket: for every
    /// stable `(g, n)` with `2g-2+n <= max_complexity`, admissible index
    /// vector `d`, and distinct positive value `v` in `d`, replacing one
    /// copy of `v` by `v - 1` gives a strictly larger bracket.
    pub fn suite_monotonicity(&self, max_complexity: u32) -> CheckReport {
        let mut inputs: Vec<(u32, usize, Vec<u32>, Option<u32>)> = Vec::new();
        for (g, n) in stable_pairs(max_complexity) {
            if n == 0 {
                continue;
            }
            for d in multisets(n, dim(g, n)) {
                let mut values: Vec<u32> = d.iter().copied().filter(|&v| v > 0).collect();
                values.dedup();
                if values.is_empty() {
                    inputs.push((g, n, d, None));
                } else {
                    for v in values {
                        inputs.push((g, n, d.clone(), Some(v)));
                    }
                }
            }
        }
        let engine = self.engine.as_ref();
        let cases: Vec<CheckCase> = inputs
            .par_iter()
            .map(|(g, n, d, value)| match value {
                None => CheckCase {
                    params: format!("g={g} n={n} d={d:?}"),
                    claim: "lowering an index increases the bracket".into(),
                    verdict: Verdict::Skipped {
                        reason: "no positive index to lower".into(),
                    },
                    margin: None,
                },
                Some(v) => {
                    let params = format!("g={g} n={n} d={d:?} v={v}");
                    let claim = format!(
                        "bracket increases strictly when one index {v} drops to {}",
                        v - 1
                    );
                    let mut lowered = d.clone();
                    let slot = lowered
                        .iter()
                        .position(|x| x == v)
                        .expect("value was drawn from d");
                    lowered[slot] = v - 1;
                    match (engine.bracket(*g, d), engine.bracket(*g, &lowered)) {
                        (Ok(high), Ok(low)) => {
                            strict_positive_case(params, claim, &low - &high)
                        }
                        (Err(e), _) | (_, Err(e)) => CheckCase {
                            params,
                            claim,
                            verdict: Verdict::Fail,
                            margin: Some(format!("evaluation error: {e}")),
                        },
                    }
                }
            })
            .collect();
        CheckReport::assemble(
            "monotonicity",
            format!("max_complexity={max_complexity}"),
            cases,
        )
    }

    /// No bracket exceeds the volume of its surface type: for every stable
    /// `(g, n)` with `2g-2+n <= max_complexity` and admissible `d`,
    /// `[d]_{g,n} <= V_{g,n}`, with equality exactly when `d` is all zeros.
    pub fn suite_domination(&self, max_complexity: u32) -> CheckReport {
        let mut inputs: Vec<(u32, usize, Vec<u32>)> = Vec::new();
        for (g, n) in stable_pairs(max_complexity) {
            for d in multisets(n, dim(g, n)) {
                inputs.push((g, n, d));
            }
        }
        let engine = self.engine.as_ref();
        let cases: Vec<CheckCase> = inputs
            .par_iter()
            .map(|(g, n, d)| {
                let params = format!("g={g} n={n} d={d:?}");
                let claim = "bracket stays at or below the volume".to_string();
                match (engine.volume(*g, *n), engine.bracket(*g, d)) {
                    (Ok(volume), Ok(bracket)) => {
                        nonnegative_case(params, claim, &volume - &bracket)
                    }
                    (Err(e), _) | (_, Err(e)) => CheckCase {
                        params,
                        claim,
                        verdict: Verdict::Fail,
                        margin: Some(format!("evaluation error: {e}")),
                    },
                }
            })
            .collect();
        CheckReport::assemble(
            "domination",
            format!("max_complexity={max_complexity}"),
            cases,
        )
    }

    /// The volume is controlled by the single-tau_1 bracket: for every
    /// stable `(g, N)` with `N >= 1`, `2g-2+N <= max_complexity`, and
    /// `3g+N-4 >= 0`, `V_{g,N} <= (pi^2/6) [tau_1 tau_0^{N-1}]_{g,N}`, with
    /// equality exactly at `(g, N) = (0, 4)` and `(1, 1)`.
    pub fn suite_tau1_bound(&self, max_complexity: u32) -> CheckReport {
        let inputs: Vec<(u32, usize)> = stable_pairs(max_complexity)
            .into_iter()
            .filter(|&(_, n)| n >= 1)
            .collect();
        let engine = self.engine.as_ref();
        let cases: Vec<CheckCase> = inputs
            .par_iter()
            .map(|&(g, n)| {
                let params = format!("g={g} n={n}");
                if 3 * i64::from(g) + n as i64 - 4 < 0 {
                    return CheckCase {
                        params,
                        claim: "volume stays at or below (pi^2/6) [tau_1 tau_0^(n-1)]".into(),
                        verdict: Verdict::Skipped {
                            reason: "tau_1 bracket inadmissible at this surface type".into(),
                        },
                        margin: None,
                    };
                }
                let mut key = vec![0u32; n];
                key[0] = 1;
                let equality = (g, n) == (0, 4) || (g, n) == (1, 1);
                let claim = if equality {
                    "volume equals (pi^2/6) [tau_1 tau_0^(n-1)] exactly".to_string()
                } else {
                    "volume stays strictly below (pi^2/6) [tau_1 tau_0^(n-1)]".to_string()
                };
                match (engine.volume(g, n), engine.bracket(g, &key)) {
                    (Ok(volume), Ok(bracket)) => {
                        let margin = &bracket.scale(&rat(1, 6)).mul_pi2_pow(1) - &volume;
                        if equality {
                            if margin.is_zero() {
                                CheckCase {
                                    params,
                                    claim,
                                    verdict: Verdict::Pass,
                                    margin: Some("0".into()),
                                }
                            } else {
                                CheckCase {
                                    params,
                                    claim,
                                    verdict: Verdict::Fail,
                                    margin: Some(margin.to_string()),
                                }
                            }
                        } else {
                            strict_positive_case(params, claim, margin)
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => CheckCase {
                        params,
                        claim,
                        verdict: Verdict::Fail,
                        margin: Some(format!("evaluation error: {e}")),
                    },
                }
            })
            .collect();
        CheckReport::assemble(
            "tau1_bound",
            format!("max_complexity={max_complexity}"),
            cases,
        )
    }

    /// Adding a boundary multiplies the volume by a bounded factor: for
    /// every stable `(g, n)` with `2g-2+n <= max_complexity`,
    /// `12 (2g-2+n) V_{g,n} < V_{g,n+1} < (20 pi^2 / (10 - pi^2)) (2g-2+n) V_{g,n}`,
    /// both bounds strict.
    pub fn suite_sandwich(&self, max_complexity: u32) -> CheckReport {
        let engine = self.engine.as_ref();
        let pairs = stable_pairs(max_complexity);
        let mut cases = Vec::with_capacity(2 * pairs.len() + 1);
        // The upper constant 20 pi^2 / (10 - pi^2) is only meaningful with a
        // positive denominator; certify that once up front.
        let ten_minus = &PiValue::from_rational(rat_int(10)) - &PiValue::pi2_pow(1);
        cases.push(strict_positive_case(
            "constant".into(),
            "10 - pi^2 is positive, so the upper constant 20 pi^2/(10 - pi^2) is finite".into(),
            ten_minus,
        ));
        let per_pair: Vec<[CheckCase; 2]> = pairs
            .par_iter()
            .map(|&(g, n)| {
                let complexity = 2 * i64::from(g) - 2 + n as i64;
                let params = format!("g={g} n={n}");
                match (engine.volume(g, n), engine.volume(g, n + 1)) {
                    (Ok(base), Ok(grown)) => {
                        let lower = &grown - &base.scale(&rat_int(12 * complexity));
                        let lower_case = strict_positive_case(
                            params.clone(),
                            format!("V(g,n+1) exceeds 12(2g-2+n) V(g,n) = 12*{complexity}*V(g,n) strictly"),
                            lower,
                        );
                        // Cross-multiplied upper bound:
                        // (10 - pi^2) V(g,n+1) < 20 pi^2 (2g-2+n) V(g,n).
                        let upper = &grown.mul_pi2_pow(1)
                            - &(&grown.scale(&rat_int(10))
                                - &base.scale(&rat_int(20 * complexity)).mul_pi2_pow(1));
                        let upper_case = strict_positive_case(
                            params,
                            "(10 - pi^2) V(g,n+1) stays strictly below 20 pi^2 (2g-2+n) V(g,n)"
                                .to_string(),
                            upper,
                        );
                        [lower_case, upper_case]
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        let fail = |claim: &str| CheckCase {
                            params: params.clone(),
                            claim: claim.into(),
                            verdict: Verdict::Fail,
                            margin: Some(format!("evaluation error: {e}")),
                        };
                        [
                            fail("V(g,n+1) exceeds 12(2g-2+n) V(g,n) strictly"),
                            fail("(10 - pi^2) V(g,n+1) stays strictly below 20 pi^2 (2g-2+n) V(g,n)"),
                        ]
                    }
                }
            })
            .collect();
        for pair in per_pair {
            cases.extend(pair);
        }
        CheckReport::assemble(
            "sandwich",
            format!("max_complexity={max_complexity}"),
            cases,
        )
    }

    /// The dilaton, string, and genus-lowering bracket identities hold with
    /// exactly zero residual for every stable `(g, n)` with
    /// `2g-2+n <= max_complexity` and admissible `d` (the genus-lowering
    /// identity requires `g >= 1`).
    pub fn suite_identities(&self, max_complexity: u32) -> CheckReport {
        #[derive(Clone, Copy)]
        enum Kind {
            Dilaton,
            String,
            GenusLowering,
        }
        let mut inputs: Vec<(u32, usize, Vec<u32>, Kind)> = Vec::new();
        for (g, n) in stable_pairs(max_complexity) {
            for d in multisets(n, dim(g, n)) {
                inputs.push((g, n, d.clone(), Kind::Dilaton));
                inputs.push((g, n, d.clone(), Kind::String));
                if g >= 1 {
                    inputs.push((g, n, d, Kind::GenusLowering));
                }
            }
        }
        let engine = self.engine.as_ref();
        let cases: Vec<CheckCase> = inputs
            .par_iter()
            .map(|(g, n, d, kind)| {
                let params = format!("g={g} n={n} d={d:?}");
                match kind {
                    Kind::Dilaton => residual_case(
                        params,
                        "dilaton identity residual vanishes".into(),
                        dilaton_residual(engine, *g, d),
                    ),
                    Kind::String => residual_case(
                        params,
                        "string identity residual vanishes".into(),
                        string_residual(engine, *g, d),
                    ),
                    Kind::GenusLowering => residual_case(
                        params,
                        "genus-lowering identity residual vanishes".into(),
                        kdv2_residual(engine, *g, d),
                    ),
                }
            })
            .collect();
        CheckReport::assemble(
            "identities",
            format!("max_complexity={max_complexity}"),
            cases,
        )
    }

    /// The KdV relation for adding a tau_0 insertion holds at every
    /// top-dimensional correlator with `2g-2+n <= max_complexity`: the
    /// weighted correlator equals its genus-lowering plus splitting
    /// expansion.
    pub fn suite_kdv(&self, max_complexity: u32) -> CheckReport {
        let mc = i64::from(max_complexity);
        let mut inputs: Vec<(u32, usize, Vec<u32>)> = Vec::new();
        for g in 0..=((mc + 1) / 2).max(0) {
            for n in 1..=(mc + 2 - 2 * g).max(0) {
                let total = 3 * g - 2 + n;
                if total < 0 {
                    continue;
                }
                for d in multisets_exact(n as usize, total) {
                    inputs.push((g as u32, n as usize, d));
                }
            }
        }
        let engine = Arc::clone(self.engine.correlator_engine());
        let cases: Vec<CheckCase> = inputs
            .par_iter()
            .map(|(g, n, d)| {
                let params = format!("g={g} n={n} d={d:?}");
                let claim = "KdV relation for a tau_0 insertion holds".to_string();
                if engine.kdv_check(*g, d) {
                    CheckCase {
                        params,
                        claim,
                        verdict: Verdict::Pass,
                        margin: Some("0".into()),
                    }
                } else {
                    CheckCase {
                        params,
                        claim,
                        verdict: Verdict::Fail,
                        margin: None,
                    }
                }
            })
            .collect();
        CheckReport::assemble("kdv", format!("max_complexity={max_complexity}"), cases)
    }

    /// The hyperbolic coefficient sequence `a_L` increases strictly toward
    /// its limit 1, its gaps shrink strictly, and each gap scaled by `4^L`
    /// stays within `[1/10, 10]`, for all indices up to `l_max`.
    pub fn suite_a_sequence(&self, l_max: u32) -> CheckReport {
        let seq: Vec<PiValue> = (0..=l_max).map(sinh_coeff).collect();
        let gap = |l: usize| &seq[l + 1] - &seq[l];
        let mut cases = Vec::new();
        for l in 0..l_max {
            let l = l as usize;
            cases.push(strict_positive_case(
                format!("L={l}"),
                format!("a_{l} < a_{}", l + 1),
                gap(l),
            ));
        }
        for l in 1..=l_max {
            let l = l as usize;
            cases.push(strict_positive_case(
                format!("L={l}"),
                format!("a_{l} < 1"),
                &PiValue::one() - &seq[l],
            ));
        }
        if l_max >= 2 {
            for l in 1..l_max {
                let l = l as usize;
                let scaled = gap(l).scale(&rat_pow(&rat_int(4), l as u32));
                let params = format!("L={l}");
                let claim = format!("4^{l} (a_{} - a_{l}) lies within [1/10, 10]", l + 1);
                let above = &scaled - &PiValue::from_rational(rat(1, 10));
                let below = &PiValue::from_rational(rat_int(10)) - &scaled;
                let ok = matches!(
                    (certified_sign(&above), certified_sign(&below)),
                    (Ok(Ordering::Greater | Ordering::Equal), Ok(Ordering::Greater | Ordering::Equal))
                );
                cases.push(CheckCase {
                    params,
                    claim,
                    verdict: if ok { Verdict::Pass } else { Verdict::Fail },
                    margin: Some(scaled.to_string()),
                });
            }
        }
        if l_max >= 3 {
            for l in 1..(l_max - 1) {
                let l = l as usize;
                cases.push(strict_positive_case(
                    format!("L={l}"),
                    format!("gap a_{} - a_{l} exceeds gap a_{} - a_{}", l + 1, l + 2, l + 1),
                    &gap(l) - &gap(l + 1),
                ));
            }
        }
        CheckReport::assemble("a_sequence", format!("l_max={l_max}"), cases)
    }

    /// Large-genus trend tables with one shrinkage assertion per tracked
    /// quantity: each deviation must be strictly smaller at `g_max` than at
    /// `ceil(g_max/2)`. Table rows are informational and never pass or
    /// fail; the splitting-sum rows are table-only with no assertion.
    pub fn suite_ratio_trends(&self, g_max: u32, n_max: usize) -> CheckReport {
        let g_hi = g_max;
        let g_lo = g_max.div_ceil(2);
        let engine = self.engine.as_ref();
        let mut quantities: Vec<TrendQuantity> = Vec::new();
        for n in 0..=n_max {
            quantities.push(TrendQuantity::BoundaryGrowth { n });
        }
        for n in 0..=n_max {
            quantities.push(TrendQuantity::HandleTrade { n });
        }
        quantities.push(TrendQuantity::BracketShare);
        for (d, label) in [
            (Vec::new(), KappaLabel::Kappa1),
            (Vec::new(), KappaLabel::Kappa2),
            (vec![2u32], KappaLabel::Kappa1),
        ] {
            quantities.push(TrendQuantity::KappaLimit { d, label });
        }
        quantities.push(TrendQuantity::SplitSum);
        let blocks: Vec<Vec<CheckCase>> = quantities
            .par_iter()
            .map(|q| trend_cases(engine, q, g_lo, g_hi))
            .collect();
        let cases = blocks.into_iter().flatten().collect();
        CheckReport::assemble(
            "ratio_trends",
            format!("g_max={g_max} n_max={n_max}"),
            cases,
        )
    }
}

/// One tracked quantity in the trend suite.
enum TrendQuantity {
    /// `V(g,n+1) / (2g V(g,n))`, approaching `4 pi^2`.
    BoundaryGrowth { n: usize },
    /// `V(g,n) / V(g-1,n+2)`, approaching 1.
    HandleTrade { n: usize },
    /// `[tau_1]_{g,1} / V(g,1)`, approaching 1.
    BracketShare,
    /// Scaled kappa correlator ratio, approaching a combinatorial limit.
    KappaLimit { d: Vec<u32>, label: KappaLabel },
    /// Separating-boundary mass, table-only.
    SplitSum,
}

#[derive(Clone, Copy)]
enum KappaLabel {
    Kappa1,
    Kappa2,
}

impl KappaLabel {
    fn monomial(self) -> KappaMonomial {
        match self {
            KappaLabel::Kappa1 => KappaMonomial::from_pairs(&[(1, 1)]),
            KappaLabel::Kappa2 => KappaMonomial::from_pairs(&[(2, 1)]),
        }
    }

    fn text(self) -> &'static str {
        match self {
            KappaLabel::Kappa1 => "kappa1",
            KappaLabel::Kappa2 => "kappa2",
        }
    }
}

/// An informational table row.
fn table_row(params: String, claim: String, margin: String) -> CheckCase {
    CheckCase {
        params,
        claim,
        verdict: Verdict::Skipped {
            reason: "informational table row".into(),
        },
        margin: Some(margin),
    }
}

/// A skipped case with an explicit reason and no margin.
fn skip_case(params: String, claim: String, reason: String) -> CheckCase {
    CheckCase {
        params,
        claim,
        verdict: Verdict::Skipped { reason },
        margin: None,
    }
}

/// Renders `num / den` to `digits` decimal places, or a diagnostic string.
fn ratio_text(num: &PiValue, den: &PiValue, digits: u32) -> String {
    pi_eval_ratio(num, den, digits).unwrap_or_else(|e| format!("unrenderable ({e})"))
}

/// Absolute value of a signed quantity in Q[pi^2], with its certified sign.
fn certified_abs(value: &PiValue) -> Result<PiValue, String> {
    match certified_sign(value)? {
        Ordering::Less => Ok(value.scale(&rat_int(-1))),
        _ => Ok(value.clone()),
    }
}

/// Builds the trend cases (two table rows, then an assertion where the
/// quantity has one) for a ratio `num_g / den_g` with deviation
/// `|num_g - target den_g| / den_g`. `parts(g)` returns
/// `(numerator, denominator, deviation_numerator)`; denominators must be
/// strictly positive.
fn ratio_trend_block(
    label: &str,
    extra: Option<usize>,
    claim_ratio: &str,
    claim_trend: &str,
    g_lo: u32,
    g_hi: u32,
    parts: impl Fn(u32) -> Result<(PiValue, PiValue, PiValue), BracketError>,
) -> Vec<CheckCase> {
    let tag = |g: Option<u32>| {
        let mut s = format!("quantity={label}");
        if let Some(n) = extra {
            s.push_str(&format!(" n={n}"));
        }
        if let Some(g) = g {
            s.push_str(&format!(" g={g}"));
        }
        s
    };
    let mut out = Vec::new();
    let mut devs: Vec<Option<(PiValue, PiValue)>> = Vec::new();
    for g in [g_lo, g_hi] {
        match parts(g) {
            Ok((num, den, dev_num)) => {
                out.push(table_row(
                    tag(Some(g)),
                    claim_ratio.to_string(),
                    format!("ratio={}", ratio_text(&num, &den, 6)),
                ));
                devs.push(Some((dev_num, den)));
            }
            Err(e) => {
                out.push(skip_case(
                    tag(Some(g)),
                    claim_ratio.to_string(),
                    format!("unavailable: {e}"),
                ));
                devs.push(None);
            }
        }
    }
    let assertion_params = format!("{} g={g_lo}..{g_hi}", tag(None));
    let claim = claim_trend.to_string();
    if g_lo == g_hi {
        out.push(skip_case(
            assertion_params,
            claim,
            "needs two distinct genera".into(),
        ));
        return out;
    }
    let (lo, hi) = match (&devs[0], &devs[1]) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            out.push(skip_case(
                assertion_params,
                claim,
                "an endpoint value is unavailable".into(),
            ));
            return out;
        }
    };
    let build = || -> Result<CheckCase, String> {
        let (dev_num_lo, den_lo) = lo;
        let (dev_num_hi, den_hi) = hi;
        for den in [den_lo, den_hi] {
            if certified_sign(den)? != Ordering::Greater {
                return Err("denominator is not certified positive".into());
            }
        }
        let abs_lo = certified_abs(dev_num_lo)?;
        let abs_hi = certified_abs(dev_num_hi)?;
        // dev(g_hi) < dev(g_lo) iff |num_hi| den_lo < |num_lo| den_hi,
        // since both denominators are positive.
        let margin_value = &(&abs_lo * den_hi) - &(&abs_hi * den_lo);
        let margin = format!(
            "dev(g={g_hi})={} dev(g={g_lo})={}",
            ratio_text(&abs_hi, den_hi, 12),
            ratio_text(&abs_lo, den_lo, 12),
        );
        let verdict = match certified_sign(&margin_value)? {
            Ordering::Greater => Verdict::Pass,
            _ => Verdict::Fail,
        };
        Ok(CheckCase {
            params: assertion_params.clone(),
            claim: claim.clone(),
            verdict,
            margin: Some(margin),
        })
    };
    out.push(build().unwrap_or_else(|reason| CheckCase {
        params: format!("{} g={g_lo}..{g_hi}", tag(None)),
        claim: claim_trend.to_string(),
        verdict: Verdict::Fail,
        margin: Some(reason),
    }));
    out
}

/// All cases for one trend quantity.
fn trend_cases(
    engine: &VolumeEngine,
    quantity: &TrendQuantity,
    g_lo: u32,
    g_hi: u32,
) -> Vec<CheckCase> {
    match quantity {
        TrendQuantity::BoundaryGrowth { n } => {
            let n = *n;
            ratio_trend_block(
                "boundary-growth",
                Some(n),
                "ratio V(g,n+1) / (2g V(g,n)) approaches 4 pi^2",
                "absolute deviation from 4 pi^2 shrinks",
                g_lo,
                g_hi,
                |g| {
                    let base = engine.volume(g, n)?;
                    let grown = engine.volume(g, n + 1)?;
                    let den = base.scale(&rat_int(2 * i64::from(g)));
                    let dev_num = &grown - &base.scale(&rat_int(8 * i64::from(g))).mul_pi2_pow(1);
                    Ok((grown, den, dev_num))
                },
            )
        }
        TrendQuantity::HandleTrade { n } => {
            let n = *n;
            ratio_trend_block(
                "handle-trade",
                Some(n),
                "ratio V(g,n) / V(g-1,n+2) approaches 1",
                "absolute deviation from 1 shrinks",
                g_lo,
                g_hi,
                |g| {
                    if g == 0 {
                        return Err(BracketError::Unstable { g: 0, n });
                    }
                    let this = engine.volume(g, n)?;
                    let traded = engine.volume(g - 1, n + 2)?;
                    let dev_num = &this - &traded;
                    Ok((this, traded, dev_num))
                },
            )
        }
        TrendQuantity::BracketShare => ratio_trend_block(
            "bracket-share",
            None,
            "ratio [tau_1]_{g,1} / V(g,1) approaches 1",
            "absolute deviation from 1 shrinks",
            g_lo,
            g_hi,
            |g| {
                let bracket = engine.bracket(g, &[1])?;
                let volume = engine.volume(g, 1)?;
                let dev_num = &bracket - &volume;
                Ok((bracket, volume, dev_num))
            },
        ),
        TrendQuantity::KappaLimit { d, label } => {
            kappa_trend_cases(d, *label, g_lo, g_hi)
        }
        TrendQuantity::SplitSum => {
            let mut out = Vec::new();
            for g in [g_lo, g_hi] {
                let params = format!("quantity=split-sum g={g}");
                let claim = "separating-boundary mass sum V(g1,1) V(g-g1,1) / V(g,0) stays small"
                    .to_string();
                let build = || -> Result<String, BracketError> {
                    let whole = engine.volume(g, 0)?;
                    let mut sum = PiValue::zero();
                    for g1 in 1..g {
                        let left = engine.volume(g1, 1)?;
                        let right = engine.volume(g - g1, 1)?;
                        sum = &sum + &(&left * &right);
                    }
                    Ok(format!("ratio={}", ratio_text(&sum, &whole, 6)))
                };
                match build() {
                    Ok(margin) => out.push(CheckCase {
                        params,
                        claim,
                        verdict: Verdict::Skipped {
                            reason: "trend table only".into(),
                        },
                        margin: Some(margin),
                    }),
                    Err(e) => out.push(skip_case(params, claim, format!("unavailable: {e}"))),
                }
            }
            out
        }
    }
}

/// Trend cases for one scaled kappa correlator ratio, exact in Q.
fn kappa_trend_cases(d: &[u32], label: KappaLabel, g_lo: u32, g_hi: u32) -> Vec<CheckCase> {
    let taus = TauVector::new(d.to_vec());
    let monomial = label.monomial();
    let target = kappa_limit_target(&taus, &monomial);
    let tag = |g: Option<u32>| {
        let mut s = format!("quantity=kappa-limit d={d:?} m={}", label.text());
        if let Some(g) = g {
            s.push_str(&format!(" g={g}"));
        }
        s
    };
    let claim_ratio = "scaled kappa correlator ratio approaches its combinatorial limit";
    let mut out = Vec::new();
    let mut devs: Vec<Option<Rational>> = Vec::new();
    for g in [g_lo, g_hi] {
        match kappa_limit_value(&taus, &monomial, g) {
            Ok(value) => {
                out.push(table_row(
                    tag(Some(g)),
                    claim_ratio.to_string(),
                    format!(
                        "value={} target={}",
                        decimal_string(&value, 12),
                        decimal_string(&target, 12)
                    ),
                ));
                devs.push(Some((value - &target).abs()));
            }
            Err(e) => {
                out.push(skip_case(
                    tag(Some(g)),
                    claim_ratio.to_string(),
                    format!("unavailable: {e}"),
                ));
                devs.push(None);
            }
        }
    }
    let params = format!("{} g={g_lo}..{g_hi}", tag(None));
    let claim = "absolute deviation from the limit shrinks".to_string();
    if g_lo == g_hi {
        out.push(skip_case(params, claim, "needs two distinct genera".into()));
        return out;
    }
    match (&devs[0], &devs[1]) {
        (Some(dev_lo), Some(dev_hi)) => {
            let verdict = if dev_hi < dev_lo {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            out.push(CheckCase {
                params,
                claim,
                verdict,
                margin: Some(format!(
                    "dev(g={g_hi})={} dev(g={g_lo})={}",
                    decimal_string(dev_hi, 12),
                    decimal_string(dev_lo, 12)
                )),
            });
        }
        _ => out.push(skip_case(
            params,
            claim,
            "an endpoint value is unavailable".into(),
        )),
    }
    out
}
