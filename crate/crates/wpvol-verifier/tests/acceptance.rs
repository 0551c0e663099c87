//! Acceptance gate: thirteen end-to-end criteria, one test and one printed
//! PASS/FAIL line each.
//!
//! Criteria 1 through 12 build canonical text artifacts twice, under a
//! single-worker pool and under a four-worker pool, with a fresh
//! bracket/volume engine for each mode. Criterion 13 demands the two
//! artifact sets be byte-identical. Artifact text never includes timings,
//! so measured durations are tracked separately from the compared bytes.

use once_cell::sync::Lazy;
use rayon::prelude::*;
use std::time::{Duration, Instant};
use wpvol_arith::rational::{rat, rat_int, rat_pow};
use wpvol_arith::{GPoly, GRationalFn, PiValue, Rational};
use wpvol_asymptotics::{b_coeffs, c_value, p_poly, p_poly_oracle, q_render, ratio_fn};
use wpvol_correlator::two_point::two_point_oracle;
use wpvol_correlator::{one_point_closed, TauVector};
use wpvol_verifier::{with_thread_pool, Verifier};
use wpvol_volume::{BracketError, VolumeEngine};

struct Criterion {
    ok: bool,
    text: String,
    elapsed: Duration,
}

fn word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn pv(num: i64, den: i64, e: u32) -> PiValue {
    PiValue::term(rat(num, den), e)
}

fn tv(entries: &[u32]) -> TauVector {
    TauVector::new(entries.to_vec())
}

/// Non-increasing index vectors of exact length `n` with total at most
/// `bound`, largest first.
fn multisets(n: usize, bound: i64) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, cap: i64, left: usize, budget: i64, out: &mut Vec<Vec<u32>>) {
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

fn fmt_rationals(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Criterion 1: the fifteen one-boundary volume coefficients through genus
/// three, exactly.
fn crit_one_point_data(engine: &VolumeEngine) -> Criterion {
    let start = Instant::now();
    let expected: [(u32, u32, PiValue); 15] = [
        (1, 0, pv(1, 12, 1)),
        (1, 1, pv(1, 2, 0)),
        (2, 0, pv(29, 192, 4)),
        (2, 1, pv(169, 120, 3)),
        (2, 2, pv(139, 12, 2)),
        (2, 3, pv(203, 3, 1)),
        (2, 4, pv(210, 1, 0)),
        (3, 0, pv(9292841, 4082400, 7)),
        (3, 1, pv(8497697, 388800, 6)),
        (3, 2, pv(8983379, 45360, 5)),
        (3, 3, pv(127189, 81, 4)),
        (3, 4, pv(94418, 9, 3)),
        (3, 5, pv(166364, 3, 2)),
        (3, 6, pv(616616, 3, 1)),
        (3, 7, pv(400400, 1, 0)),
    ];
    let mut text = String::from("one-boundary volume coefficients a[g,k]\n");
    let mut ok = true;
    for (g, k, want) in expected {
        match engine.one_point_coeff(g, k) {
            Ok(got) => {
                let good = got == want;
                ok &= good;
                text.push_str(&format!("a[{g},{k}] = {got} | expected {want} | {}\n", word(good)));
            }
            Err(e) => {
                ok = false;
                text.push_str(&format!("a[{g},{k}] error: {e}\n"));
            }
        }
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 2: all twenty convergence-diagnostic table cells, as printed.
fn crit_table_cells() -> Criterion {
    let start = Instant::now();
    let cells: [(u32, u32, &str); 20] = [
        (1, 20, "1.000438"),
        (1, 40, "1.000106"),
        (1, 60, "1.000047"),
        (1, 80, "1.000026"),
        (1, 100, "1.000016"),
        (2, 20, "1.001334"),
        (2, 40, "1.000326"),
        (2, 60, "1.000144"),
        (2, 80, "1.000080"),
        (2, 100, "1.000051"),
        (3, 20, "1.002300"),
        (3, 40, "1.000563"),
        (3, 60, "1.000248"),
        (3, 80, "1.000139"),
        (3, 100, "1.000089"),
        (4, 20, "1.003090"),
        (4, 40, "1.000759"),
        (4, 60, "1.000335"),
        (4, 80, "1.000188"),
        (4, 100, "1.000120"),
    ];
    let mut text = String::from("convergence diagnostic Q at six decimals\n");
    let mut ok = true;
    for (k, g, want) in cells {
        match q_render(k, g) {
            Ok(got) => {
                let good = got == want;
                ok &= good;
                text.push_str(&format!("Q[k={k},g={g}] = {got} | expected {want} | {}\n", word(good)));
            }
            Err(e) => {
                ok = false;
                text.push_str(&format!("Q[k={k},g={g}] error: {e}\n"));
            }
        }
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 3: closed forms of the first two coefficient-ratio functions.
fn crit_ratio_closed_forms() -> Criterion {
    let start = Instant::now();
    let expect1 = GRationalFn::new(
        GPoly::from_int_coeffs(&[5, -12, 12]),
        &GPoly::monomial(rat_int(6), 1) * &GPoly::from_int_coeffs(&[-1, 2]),
    );
    let numer2 = &GPoly::from_int_coeffs(&[-1, 1]) * &GPoly::from_int_coeffs(&[-175, 888, -1200, 1008]);
    let denom2 = &(&GPoly::monomial(rat_int(84), 2) * &GPoly::from_int_coeffs(&[-1, 2]))
        * &GPoly::from_int_coeffs(&[-5, 6]);
    let expect2 = GRationalFn::new(numer2, denom2);
    let mut text = String::from("coefficient-ratio rational functions\n");
    let mut ok = true;
    for (k, expect) in [(1u32, expect1), (2, expect2)] {
        let got = ratio_fn(k);
        let good = got.func == expect;
        ok &= good;
        text.push_str(&format!("fn({k}) = {} | expected {} | {}\n", got.func, expect, word(good)));
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 4: first-order inverse-genus coefficients and two deeper
/// expansions.
fn crit_b1_series() -> Criterion {
    let start = Instant::now();
    let mut text = String::from("inverse-genus expansion coefficients\n");
    let mut ok = true;
    for k in 1..=8u32 {
        let ki = i64::from(k);
        let want = rat(ki * ki, 14) + rat(-4 * ki, 7);
        let coeffs = b_coeffs(k, 1);
        let good = coeffs.len() == 2 && coeffs[1] == want;
        ok &= good;
        let got = coeffs.get(1).map(|v| v.to_string()).unwrap_or_else(|| "missing".into());
        text.push_str(&format!("b1({k}) = {got} | expected {want} | {}\n", word(good)));
    }
    let deep: [(u32, usize, Vec<Rational>); 2] = [
        (1, 3, vec![rat_int(1), rat(-1, 2), rat(1, 6), rat(1, 12)]),
        (2, 2, vec![rat_int(1), rat(-6, 7), rat(43, 84)]),
    ];
    for (k, order, want) in deep {
        let got = b_coeffs(k, order);
        let good = got == want;
        ok &= good;
        text.push_str(&format!(
            "b({k}, order {order}) = {} | expected {} | {}\n",
            fmt_rationals(&got),
            fmt_rationals(&want),
            word(good)
        ));
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 5: four closed-form ratio expansions at every genus 2..=8.
fn crit_c_closed_forms() -> Criterion {
    let start = Instant::now();
    type Form = fn(i64) -> Rational;
    let forms: [(&[u32], Form); 4] = [
        (&[1], |g| rat_int(1) + rat(-1, 2 * g)),
        (&[2], |g| rat_int(1) + rat(-1, g) + rat(5, 12 * g * g)),
        (&[3], |g| {
            rat_int(1) + rat(-11, 6 * g) + rat(95, 72 * g * g) + rat(-35, 72 * g * g * g)
        }),
        (&[2, 2], |g| {
            rat_int(1) + rat(-11, 6 * g) + rat(17, 12 * g * g) + rat(-7, 12 * g * g * g)
        }),
    ];
    let mut text = String::from("large-index correlator ratios against closed forms\n");
    let mut ok = true;
    for (d, form) in forms {
        let taus = tv(d);
        for g in 2..=8i64 {
            let want = form(g);
            match c_value(&taus, g as u32) {
                Ok(got) => {
                    let good = got == want;
                    ok &= good;
                    text.push_str(&format!(
                        "C({d:?};g={g}) = {got} | expected {want} | {}\n",
                        word(good)
                    ));
                }
                Err(e) => {
                    ok = false;
                    text.push_str(&format!("C({d:?};g={g}) error: {e}\n"));
                }
            }
        }
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 6: for every index vector with total at most six on at most
/// three entries, the scaled-ratio polynomial has integer coefficients,
/// leading term `6^{|d|} g^{|d|}`, and matches the interpolation oracle.
fn crit_p_integrality() -> Criterion {
    let start = Instant::now();
    let mut keys: Vec<Vec<u32>> = Vec::new();
    for n in 0..=3usize {
        for d in multisets(n, 6) {
            keys.push(d);
        }
    }
    let lines: Vec<(String, bool)> = keys
        .par_iter()
        .map(|d| {
            let taus = tv(d);
            let recursive = p_poly(&taus);
            let total = taus.total() as usize;
            let integral = recursive.poly.has_integer_coeffs();
            let leading = recursive.poly.degree() == Some(total)
                && recursive.poly.coeff(total) == rat_pow(&rat_int(6), total as u32);
            let oracle = *recursive.poly == *p_poly_oracle(&taus).poly;
            let good = integral && leading && oracle;
            let line = format!(
                "P[{d:?}]: integer-coefficients={} leading-term={} oracle-match={}\n",
                word(integral),
                word(leading),
                word(oracle)
            );
            (line, good)
        })
        .collect();
    let mut text = String::from("scaled-ratio polynomials: integrality, leading term, oracle\n");
    let mut ok = true;
    for (line, good) in lines {
        ok &= good;
        text.push_str(&line);
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 7: the correlator engine against the one-point closed form
/// (g <= 15) and the two-point oracle (all index pairs, g <= 8).
fn crit_engine_oracles(engine: &VolumeEngine) -> Criterion {
    let start = Instant::now();
    let corr = engine.correlator_engine();
    let one_point: Vec<(String, bool)> = (1..=15u32)
        .into_par_iter()
        .map(|g| {
            let got = corr.correlator(g, &[3 * g - 2]);
            let want = one_point_closed(g);
            let good = got == want;
            (
                format!("one-point g={g}: {got} | expected {want} | {}\n", word(good)),
                good,
            )
        })
        .collect();
    let two_point: Vec<(String, bool)> = (1..=8u32)
        .into_par_iter()
        .map(|g| {
            let top = 3 * g - 1;
            let mut bad = Vec::new();
            for a in 0..=top {
                let b = top - a;
                if corr.correlator(g, &[a, b]) != two_point_oracle(a, b) {
                    bad.push((a, b));
                }
            }
            let good = bad.is_empty();
            let line = if good {
                format!("two-point g={g}: {} ordered pairs | ok\n", top + 1)
            } else {
                format!("two-point g={g}: mismatches at {bad:?}\n")
            };
            (line, good)
        })
        .collect();
    let mut text = String::from("correlator engine against independent closed forms\n");
    let mut ok = true;
    for (line, good) in one_point.into_iter().chain(two_point) {
        ok &= good;
        text.push_str(&line);
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 8: definition route and recursion route agree on every bracket
/// with `2g-2+n <= 7`.
fn crit_cross_path(engine: &VolumeEngine) -> Criterion {
    let start = Instant::now();
    let mut inputs: Vec<(u32, usize, Vec<u32>)> = Vec::new();
    for g in 0..=4i64 {
        let lo = (3 - 2 * g).max(0);
        for n in lo..=(9 - 2 * g) {
            for d in multisets(n as usize, 3 * g - 3 + n) {
                inputs.push((g as u32, n as usize, d));
            }
        }
    }
    let results: Vec<(String, bool)> = inputs
        .par_iter()
        .map(|(g, n, d)| {
            if *n == 0 {
                // The recursion removes a boundary component, so closed
                // surfaces are outside its domain by contract: the
                // definition route alone carries the value and the
                // recursion route must decline.
                let good = engine.bracket(*g, d).is_ok()
                    && matches!(
                        engine.bracket_by_recursion(*g, d),
                        Err(BracketError::NoBoundary)
                    );
                return (
                    format!(
                        "g={g} n=0 d=[] | definition route only; recursion route declines as specified | {}\n",
                        word(good)
                    ),
                    good,
                );
            }
            let by_def = engine.bracket(*g, d);
            let by_rec = engine.bracket_by_recursion(*g, d);
            let good = matches!((&by_def, &by_rec), (Ok(a), Ok(b)) if a == b);
            let line = if good {
                format!("g={g} n={n} d={d:?} | ok\n")
            } else {
                format!("g={g} n={n} d={d:?} | def {by_def:?} vs rec {by_rec:?}\n")
            };
            (line, good)
        })
        .collect();
    let mut text = String::from("bracket definition route against recursion route\n");
    let mut ok = true;
    for (line, good) in results {
        ok &= good;
        text.push_str(&line);
    }
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 9: identity suites pass exhaustively at complexity 5.
fn crit_identity_suites(verifier: &Verifier) -> Criterion {
    let start = Instant::now();
    let residuals = verifier.suite_identities(5);
    let kdv = verifier.suite_kdv(5);
    let ok = residuals.passes() && kdv.passes();
    let text = format!("{}\n{}", residuals.render_text(), kdv.render_text());
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 10: inequality suites pass exhaustively at complexity 6 with
/// certified margins.
fn crit_inequality_suites(verifier: &Verifier) -> Criterion {
    let start = Instant::now();
    let reports = [
        verifier.suite_monotonicity(6),
        verifier.suite_domination(6),
        verifier.suite_tau1_bound(6),
        verifier.suite_sandwich(6),
    ];
    let ok = reports.iter().all(|r| r.passes());
    let text = reports
        .iter()
        .map(|r| r.render_text())
        .collect::<Vec<_>>()
        .join("\n");
    Criterion { ok, text, elapsed: start.elapsed() }
}

/// Criterion 11: the hyperbolic coefficient sequence suite through L = 30.
fn crit_a_sequence(verifier: &Verifier) -> Criterion {
    let start = Instant::now();
    let report = verifier.suite_a_sequence(30);
    Criterion {
        ok: report.passes(),
        text: report.render_text(),
        elapsed: start.elapsed(),
    }
}

/// Criterion 12: every tracked large-genus deviation is strictly smaller at
/// genus 12 than at genus 6.
fn crit_trends(verifier: &Verifier) -> Criterion {
    let start = Instant::now();
    let report = verifier.suite_ratio_trends(12, 0);
    let ok = report.passes() && report.passed == 6;
    Criterion {
        ok,
        text: report.render_text(),
        elapsed: start.elapsed(),
    }
}

fn build_bundle(threads: usize) -> Vec<Criterion> {
    with_thread_pool(Some(threads), || {
        let verifier = Verifier::new();
        let engine = verifier.engine();
        vec![
            crit_one_point_data(engine),
            crit_table_cells(),
            crit_ratio_closed_forms(),
            crit_b1_series(),
            crit_c_closed_forms(),
            crit_p_integrality(),
            crit_engine_oracles(engine),
            crit_cross_path(engine),
            crit_identity_suites(&verifier),
            crit_inequality_suites(&verifier),
            crit_a_sequence(&verifier),
            crit_trends(&verifier),
        ]
    })
}

static BUNDLES: Lazy<(Vec<Criterion>, Vec<Criterion>)> =
    Lazy::new(|| (build_bundle(1), build_bundle(4)));

fn verdict_line(number: usize, label: &str, ok: bool) {
    println!(
        "criterion {number:02} {label}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn check(number: usize, label: &str, limit: Option<Duration>) {
    let criterion = &BUNDLES.0[number - 1];
    verdict_line(number, label, criterion.ok);
    assert!(criterion.ok, "\n{}", criterion.text);
    if let Some(limit) = limit {
        let slowest = criterion.elapsed.max(BUNDLES.1[number - 1].elapsed);
        assert!(
            slowest < limit,
            "criterion {number} took {slowest:?}, limit {limit:?}"
        );
    }
}

#[test]
fn c01_one_point_coefficient_data() {
    check(1, "low-genus one-point volume coefficients", Some(Duration::from_secs(60)));
}

#[test]
fn c02_diagnostic_table_cells() {
    check(2, "convergence diagnostic table", Some(Duration::from_secs(60)));
}

#[test]
fn c03_ratio_function_closed_forms() {
    check(3, "coefficient-ratio closed forms", None);
}

#[test]
fn c04_inverse_genus_coefficients() {
    check(4, "inverse-genus expansion coefficients", None);
}

#[test]
fn c05_ratio_value_closed_forms() {
    check(5, "correlator ratio closed forms", None);
}

#[test]
fn c06_p_polynomial_integrality_and_oracle() {
    check(6, "scaled-ratio polynomial integrality and oracle", Some(Duration::from_secs(600)));
}

#[test]
fn c07_correlator_oracles() {
    check(7, "correlator engine oracles", None);
}

#[test]
fn c08_bracket_route_agreement() {
    check(8, "bracket route agreement", Some(Duration::from_secs(1800)));
}

#[test]
fn c09_identity_suites() {
    check(9, "identity suites", None);
}

#[test]
fn c10_inequality_suites() {
    check(10, "inequality suites", None);
}

#[test]
fn c11_coefficient_sequence_suite() {
    check(11, "hyperbolic coefficient sequence suite", None);
}

#[test]
fn c12_large_genus_trends() {
    check(12, "large-genus trend assertions", None);
}

#[test]
fn c13_thread_count_determinism() {
    let (one, four) = (&BUNDLES.0, &BUNDLES.1);
    let ok = one.len() == four.len()
        && one
            .iter()
            .zip(four.iter())
            .all(|(a, b)| a.text == b.text && a.ok == b.ok);
    verdict_line(13, "byte-identical reports across worker counts", ok);
    for (index, (a, b)) in one.iter().zip(four.iter()).enumerate() {
        assert_eq!(
            a.text,
            b.text,
            "criterion {} artifact diverged between 1 and 4 workers",
            index + 1
        );
        assert_eq!(a.ok, b.ok, "criterion {} verdict diverged", index + 1);
    }
    assert!(ok);
}
