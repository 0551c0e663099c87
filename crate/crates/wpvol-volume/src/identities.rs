//! Exact bracket identities relating a `(g,n)` bracket to brackets with one
//! more boundary or one less handle. Each check computes both sides in
//! `Q[pi^2]` and reports exact equality; the residual forms are exposed for
//! diagnostics.

use crate::{dimension, BracketError, VolumeEngine};
use wpvol_arith::rational::{factorial, rat_int, Rational};
use wpvol_arith::PiValue;
use wpvol_correlator::TauVector;

/// A bracket that is zero by stability or dimension, else the definition
/// route value.
fn bracket_or_zero(engine: &VolumeEngine, g: u32, indices: &[u32]) -> PiValue {
    match engine.bracket(g, indices) {
        Ok(v) => v,
        Err(_) => PiValue::zero(),
    }
}

/// Left side minus right side of the boundary-count identity
/// `(2g-2+n) [d]_{g,n} = (1/2) sum_L (-1)^L (L+1) pi^(2L) / (2L+3)! * [d, L+1]_{g,n+1}`.
pub fn dilaton_residual(engine: &VolumeEngine, g: u32, d: &[u32]) -> Result<PiValue, BracketError> {
    let base = engine.bracket(g, d)?;
    let n = d.len();
    let lhs = base.scale(&rat_int(2 * g as i64 - 2 + n as i64));
    let d0 = (dimension(g, n) - d.iter().map(|&x| x as i64).sum::<i64>()) as u32;
    let mut rhs = PiValue::zero();
    for l in 0..=d0 {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let coeff = rat_int(sign * (l as i64 + 1))
            / Rational::from_integer(factorial(2 * l as u64 + 3));
        let mut extended = d.to_vec();
        extended.push(l + 1);
        let shifted = engine.bracket(g, &extended)?;
        rhs = rhs + shifted.scale(&coeff).mul_pi2_pow(l);
    }
    Ok(lhs - rhs.scale(&Rational::new(1.into(), 2.into())))
}

/// Left side minus right side of the index-lowering identity
/// `sum_j (2 d_j + 1) [.., d_j - 1, ..]_{g,n} = sum_L (-pi^2)^L / (4 (2L+1)!) * [d, L]_{g,n+1}`.
pub fn string_residual(engine: &VolumeEngine, g: u32, d: &[u32]) -> Result<PiValue, BracketError> {
    // Validate the base input even though only lowered versions appear on
    // the left side.
    engine.bracket(g, d)?;
    let n = d.len();
    let taus = TauVector::new(d.to_vec());
    let mut lhs = PiValue::zero();
    for (v, mult) in taus.counts() {
        if v == 0 {
            continue;
        }
        let lowered = taus.remove_one(v).with_extra(&[v - 1]);
        let factor = rat_int((2 * v as i64 + 1) * mult as i64);
        lhs = lhs + engine.bracket(g, lowered.entries())?.scale(&factor);
    }
    let d0 = (dimension(g, n) - taus.total() as i64) as u32;
    let mut rhs = PiValue::zero();
    for l in 0..=d0 + 1 {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let coeff = rat_int(sign)
            / (rat_int(4) * Rational::from_integer(factorial(2 * l as u64 + 1)));
        let mut extended = d.to_vec();
        extended.push(l);
        let shifted = engine.bracket(g, &extended)?;
        rhs = rhs + shifted.scale(&coeff).mul_pi2_pow(l);
    }
    Ok(lhs - rhs)
}

/// Left side minus right side of the handle-trading identity
/// `[tau_0 tau_1 d]_{g,n+2} = [tau_0^4 d]_{g-1,n+4}
///  + 6 sum_{g1+g2=g} sum_{d = I + J} [tau_0^2 I]_{g1} [tau_0^2 J]_{g2}`,
/// the split sum running over labeled distributions of the `d` entries.
///
/// # Panics
///
/// Panics for `g = 0` (the identity trades a handle away).
pub fn kdv2_residual(engine: &VolumeEngine, g: u32, d: &[u32]) -> Result<PiValue, BracketError> {
    assert!(g >= 1, "the handle-trading identity needs g >= 1");
    let mut lhs_index = d.to_vec();
    lhs_index.extend_from_slice(&[0, 1]);
    let lhs = engine.bracket(g, &lhs_index)?;

    let mut first_index = d.to_vec();
    first_index.extend_from_slice(&[0, 0, 0, 0]);
    let first = engine.bracket(g - 1, &first_index)?;

    let taus = TauVector::new(d.to_vec());
    let mut split_sum = PiValue::zero();
    for (i_part, j_part, weight) in taus.sub_multisets() {
        let w = Rational::from_integer(weight);
        for g1 in 0..=g {
            let g2 = g - g1;
            let f1 = bracket_or_zero(engine, g1, i_part.with_extra(&[0, 0]).entries());
            if f1.is_zero() {
                continue;
            }
            let f2 = bracket_or_zero(engine, g2, j_part.with_extra(&[0, 0]).entries());
            if f2.is_zero() {
                continue;
            }
            split_sum = split_sum + (f1 * &f2).scale(&w);
        }
    }
    Ok(lhs - (first + split_sum.scale(&rat_int(6))))
}

/// Exact truth of the boundary-count identity at `(g, d)`.
pub fn identity_dilaton_check(engine: &VolumeEngine, g: u32, d: &[u32]) -> Result<bool, BracketError> {
    Ok(dilaton_residual(engine, g, d)?.is_zero())
}

/// Exact truth of the index-lowering identity at `(g, d)`.
pub fn identity_string_check(engine: &VolumeEngine, g: u32, d: &[u32]) -> Result<bool, BracketError> {
    Ok(string_residual(engine, g, d)?.is_zero())
}

/// Exact truth of the handle-trading identity at `(g, d)`.
pub fn identity_kdv2_check(engine: &VolumeEngine, g: u32, d: &[u32]) -> Result<bool, BracketError> {
    Ok(kdv2_residual(engine, g, d)?.is_zero())
}
