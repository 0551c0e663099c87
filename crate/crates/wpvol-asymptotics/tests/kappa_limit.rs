//! Limit values for correlators carrying higher kappa classes: exact
//! targets, agreement with the direct correlator route, and the shrinking
//! deviation as the genus grows.

use num_traits::{One, Signed};
use wpvol_arith::rational::{rat, rat_int, rat_pow};
use wpvol_arith::Rational;
use wpvol_asymptotics::{kappa_limit_target, kappa_limit_value, AsymptoticsError};
use wpvol_correlator::{Engine, TauVector};
use wpvol_kappa::{mixed_correlator, KappaMonomial};

fn tv(entries: &[u32]) -> TauVector {
    TauVector::new(entries.to_vec())
}

fn samples() -> Vec<(TauVector, KappaMonomial)> {
    vec![
        (tv(&[]), KappaMonomial::kappa1_power(1)),
        (tv(&[]), KappaMonomial::from_pairs(&[(2, 1)])),
        (tv(&[2]), KappaMonomial::kappa1_power(1)),
    ]
}

#[test]
fn limit_targets() {
    assert_eq!(kappa_limit_target(&tv(&[]), &KappaMonomial::kappa1_power(1)), rat(1, 15));
    assert_eq!(kappa_limit_target(&tv(&[]), &KappaMonomial::from_pairs(&[(2, 1)])), rat(1, 105));
    assert_eq!(kappa_limit_target(&tv(&[2]), &KappaMonomial::kappa1_power(1)), rat(1, 225));
    assert_eq!(kappa_limit_target(&tv(&[]), &KappaMonomial::kappa1_power(2)), rat(1, 225));
    assert_eq!(kappa_limit_target(&tv(&[]), &KappaMonomial::empty()), rat_int(1));
}

#[test]
fn empty_inputs_give_exactly_one() {
    for g in 1..=6 {
        assert_eq!(
            kappa_limit_value(&tv(&[]), &KappaMonomial::empty(), g).unwrap(),
            rat_int(1)
        );
    }
}

#[test]
fn polynomial_route_matches_the_direct_correlator_route() {
    let engine = Engine::new();
    let mut checks = samples();
    checks.push((tv(&[]), KappaMonomial::kappa1_power(2)));
    checks.push((tv(&[2, 2]), KappaMonomial::from_pairs(&[(2, 1)])));
    for (d, m) in &checks {
        for g in 2..=3u32 {
            let slot = 3 * i64::from(g) - 2 + d.len() as i64
                - d.total() as i64
                - m.total_degree() as i64;
            assert!(slot >= 0, "sample out of range at genus {g}");
            let mut legs = d.entries().to_vec();
            legs.push(slot as u32);
            let numer = mixed_correlator(&engine, g, &legs, m);
            let denom = engine.correlator(g, &[3 * g - 2]);
            let exponent = (d.total() + m.total_degree() + m.weight()) as u32;
            let direct = numer / (denom * rat_pow(&rat_int(6 * i64::from(g)), exponent));
            assert_eq!(
                kappa_limit_value(d, m, g).unwrap(),
                direct,
                "route mismatch at {:?}, genus {g}",
                d.entries()
            );
        }
    }
}

#[test]
fn deviation_shrinks_toward_the_target() {
    for (d, m) in &samples() {
        let target = kappa_limit_target(d, m);
        let deviation = |g: u32| {
            let value = kappa_limit_value(d, m, g).unwrap();
            (value / &target - Rational::one()).abs()
        };
        let near = deviation(40);
        let far = deviation(10);
        assert!(near < rat(1, 5), "more than twenty percent off the limit at genus 40");
        assert!(near < far, "deviation did not shrink from genus 10 to genus 40");
    }
}

#[test]
fn admissibility_guards() {
    assert_eq!(
        kappa_limit_value(&tv(&[]), &KappaMonomial::kappa1_power(1), 0),
        Err(AsymptoticsError::GenusTooSmall { g: 0 })
    );
    assert_eq!(
        kappa_limit_value(&tv(&[5]), &KappaMonomial::kappa1_power(1), 1),
        Err(AsymptoticsError::Inadmissible { g: 1, n: 1, total: 6 })
    );
}
