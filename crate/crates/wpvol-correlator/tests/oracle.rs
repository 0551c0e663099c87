//! The two-point series oracle against pinned values and the recursion.

use wpvol_arith::rational::{rat, rat_int};
use wpvol_correlator::two_point::{two_point_oracle, two_point_oracle_normalized};
use wpvol_correlator::Engine;

#[test]
fn pinned_two_point_values() {
    assert_eq!(two_point_oracle(0, 2), rat(1, 24));
    assert_eq!(two_point_oracle(1, 1), rat(1, 24));
    assert_eq!(two_point_oracle(2, 3), rat(29, 5760));
    assert_eq!(two_point_oracle(3, 2), rat(29, 5760));
    assert_eq!(two_point_oracle(0, 5), rat(1, 1152));
}

#[test]
fn degree_gate() {
    assert_eq!(two_point_oracle(0, 0), rat_int(0));
    assert_eq!(two_point_oracle(1, 3), rat_int(0));
    assert_eq!(two_point_oracle(7, 2), rat_int(0));
    // while 7 + 1 = 3*3 - 1 is a genuine two-point case: 5 <tau_7>_3
    assert_eq!(two_point_oracle(7, 1), rat(5, 82944));
}

#[test]
fn oracle_matches_recursion_through_genus_four() {
    let e = Engine::new();
    for g in 1..=4u32 {
        let total = 3 * g - 1;
        for a in 0..=(total / 2) {
            let b = total - a;
            assert_eq!(
                e.correlator(g, &[a, b]),
                two_point_oracle(a, b),
                "two-point mismatch at g={g}, a={a}, b={b}"
            );
        }
    }
}

#[test]
fn normalized_oracle() {
    // (2*0+1)!! (2*2+1)!! <tau_0 tau_2> = 15/24
    assert_eq!(two_point_oracle_normalized(0, 2), rat(15, 24));
}
