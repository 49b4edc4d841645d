//! Printed MUB tables for m = 3 qubits.

use mubkit::galoisring::GaloisRing;
use mubkit::mub::{mub_ring_set, verify_mub_set};

fn signs(row: &str) -> Vec<f64> {
    row.chars().map(|c| if c == '+' { 1.0 } else { -1.0 }).collect()
}

#[test]
fn three_qubit_second_basis_matches_up_to_order() {
    let r = GaloisRing::new(3).unwrap();
    assert_eq!(r.h(), &[3, 1, 2, 1]);
    let set = mub_ring_set(&r, 0).unwrap();
    assert_eq!(set.len(), 8);
    let scale = 1.0 / 8f64.sqrt();
    for v in set[0].vector(0).amplitudes() {
        assert!((v.re - scale).abs() < 1e-15 && v.im == 0.0);
    }

    // rows as printed, except the third, which is printed as "+-+---+-".
    // That row has five minus signs and cannot be orthogonal to the
    // all-plus row; "+-+---++" is the row of the constructed basis.
    let printed = ["++++++++", "++-+---+", "+-+---++", "++---++-", "+---++-+", "+--++-+-", "+-++-+--", "+++-+---"];
    let ours: Vec<Vec<f64>> = set[0]
        .vectors()
        .iter()
        .map(|v| {
            v.amplitudes()
                .iter()
                .map(|a| {
                    assert_eq!(a.im, 0.0);
                    (a.re / scale).round()
                })
                .collect()
        })
        .collect();
    for row in printed {
        assert!(ours.contains(&signs(row)), "missing {row}");
    }
    assert!(!ours.contains(&signs("+-+---+-")));
    assert!(verify_mub_set(&set, true).unwrap().verdict);
}
