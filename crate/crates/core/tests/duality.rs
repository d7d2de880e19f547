//! Closed dual circuits against the primal connectivity of the same field.

use invasion_ponds::invasion::{extract_first_pond, BoxPolicy};
use invasion_ponds::lattice::ORIGIN;
use invasion_ponds::percolation::{check_anp, reaches_boundary};
use invasion_ponds::weights::{derive_seed, WeightField};

#[test]
fn circuit_exists_iff_origin_is_cut_off() {
    for i in 0..200 {
        let field = WeightField::pseudorandom(derive_seed(5, i));
        for p in [0.45, 0.5, 0.55] {
            let r = check_anp(&field, p, 1, 32).unwrap();
            assert_eq!(
                r.any_circuit(),
                !reaches_boundary(&field, ORIGIN, p, 32).unwrap()
            );
        }
    }
}

#[test]
fn large_pond_above_p_forces_a_large_circuit() {
    let policy = BoxPolicy {
        initial: 16,
        max: 64,
        margin: 2,
    };
    let mut triggered = 0;
    for i in 0..200 {
        let field = WeightField::pseudorandom(derive_seed(6, i));
        let pond = extract_first_pond(&field, ORIGIN, policy).unwrap();
        if pond.censored {
            continue;
        }
        for p in [0.5, 0.55] {
            for n in [4, 8] {
                if pond.level > p && pond.radius_l1 >= n {
                    triggered += 1;
                    assert!(
                        check_anp(&field, p, n, pond.box_used).unwrap().exists,
                        "sample {i} p {p} n {n}"
                    );
                }
            }
        }
    }
    assert!(triggered > 0);
}
