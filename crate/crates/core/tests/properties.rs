use proptest::prelude::*;

use invasion_ponds::invasion::{extract_first_pond, pond_partition, BoxPolicy};
use invasion_ponds::lattice::{Edge, LatticeBox, Vertex, ORIGIN};
use invasion_ponds::percolation::{estimate_sigma, minimax_pond};
use invasion_ponds::stats::{radius_tail, sample_ponds};
use invasion_ponds::weights::WeightField;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_ids_round_trip(x in -1000i32..1000, y in -1000i32..1000, horizontal: bool) {
        let a = Vertex::new(x, y);
        let b = if horizontal { Vertex::new(x + 1, y) } else { Vertex::new(x, y + 1) };
        let e = Edge::new(b, a).unwrap();
        prop_assert_eq!(Edge::from_id(e.id()), e);
        prop_assert_eq!(e.dual().to_primal(), e);
    }

    #[test]
    fn accepted_ponds_agree_with_sweep(seed: u64) {
        let field = WeightField::pseudorandom(seed);
        let pond = extract_first_pond(&field, ORIGIN, BoxPolicy { initial: 8, max: 64, margin: 2 }).unwrap();
        if !pond.censored {
            let sweep = minimax_pond(&field, ORIGIN, pond.box_used).unwrap();
            prop_assert_eq!(pond.outlet.id(), sweep.bottleneck.id());
            prop_assert_eq!(pond.volume, sweep.pond.len());
        }
    }

    #[test]
    fn partition_level_of_origin_matches_sweep(seed: u64) {
        let field = WeightField::pseudorandom(seed);
        let part = pond_partition(&field, 4, 16).unwrap();
        let sweep = minimax_pond(&field, ORIGIN, 16).unwrap();
        prop_assert_eq!(part.vertex_level(ORIGIN).unwrap().to_bits(), sweep.level.to_bits());
        let b = LatticeBox::new(4).unwrap();
        // classes are cut at the edge of B(4), so only the level is shared
        for v in sweep.pond.iter().filter(|v| b.contains(**v)) {
            prop_assert_eq!(part.vertex_level(*v), part.vertex_level(ORIGIN));
        }
    }

    #[test]
    fn crossing_estimate_is_monotone_in_p(p in 0.0f64..1.0, dp in 0.0f64..0.3, seed: u64) {
        let a = estimate_sigma(6, 6, p, 50, seed).unwrap();
        let b = estimate_sigma(6, 6, (p + dp).min(1.0), 50, seed).unwrap();
        prop_assert!(a.hits <= b.hits);
    }

    #[test]
    fn tails_are_nested(seed: u64) {
        let samples = sample_ponds(seed, 40, BoxPolicy { initial: 8, max: 32, margin: 2 }, 0).unwrap();
        let tails = radius_tail(&samples, &[1, 2, 4, 8, 16], seed).unwrap();
        prop_assert!(tails.windows(2).all(|w| w[0].hits >= w[1].hits));
        for t in &tails {
            prop_assert!(t.censored_count <= t.hits && t.hits <= t.trials);
        }
    }
}
