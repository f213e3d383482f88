mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use hyperdimer::geometry::{pt, DiscAutomorphism, Point};
use hyperdimer::height::{height_from_flow, heights_via_winding, reference_flow, TreeKind};
use hyperdimer::sampler::{dimers_to_trees, trees_to_dimers, validate_cover, DimerSampler};
use hyperdimer::stats::{fit_line, Summary};
use hyperdimer::temperley::ExtendedGraph;
use hyperdimer::winding::{intrinsic_winding, topological_winding, Polyline};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ball2() -> &'static ExtendedGraph {
    static X: OnceLock<ExtendedGraph> = OnceLock::new();
    X.get_or_init(|| common::extended_ball(2, 0.0).2)
}

fn point_in_disc() -> impl Strategy<Value = Point> {
    (0.0..0.9f64, -PI..PI).prop_map(|(r, t)| Point::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn automorphism_inverse_round_trips(rot in -PI..PI, a in point_in_disc(), z in point_in_disc()) {
        let phi = DiscAutomorphism::new(rot, a).unwrap();
        let back = phi.inverse().apply(phi.apply(z));
        prop_assert!((back - z).norm() < 1e-9);
        prop_assert!(phi.apply(z).norm() < 1.0);
    }

    #[test]
    fn topological_winding_is_additive(pts in prop::collection::vec(point_in_disc(), 3..8), split in 1usize..6) {
        let p = pt(0.95, 0.0);
        let k = split.min(pts.len() - 2);
        let whole = Polyline::open(pts.clone());
        let a = Polyline::open(pts[..=k].to_vec());
        let b = Polyline::open(pts[k..].to_vec());
        let sum = topological_winding(&a, p).unwrap() + topological_winding(&b, p).unwrap();
        prop_assert!((topological_winding(&whole, p).unwrap() - sum).abs() < 1e-9);
        prop_assert!((a.concat(&b).points.len()) == pts.len());
    }

    #[test]
    fn closed_polygon_intrinsic_winding_is_whole_turns(pts in prop::collection::vec(point_in_disc(), 3..9)) {
        let w = intrinsic_winding(&Polyline::closed(pts)) / (2.0 * PI);
        prop_assert!((w - w.round()).abs() < 1e-9);
    }

    #[test]
    fn sampled_covers_round_trip(seed in any::<u64>()) {
        let x = ball2();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DimerSampler::new(x).sample(&mut rng).unwrap();
        validate_cover(&m, x).unwrap();
        let (w, f) = dimers_to_trees(&m, x).unwrap();
        prop_assert_eq!(trees_to_dimers(&w, &f, x).unwrap(), m);
    }

    #[test]
    fn flow_height_matches_tree_windings(seed in any::<u64>()) {
        let x = ball2();
        let flow = reference_flow(x).unwrap();
        let m = DimerSampler::new(x).sample(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let h = height_from_flow(&m, &flow, x).unwrap();
        let w = heights_via_winding(&m, x, TreeKind::Wired).unwrap();
        let worst = h.value.iter().zip(&w).filter(|(a, _)| a.is_finite()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-9, "{}", worst);
    }

    #[test]
    fn summary_is_shift_invariant(xs in prop::collection::vec(-100.0..100.0f64, 2..50), c in -10.0..10.0f64) {
        let a = Summary::of(&xs);
        let b = Summary::of(&xs.iter().map(|x| x + c).collect::<Vec<_>>());
        prop_assert!((b.mean - a.mean - c).abs() < 1e-9);
        prop_assert!((b.variance - a.variance).abs() < 1e-6 * (1.0 + a.variance));
    }

    #[test]
    fn exact_lines_are_recovered(m in -5.0..5.0f64, c in -5.0..5.0f64) {
        let x: Vec<f64> = (0..6).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|t| m * t + c).collect();
        let fit = fit_line(&x, &y).unwrap();
        prop_assert!((fit.slope - m).abs() < 1e-9 && (fit.intercept - c).abs() < 1e-9);
    }
}
