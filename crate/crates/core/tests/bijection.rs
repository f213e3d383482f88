mod common;

use std::collections::HashSet;

use hyperdimer::sampler::*;
use hyperdimer::temperley::Node;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn wheel_covers_match_tree_pairs() {
    let (_, _, x) = common::extended_ball(1, 0.0);
    let covers = enumerate_dimer_covers(&reduced_bipartite(&x)).unwrap();
    let trees = enumerate_spanning_trees(&x.wired_graph()).unwrap();
    assert_eq!(covers.len(), 7);
    assert_eq!(trees.len(), covers.len());
    for c in &covers {
        let m = cover_from_reduced(&x, c);
        let (w, f) = dimers_to_trees(&m, &x).unwrap();
        assert_eq!(trees_to_dimers(&w, &f, &x).unwrap(), m);
    }
}

#[test]
fn two_star_patch_counts_agree_with_ryser() {
    let (_, _, x) = common::two_star_patch();
    assert_eq!(x.num_crossings(), 13);
    let g = reduced_bipartite(&x);
    let covers = enumerate_dimer_covers(&g).unwrap();
    assert_eq!(covers.len(), 48);
    assert_eq!(ryser_permanent(&g.biadjacency()).unwrap(), 48);
    assert_eq!(enumerate_spanning_trees(&x.wired_graph()).unwrap().len(), 48);
    let distinct: HashSet<_> = covers.iter().collect();
    assert_eq!(distinct.len(), covers.len());
}

#[test]
fn frozen_boundary_law_equals_unextended_law() {
    let (_, _, x) = common::extended_ball(1, 0.0);
    let (g, blacks, whites) = extended_bipartite(&x);
    let all = enumerate_dimer_covers(&g).unwrap();
    let frozen: HashSet<Vec<(usize, usize)>> = all
        .iter()
        .map(|c| blacks.iter().zip(c).map(|(&b, &w)| (b, whites[w])).collect::<Vec<_>>())
        .filter(|pairs| x.forced.iter().all(|f| pairs.contains(f)))
        .collect();
    let reduced: HashSet<Vec<(usize, usize)>> = enumerate_dimer_covers(&reduced_bipartite(&x))
        .unwrap()
        .iter()
        .map(|c| cover_from_reduced(&x, c).pairs(&x))
        .collect();
    assert_eq!(frozen, reduced);
}

#[test]
fn sampled_round_trips_on_radius_two() {
    let (_, _, x) = common::extended_ball(2, 0.7);
    let s = DimerSampler::new(&x);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let (w, f) = s.sample_trees(&mut rng).unwrap();
        assert_eq!(w.edges().len() + f.edges().len(), x.num_crossings());
        let m = trees_to_dimers(&w, &f, &x).unwrap();
        for &(b, wh) in &x.forced {
            assert!(m.contains(b, wh));
        }
        let (w2, f2) = dimers_to_trees(&m, &x).unwrap();
        assert_eq!((w2, f2), (w.clone(), f));
        assert_eq!(DimerCover::from_text(&m.to_text(&x), &x).unwrap(), m);
    }
}

#[test]
fn non_dual_pair_is_rejected() {
    let (_, _, x) = common::extended_ball(2, 0.0);
    let s = DimerSampler::new(&x);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (w1, _) = s.sample_trees(&mut rng).unwrap();
    let (w2, f2) = s.sample_trees(&mut rng).unwrap();
    if w1 != w2 {
        assert!(matches!(trees_to_dimers(&w1, &f2, &x), Err(hyperdimer::Error::Bijection(_))));
    }
}

#[test]
fn extended_wired_tree_uses_all_but_one_cycle_edge() {
    let (_, _, x) = common::extended_ball(2, 1.0);
    let m = sample_uniform_dimer(&x, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    let parent = extended_wired_parent(&m, &x);
    let cycle_edges = (0..x.num_nodes())
        .filter(|&v| matches!(x.nodes[v], Node::Cycle(_)) && parent[v] != usize::MAX)
        .filter(|&v| matches!(x.nodes[parent[v]], Node::Cycle(_)))
        .count();
    assert_eq!(cycle_edges, x.cycle_len() - 1);
    for v in 0..x.num_nodes() {
        if matches!(x.nodes[v], Node::Primal(_) | Node::Cycle(_)) {
            let mut u = v;
            let mut steps = 0;
            while u != x.root {
                u = parent[u];
                steps += 1;
                assert!(steps <= x.num_nodes());
            }
        }
    }
}

#[test]
fn bad_covers_are_input_errors() {
    let (_, _, x) = common::extended_ball(1, 0.0);
    let m = sample_uniform_dimer(&x, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let mut broken = m.clone();
    let (b, w) = x.forced[0];
    broken.mate[b] = usize::MAX;
    broken.mate[w] = usize::MAX;
    assert!(matches!(dimers_to_trees(&broken, &x), Err(hyperdimer::Error::Input(_))));
}
