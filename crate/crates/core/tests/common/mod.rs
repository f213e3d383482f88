#![allow(dead_code)]

use hyperdimer::packing::{pack_in_disc, Packing};
use hyperdimer::temperley::{build_extended, ExtendedGraph};
use hyperdimer::triangulation::{build_regular_ball, PlanarTriangulation};

pub fn packed_ball(r: usize) -> (PlanarTriangulation, Packing) {
    let t = build_regular_ball(7, r).unwrap();
    let p = pack_in_disc(&t, 1e-12).unwrap();
    (t, p)
}

pub fn extended_ball(r: usize, angle: f64) -> (PlanarTriangulation, Packing, ExtendedGraph) {
    let (t, p) = packed_ball(r);
    let x = build_extended(&t, &p, angle).unwrap();
    (t, p, x)
}

/// Closed stars of the root and its first neighbor in the radius-2 ball:
/// two interior vertices, 13 crossings, 48 covers.
pub fn two_star_patch() -> (PlanarTriangulation, Packing, ExtendedGraph) {
    let big = build_regular_ball(7, 2).unwrap();
    let root = big.root();
    let v1 = big.rotation()[root][0];
    let mut keep = vec![false; big.num_vertices()];
    for c in [root, v1] {
        keep[c] = true;
        for &u in &big.rotation()[c] {
            keep[u] = true;
        }
    }
    let t = big.induced(&keep, root).unwrap();
    let p = pack_in_disc(&t, 1e-12).unwrap();
    let x = build_extended(&t, &p, 0.0).unwrap();
    (t, p, x)
}
