//! Uniform spanning trees, Temperleyan dimer covers and their height
//! functions on circle-packed hyperbolic triangulations.
//!
//! The pipeline is: build a ball of a degree-`d` triangulation
//! ([`triangulation`]), pack it in the unit disc ([`packing`]), superimpose
//! primal and dual graphs and attach the boundary gadget ([`temperley`]),
//! sample covers through Wilson's algorithm ([`sampler`]), then measure
//! heights ([`height`]) and double-dimer loops ([`doubledimer`]).

pub mod doubledimer;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod height;
pub mod map;
pub mod packing;
pub mod parallel;
pub mod sampler;
pub mod stats;
pub mod temperley;
pub mod triangulation;
pub mod winding;

pub use error::{Error, Result};
