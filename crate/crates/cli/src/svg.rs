//! SVG scenes over the unit disc. Elements are emitted in id order so the
//! output is byte-stable.

use std::fmt::Write as _;

use hyperdimer::doubledimer::LoopEnsemble;
use hyperdimer::geometry::Point;
use hyperdimer::packing::Packing;
use hyperdimer::sampler::{extended_wired_parent, DimerCover};
use hyperdimer::temperley::{ExtendedGraph, Node};

const WIRED: &str = "#7b2d8e";
const FREE: &str = "#2e8b57";

pub enum Scene<'a> {
    Packing(&'a Packing),
    /// Wired tree purple, free tree green, on top of the packing.
    Trees(&'a Packing, &'a ExtendedGraph, &'a DimerCover),
    Cover(&'a Packing, &'a ExtendedGraph, &'a DimerCover),
    Loops(&'a Packing, &'a ExtendedGraph, &'a LoopEnsemble),
    /// One value per face, `NaN` for faces left blank.
    Heatmap(&'a ExtendedGraph, &'a [f64]),
}

fn p(z: Point) -> String {
    format!("{:.6},{:.6}", z.re, -z.im)
}

fn line(s: &mut String, a: Point, b: Point, color: &str, width: f64) {
    let (a, b) = (p(a), p(b));
    let (x1, y1) = a.split_once(',').unwrap();
    let (x2, y2) = b.split_once(',').unwrap();
    let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"/>"#);
}

fn circles(s: &mut String, packing: &Packing) {
    for v in 0..packing.len() {
        let c = packing.circle(v);
        let _ = writeln!(
            s,
            r##"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="none" stroke="#888" stroke-width="0.002"/>"##,
            c.center.re, -c.center.im, c.radius
        );
    }
}

/// Blue at `lo` to red at `hi`.
pub fn color(v: f64, lo: f64, hi: f64) -> String {
    let t = if hi > lo { ((v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.5 };
    format!("rgb({},{},{})", (255.0 * t).round(), 64, (255.0 * (1.0 - t)).round())
}

/// Observed range of the finite values.
pub fn range(values: &[f64]) -> Option<(f64, f64)> {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    finite.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

pub fn render(scene: &Scene) -> String {
    let mut s = String::new();
    let mut attrs = String::new();
    match scene {
        Scene::Packing(packing) => circles(&mut s, packing),
        Scene::Trees(packing, ext, cover) => {
            circles(&mut s, packing);
            let parent = extended_wired_parent(cover, ext);
            for (v, &u) in parent.iter().enumerate() {
                if u != usize::MAX {
                    line(&mut s, ext.pos[v], ext.pos[cover.mate[v]], WIRED, 0.004);
                    line(&mut s, ext.pos[cover.mate[v]], ext.pos[u], WIRED, 0.004);
                }
            }
            for v in 0..ext.num_nodes() {
                if !matches!(ext.nodes[v], Node::Dual(_)) || v == ext.b {
                    continue;
                }
                let w = cover.mate[v];
                if let Some(u) = ext.neighbors(w).find(|&u| u != v && matches!(ext.nodes[u], Node::Dual(_))) {
                    line(&mut s, ext.pos[v], ext.pos[w], FREE, 0.004);
                    line(&mut s, ext.pos[w], ext.pos[u], FREE, 0.004);
                }
            }
        }
        Scene::Cover(packing, ext, cover) => {
            circles(&mut s, packing);
            for (b, w) in cover.pairs(ext) {
                line(&mut s, ext.pos[b], ext.pos[w], "#c03", 0.006);
            }
        }
        Scene::Loops(packing, ext, ens) => {
            circles(&mut s, packing);
            for id in 0..ens.loops.len() {
                let pts: Vec<String> = ens.polygon(ext, id).into_iter().map(p).collect();
                let _ = writeln!(s, r##"<polygon points="{}" fill="none" stroke="#d35400" stroke-width="0.004"/>"##, pts.join(" "));
            }
        }
        Scene::Heatmap(ext, values) => {
            let (lo, hi) = range(values).unwrap_or((0.0, 0.0));
            let _ = write!(attrs, r#" data-min="{lo:?}" data-max="{hi:?}""#);
            for (f, face) in ext.faces.iter().enumerate() {
                let v = values.get(f).copied().unwrap_or(f64::NAN);
                if !v.is_finite() {
                    continue;
                }
                let pts: Vec<String> = face.nodes.iter().map(|&n| p(ext.pos[n])).collect();
                let _ = writeln!(s, r#"<polygon points="{}" fill="{}" stroke="none"/>"#, pts.join(" "), color(v, lo, hi));
            }
        }
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"800\" height=\"800\"{attrs}>\n<ellipse cx=\"0\" cy=\"0\" rx=\"1\" ry=\"1\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.003\"/>\n{s}</svg>\n"
    )
}
