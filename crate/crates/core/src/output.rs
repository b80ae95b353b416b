//! Text emitters shared by the commands: CSV number formatting and SVG.

use std::fmt::Write as _;

use crate::billiard_map::PhasePoint;
use crate::geometry::ConvexDomain;

/// 17 significant digits, enough to reproduce any `f64` after parsing.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Orbit table with columns `k, s, phi, x, y`.
pub fn orbit_csv(domain: &ConvexDomain, orbit: &[PhasePoint]) -> String {
    let mut out = String::from("k,s,phi,x,y\n");
    for (k, p) in orbit.iter().enumerate() {
        let [x, y] = domain.position(p.s);
        let _ = writeln!(out, "{k},{},{},{},{}", fmt_f64(p.s), fmt_f64(p.phi), fmt_f64(x), fmt_f64(y));
    }
    out
}

/// Boundary outline plus the chords of `orbit`, as a standalone SVG.
pub fn orbit_svg(domain: &ConvexDomain, orbit: &[PhasePoint]) -> String {
    const SIZE: f64 = 800.0;
    const OUTLINE: usize = 720;
    let outline: Vec<[f64; 2]> = (0..OUTLINE)
        .map(|i| domain.position(domain.perimeter() * i as f64 / OUTLINE as f64))
        .collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &outline {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = 0.9 * SIZE / span;
    let map = |p: [f64; 2]| {
        (
            0.5 * SIZE + scale * (p[0] - 0.5 * (lo[0] + hi[0])),
            0.5 * SIZE - scale * (p[1] - 0.5 * (lo[1] + hi[1])),
        )
    };
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    svg.push_str("<polygon fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"");
    for p in &outline {
        let (x, y) = map(*p);
        let _ = write!(svg, "{x:.3},{y:.3} ");
    }
    svg.push_str("\"/>\n<polyline fill=\"none\" stroke=\"#c03030\" stroke-width=\"0.6\" stroke-opacity=\"0.7\" points=\"");
    for p in orbit {
        let (x, y) = map(domain.position(p.s));
        let _ = write!(svg, "{x:.3},{y:.3} ");
    }
    svg.push_str("\"/>\n</svg>\n");
    svg
}
