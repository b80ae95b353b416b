//! Similarity test between two tables through the curvature obstruction
//! `Delta(s)` after matching boundaries by Lazutkin abscissa.

use std::f64::consts::PI;

use convex_billiards::rigidity::similarity_test;
use convex_billiards::{ConvexDomain, SupportFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ellipse = ConvexDomain::ellipse(2.0, 1.0)?;
    let mut cos = vec![0.0; 3];
    cos[2] = 1e-7;
    let pairs = [
        ("circle r=1 vs circle r=3", ConvexDomain::circle(1.0)?, ConvexDomain::circle(3.0)?),
        ("ellipse vs rotated x1.7 copy", ellipse.clone(), ellipse.rotated(PI / 5.0).scaled(1.7)?),
        ("circle vs ellipse", ConvexDomain::circle(1.0)?, ellipse.clone()),
        (
            "circle vs 1e-7 cos 3t bump",
            ConvexDomain::circle(1.0)?,
            ConvexDomain::from_support(SupportFunction { c0: 1.0, cos, sin: vec![] })?,
        ),
    ];
    for (name, a, b) in &pairs {
        let r = similarity_test(a, b)?;
        println!(
            "{name:30} {:13} sup|Delta| = {:.2e}  alpha = {:+.2e} (+- {:.1e})  offset {:.6}",
            r.verdict.to_string(),
            r.sup_delta,
            r.alpha_const,
            r.alpha_residual,
            r.best_offset
        );
    }
    Ok(())
}
