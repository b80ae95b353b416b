//! Lazutkin coordinates: the billiard map becomes `(x + y + O(y^3), y + O(y^4))`.

use convex_billiards::lazutkin::{normal_form_exponents, to_lazutkin};
use convex_billiards::{ConvexDomain, PhasePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cos = vec![0.0; 3];
    cos[2] = 0.05;
    let tables = [
        ("circle r=1", ConvexDomain::circle(1.0)?),
        ("ellipse 2x1", ConvexDomain::ellipse(2.0, 1.0)?),
        (
            "support 1 + 0.05 cos 3t",
            ConvexDomain::from_support(convex_billiards::SupportFunction { c0: 1.0, cos, sin: vec![] })?,
        ),
    ];
    for (name, table) in &tables {
        let fit = normal_form_exponents(table)?;
        let show = |v: Option<f64>| v.map_or("noise floor".to_string(), |v| format!("{v:.3}"));
        println!("{name:24} slope_x {:>11}  slope_y {:>11}", show(fit.slope_x), show(fit.slope_y));
    }
    let p = to_lazutkin(&tables[1].1, PhasePoint::new(1.0, 0.01));
    println!("(s, phi) = (1, 0.01) on the ellipse sits at (x, y) = ({:.6}, {:.6})", p.x, p.y);
    Ok(())
}
