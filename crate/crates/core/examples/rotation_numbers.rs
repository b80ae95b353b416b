//! Rotation numbers by weighted Birkhoff averages of the arc-length advance.

use convex_billiards::lazutkin::to_lazutkin;
use convex_billiards::spectrum::rotation_number;
use convex_billiards::{ConvexDomain, PhasePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let circle = ConvexDomain::circle(1.0)?;
    let r = rotation_number(&circle, PhasePoint::new(0.0, 1.0), 1000)?;
    println!("circle, phi = 1: rho = {:.15} (1/pi = {:.15})", r.value, 1.0 / std::f64::consts::PI);

    let ellipse = ConvexDomain::ellipse(2.0, 1.0)?;
    println!("{:>8} {:>14} {:>14} {:>10}", "phi", "rho", "lazutkin y", "error");
    for phi in [0.4, 0.2, 0.1, 0.05, 0.02] {
        let p = PhasePoint::new(0.0, phi);
        let r = rotation_number(&ellipse, p, 20_000)?;
        // Near the boundary rho ~ y up to O(y^3); y itself varies along the
        // orbit, so compare against its value at the start only loosely.
        println!("{phi:8.3} {:14.10} {:14.10} {:10.1e}", r.value, to_lazutkin(&ellipse, p).y, r.error);
    }
    Ok(())
}
