//! Mather's alpha function as the convex conjugate of sampled beta values,
//! against `alpha(-1 + I) ~ (4 sqrt 2 / 3) C^(-3/2) I^(3/2)`.

use convex_billiards::spectrum::{convexity_violation, BetaGrid, OrbitSearch};
use convex_billiards::ConvexDomain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = ConvexDomain::ellipse(2.0, 1.0)?;
    let unit = table.scaled(1.0 / table.perimeter())?;
    let c = unit.lazutkin_perimeter();
    let grid = BetaGrid::build(&unit, &BetaGrid::default_rotations(2048), &OrbitSearch::default())?;
    println!("{} beta samples, convexity violation {:.1e}", grid.samples.len(), convexity_violation(&grid.points()));
    for i in [1e-2, 1e-3, 1e-4] {
        let a = grid.alpha(-1.0 + i)?;
        let model = 4.0 * 2f64.sqrt() / 3.0 * c.powf(-1.5) * i.powf(1.5);
        println!("I = {i:.0e}: alpha = {:.6e} at omega = {:.5}, ratio to model {:.5}", a.value, a.omega, a.value / model);
    }
    let edge = grid.alpha(-1.5)?;
    println!("alpha(-1.5) maximizer at the grid edge: {}", edge.at_edge);
    Ok(())
}
