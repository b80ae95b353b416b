//! The ellipse is integrable: its first integral is conserved, and levels
//! split into orbits tangent to confocal ellipses or confocal hyperbolas.

use std::f64::consts::FRAC_PI_2;

use convex_billiards::integrable::{
    caustic_csv, classify_caustic, conservation_defect, cosh2_mu0, level_set_start, separatrix_level,
};
use convex_billiards::spectrum::rotation_number;
use convex_billiards::{ConvexDomain, PhasePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = ConvexDomain::ellipse(2.0, 1.0)?;
    for phi in [0.05, 0.3, 1.2] {
        let d = conservation_defect(&table, PhasePoint::new(0.0, phi), 10_000)?;
        println!("phi0 = {phi}: max |I_k - I_0| over 10^4 bounces = {d:.2e}");
    }
    let top = cosh2_mu0(&table)?;
    println!("separatrix level {:.15}, boundary level {top:.15}", separatrix_level(&table)?);

    let rows = [0.2, 0.6, 1.0, 1.1, 1.25, top - 1e-3]
        .iter()
        .map(|&level| classify_caustic(&table, level))
        .collect::<Result<Vec<_>, _>>()?;
    print!("{}", caustic_csv(&rows));

    let level = 1.2;
    let a = rotation_number(&table, level_set_start(&table, level, 0.0)?, 4096)?;
    let b = rotation_number(&table, level_set_start(&table, level, FRAC_PI_2)?, 4096)?;
    println!("level {level}: rotation numbers {:.13} and {:.13} (error bounds {:.1e}, {:.1e})", a.value, b.value, a.error, b.error);
    Ok(())
}
