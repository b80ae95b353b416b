//! Iterate the billiard map in an ellipse and write the orbit as CSV and SVG.
//!
//!     cargo run --example simulate_orbit -- [phi0] [n] [out_dir]

use std::env;
use std::fs;
use std::path::PathBuf;

use convex_billiards::billiard_map::iterate;
use convex_billiards::integrable::integral_along;
use convex_billiards::output::{orbit_csv, orbit_svg};
use convex_billiards::{ConvexDomain, PhasePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let phi0: f64 = args.first().map_or(Ok(0.3), |s| s.parse())?;
    let n: usize = args.get(1).map_or(Ok(500), |s| s.parse())?;
    let out = args.get(2).map_or_else(|| env::temp_dir().join("billiard_orbit"), PathBuf::from);

    let table = ConvexDomain::ellipse(2.0, 1.0)?;
    let orbit = iterate(&table, PhasePoint::new(0.0, phi0), n)?;
    let integral = integral_along(&table, &orbit)?;
    let drift = integral.iter().map(|v| (v - integral[0]).abs()).fold(0.0, f64::max);

    fs::create_dir_all(&out)?;
    fs::write(out.join("orbit.csv"), orbit_csv(&table, &orbit))?;
    fs::write(out.join("orbit.svg"), orbit_svg(&table, &orbit))?;
    println!("{n} bounces from phi0 = {phi0}; first integral {:.12} drifted by {drift:.2e}", integral[0]);
    println!("wrote {}", out.display());
    Ok(())
}
