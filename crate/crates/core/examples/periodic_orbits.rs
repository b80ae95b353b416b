//! Birkhoff periodic orbits of prescribed rotation number.
//!
//!     cargo run --example periodic_orbits -- [p] [q]

use std::env;

use convex_billiards::spectrum::{find_periodic_orbit, find_periodic_orbits, OrbitSearch};
use convex_billiards::ConvexDomain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let p: i64 = args.first().map_or(Ok(1), |s| s.parse())?;
    let q: i64 = args.get(1).map_or(Ok(3), |s| s.parse())?;
    let table = ConvexDomain::ellipse(2.0, 1.0)?;

    let best = find_periodic_orbit(&table, p, q, None)?;
    println!("maximal {p}/{q} orbit: length {:.12}, residual {:.1e}", best.total_length, best.residual);
    for (s, phi) in best.nodes.iter().zip(&best.angles) {
        let [x, y] = table.position(*s);
        println!("  s = {s:10.6}  phi = {phi:9.6}  ({x:9.6}, {y:9.6})");
    }
    let all = find_periodic_orbits(&table, p, q, None, &OrbitSearch::default())?;
    println!("distinct critical configurations found by the seed sweep: {}", all.len());
    for o in &all {
        println!("  length {:.12}", o.total_length);
    }
    Ok(())
}
