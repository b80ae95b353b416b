//! Marked length spectrum and the small-rotation expansion of Mather's beta.

use convex_billiards::spectrum::{beta_expansion_check, marked_length_spectrum};
use convex_billiards::ConvexDomain;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = ConvexDomain::ellipse(2.0, 1.0)?;
    println!("{:>5} {:>8} {:>20} {:>20}", "p/q", "omega", "max length", "beta");
    for e in marked_length_spectrum(&table, 7)? {
        match &e.sample {
            Ok(b) => println!("{:>5} {:8.5} {:20.14} {:20.14}", format!("{}/{}", e.p, e.q), e.omega, b.length, b.beta),
            Err(err) => println!("{:>5} failed: {err}", format!("{}/{}", e.p, e.q)),
        }
    }
    let report = beta_expansion_check(&table, &[10, 20, 40, 60])?;
    println!("unit-perimeter Lazutkin perimeter C = {:.12}", report.lazutkin_perimeter);
    for (q, r) in &report.ratios {
        println!("  (beta(1/{q}) + 1/{q}) / (C^3 / 24 q^3) = {r:.6}");
    }
    Ok(())
}
