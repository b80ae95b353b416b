//! The derivative of the billiard map near the boundary: exact Jacobian
//! against its expansion `L + phi A`, which should agree to second order.

use convex_billiards::billiard_map::{jacobian_exact, jacobian_taylor};
use convex_billiards::lazutkin::loglog_slope;
use convex_billiards::{ConvexDomain, PhasePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = ConvexDomain::ellipse(2.0, 1.0)?;
    let phis = [1e-2, 3e-3, 1e-3, 3e-4];
    println!("{:>8} {:>12} {:>12} {:>12} {:>12} {:>8}", "s", "phi=1e-2", "3e-3", "1e-3", "3e-4", "slope");
    for k in 0..8 {
        let s = table.perimeter() * (k as f64 + 0.5) / 8.0;
        let errors: Vec<(f64, f64)> = phis
            .iter()
            .map(|&phi| {
                let exact = jacobian_exact(&table, PhasePoint::new(s, phi))?;
                Ok((phi, (exact - jacobian_taylor(&table, s, phi)).max_norm()))
            })
            .collect::<Result<_, convex_billiards::BilliardError>>()?;
        let slope = loglog_slope(&errors).unwrap_or(f64::NAN);
        print!("{s:8.4}");
        for (_, e) in &errors {
            print!(" {e:12.3e}");
        }
        println!(" {slope:8.3}");
    }
    let p = PhasePoint::new(1.0, 0.7);
    let j = jacobian_exact(&table, p)?;
    println!("det at {p:?} = {:.15}", j.det());
    Ok(())
}
