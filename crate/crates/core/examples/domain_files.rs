//! Domain description files: build tables from TOML and write them back.

use convex_billiards::geometry::{DomainKind, DomainSpec};
use convex_billiards::SupportFunction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = r#"
kind = "support"
c0 = 1.0
cos = [0.0, 0.02, 0.01]
sin = [0.0, 0.0, -0.005]
rotate = 0.3
scale = 2.0
"#;
    let spec = DomainSpec::from_toml(text)?;
    let table = spec.build()?;
    println!("perimeter {:.12}, Lazutkin perimeter {:.12}", table.perimeter(), table.lazutkin_perimeter());
    println!("min curvature {:.6}, total curvature / 2pi = {:.12}", table.min_curvature(), table.total_curvature()? / std::f64::consts::TAU);

    let mut bumpy = DomainSpec::new(DomainKind::Support(SupportFunction { c0: 1.0, cos: vec![0.0, 0.0, 0.2], sin: vec![] }));
    bumpy.origin = 0.5;
    match bumpy.build() {
        Ok(_) => println!("unexpectedly convex"),
        Err(e) => println!("rejected: {e}"),
    }
    print!("round trip:\n{}", spec.build()?.spec().to_toml()?);
    Ok(())
}
