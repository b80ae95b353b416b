//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use convex_billiards::billiard_map::{chord, jacobian_exact, step, taylor_coefficients};
use convex_billiards::integrable::{conservation_defect, first_integral_at, level_set_start};
use convex_billiards::lazutkin::normal_form_exponents;
use convex_billiards::rigidity::{boundary_match, similarity_test, Verdict, TOL_ALPHA, TOL_DELTA};
use convex_billiards::spectrum::{
    beta_expansion_check, circle_orbit_length, convexity_violation, farey_half, find_periodic_orbit, rotation_number,
    BetaGrid, OrbitSearch,
};
use convex_billiards::{ConvexDomain, Jacobian2, PhasePoint, SupportFunction};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Check);

fn ellipse() -> ConvexDomain {
    ConvexDomain::ellipse(2.0, 1.0).unwrap()
}

fn bumpy() -> ConvexDomain {
    ConvexDomain::from_support(SupportFunction::new(1.0, vec![0.0, 0.06, 0.03], vec![0.0, 0.02, -0.01])).unwrap()
}

/// Distance between two arc lengths on a boundary of perimeter `l`.
fn arc_gap(a: f64, b: f64, l: f64) -> f64 {
    ((a - b + 0.5 * l).rem_euclid(l) - 0.5 * l).abs()
}

/// Signed lift of `a - b` into `(-l/2, l/2]`.
fn arc_diff(a: f64, b: f64, l: f64) -> f64 {
    (a - b + 0.5 * l).rem_euclid(l) - 0.5 * l
}

fn random_point(rng: &mut StdRng, d: &ConvexDomain, margin: f64) -> PhasePoint {
    PhasePoint::new(rng.gen_range(0.0..d.perimeter()), rng.gen_range(margin..PI - margin))
}

fn circle_exactness() -> Check {
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for r in [0.5, 1.0, 3.0] {
        let d = ConvexDomain::circle(r)?;
        for _ in 0..100 {
            let p = random_point(&mut rng, &d, 0.01);
            let q = step(&d, p)?;
            worst = worst.max(arc_gap(q.s, p.s + 2.0 * r * p.phi, d.perimeter())).max((q.phi - p.phi).abs());
        }
    }
    Ok((worst <= 1e-9, format!("max deviation {worst:.2e} (tol 1e-9)")))
}

fn generating_function() -> Check {
    let d = ellipse();
    let l = d.perimeter();
    let mut rng = StdRng::seed_from_u64(2);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = rng.gen_range(0.0..l);
        let s1 = s + rng.gen_range(0.05..0.95) * l;
        let c = chord(&d, s, s1)?;
        let len = |a: f64, b: f64| chord(&d, a, b).map(|c| c.length);
        let d_s = (len(s + h, s1)? - len(s - h, s1)?) / (2.0 * h);
        let d_s1 = (len(s, s1 + h)? - len(s, s1 - h)?) / (2.0 * h);
        let e0 = -c.phi.cos();
        let e1 = c.phi1.cos();
        worst = worst.max((d_s - e0).abs() / e0.abs()).max((d_s1 - e1).abs() / e1.abs());
    }
    Ok((worst <= 1e-6, format!("max relative error {worst:.2e} (tol 1e-6)")))
}

/// Central-difference Jacobian of the billiard map.
fn fd_jacobian(d: &ConvexDomain, p: PhasePoint, h: f64) -> Result<Jacobian2, Box<dyn std::error::Error>> {
    let l = d.perimeter();
    let col = |dp: PhasePoint| -> Result<[f64; 2], Box<dyn std::error::Error>> {
        let plus = step(d, PhasePoint::new(p.s + dp.s, p.phi + dp.phi))?;
        let minus = step(d, PhasePoint::new(p.s - dp.s, p.phi - dp.phi))?;
        Ok([arc_diff(plus.s, minus.s, l) / (2.0 * h), (plus.phi - minus.phi) / (2.0 * h)])
    };
    let cs = col(PhasePoint::new(h, 0.0))?;
    let cp = col(PhasePoint::new(0.0, h))?;
    Ok(Jacobian2::new(cs[0], cp[0], cs[1], cp[1]))
}

fn jacobian_matches_differences() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let (mut worst_rel, mut worst_det) = (0.0f64, 0.0f64);
    for d in [ellipse(), bumpy()] {
        for _ in 0..50 {
            let p = random_point(&mut rng, &d, 0.1);
            let j = jacobian_exact(&d, p)?;
            let fd = fd_jacobian(&d, p, 1e-6)?;
            worst_rel = worst_rel.max((j - fd).max_norm() / j.max_norm());
            let q = step(&d, p)?;
            worst_det = worst_det.max((j.det() - p.phi.sin() / q.phi.sin()).abs());
        }
    }
    let pass = worst_rel <= 1e-5 && worst_det <= 1e-10;
    Ok((pass, format!("max relative error {worst_rel:.2e} (tol 1e-5), det defect {worst_det:.2e} (tol 1e-10)")))
}

fn first_order_expansion() -> Check {
    let d = ellipse();
    let phis = [1e-2, 3e-3, 1e-3, 3e-4];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..8 {
        let s = d.perimeter() * (i as f64 + 0.3) / 8.0;
        let (l, a) = taylor_coefficients(&d, s);
        let mut pts = Vec::new();
        for &phi in &phis {
            let rest = jacobian_exact(&d, PhasePoint::new(s, phi))? - l - a * phi;
            pts.push((phi.ln(), rest.max_norm().ln()));
        }
        let n = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
        let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
        let slope = sxy / sxx;
        lo = lo.min(slope);
        hi = hi.max(slope);
    }
    Ok((lo >= 1.9 && hi <= 2.1, format!("remainder slopes in [{lo:.4}, {hi:.4}] (band [1.9, 2.1])")))
}

fn lazutkin_normal_form() -> Check {
    let fit = normal_form_exponents(&ellipse())?;
    let sx = fit.slope_x.unwrap_or(f64::NAN);
    let sy = fit.slope_y.unwrap_or(f64::NAN);
    let reference = normal_form_exponents(&ConvexDomain::circle(1.0)?)?.samples;
    let mut spread = 0.0f64;
    for r in [0.5, 3.0] {
        let other = normal_form_exponents(&ConvexDomain::circle(r)?)?.samples;
        for (a, b) in reference.iter().zip(&other) {
            spread = spread.max((a.defect_x - b.defect_x).abs()).max((a.defect_y - b.defect_y).abs());
        }
    }
    let pass = (2.8..=3.3).contains(&sx) && sy >= 3.5 && spread <= 1e-9;
    Ok((pass, format!("slope_x {sx:.3} in [2.8, 3.3], slope_y {sy:.3} >= 3.5, circle radius spread {spread:.2e} (tol 1e-9)")))
}

fn birkhoff_orbits() -> Check {
    let circle = ConvexDomain::circle(1.0)?;
    let (mut worst_len, mut worst_res, mut count) = (0.0f64, 0.0f64, 0);
    for q in 2..=8i64 {
        for p in 1..q {
            if gcd(p, q) != 1 {
                continue;
            }
            let orbit = find_periodic_orbit(&circle, p, q, None)?;
            worst_len = worst_len.max((orbit.total_length - circle_orbit_length(1.0, p, q)).abs());
            worst_res = worst_res.max(orbit.residual);
            count += 1;
        }
    }
    let e = find_periodic_orbit(&ellipse(), 1, 2, None)?;
    worst_res = worst_res.max(e.residual);
    let ellipse_err = (e.total_length - 8.0).abs();
    let pass = worst_len <= 1e-8 && worst_res <= 1e-10 && ellipse_err <= 1e-9;
    Ok((
        pass,
        format!(
            "{count} circle orbits, length error {worst_len:.2e} (tol 1e-8); residual {worst_res:.2e} (tol 1e-10); ellipse ML(1/2) error {ellipse_err:.2e} (tol 1e-9)"
        ),
    ))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn beta_expansion() -> Check {
    let circle = ConvexDomain::circle(1.0)?;
    let rc = beta_expansion_check(&circle, &[10, 20, 40])?;
    let re = beta_expansion_check(&ellipse(), &[20, 50])?;
    let search = OrbitSearch::default();
    let mut violation = 0.0f64;
    for d in [circle.scaled(1.0 / circle.perimeter())?, ellipse().scaled(1.0 / ellipse().perimeter())?] {
        let grid = BetaGrid::build(&d, &farey_half(20), &search)?;
        violation = violation.max(convexity_violation(&grid.points()));
    }
    let pass = rc.max_deviation <= 0.02 && re.max_deviation <= 0.05 && violation <= 1e-9;
    Ok((
        pass,
        format!(
            "circle |r - 1| {:.2e} (tol 0.02), ellipse |r - 1| {:.2e} (tol 0.05), convexity violation {violation:.1e} (slack 1e-9)",
            rc.max_deviation, re.max_deviation
        ),
    ))
}

fn alpha_expansion() -> Check {
    let circle = ConvexDomain::circle(1.0 / (2.0 * PI))?;
    let c = circle.lazutkin_perimeter();
    // Maximizers for I = 1e-3, 1e-4 sit near omega = 0.016 and 0.005.
    let mut rotations = vec![(1, 2), (1, 3), (1, 4)];
    rotations.extend((5..=1000).map(|q| (1, q)));
    let grid = BetaGrid::build(&circle, &rotations, &OrbitSearch::default())?;
    let mut ratios = Vec::new();
    let mut edge = false;
    for i in [1e-3, 1e-4] {
        let a = grid.alpha(-1.0 + i)?;
        edge |= a.at_edge;
        ratios.push(a.value / (4.0 * 2f64.sqrt() / 3.0 * c.powf(-1.5) * i.powf(1.5)));
    }
    let pass = !edge && ratios.iter().all(|r| (0.9..=1.1).contains(r));
    Ok((pass, format!("ratios {:.5} and {:.5} (band [0.9, 1.1])", ratios[0], ratios[1])))
}

fn ellipse_integrability() -> Check {
    let d = ellipse();
    let mut drift = 0.0f64;
    for phi0 in [0.05, 0.3, 1.2] {
        drift = drift.max(conservation_defect(&d, PhasePoint::new(0.37, phi0), 10_000)?);
    }
    let level = first_integral_at(&d, PhasePoint::new(0.0, 0.3))?;
    let a = rotation_number(&d, level_set_start(&d, level, 0.4)?, 20_000)?;
    let b = rotation_number(&d, level_set_start(&d, level, 2.1)?, 20_000)?;
    let gap = (a.value - b.value).abs();
    let bound = a.error + b.error;
    let pass = drift <= 1e-8 && gap <= bound && !a.grazed && !b.grazed;
    Ok((
        pass,
        format!("integral drift {drift:.2e} (tol 1e-8); rotation numbers differ by {gap:.2e}, error estimate {bound:.2e}"),
    ))
}

fn rigidity() -> Check {
    let similar = [
        (ConvexDomain::circle(1.0)?, ConvexDomain::circle(3.0)?),
        (ellipse(), ellipse().rotated(PI / 5.0).scaled(1.7)?),
    ];
    let (mut sup, mut alpha, mut verdicts) = (0.0f64, 0.0f64, true);
    for (a, b) in &similar {
        let r = similarity_test(a, b)?;
        sup = sup.max(r.sup_delta);
        alpha = alpha.max(r.alpha_const.abs());
        verdicts &= r.verdict == Verdict::Similar;
    }
    let r = similarity_test(&ConvexDomain::circle(1.0)?, &ellipse())?;
    let floor = r.scan.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    let separated = floor >= 100.0 * TOL_DELTA && r.verdict == Verdict::NotSimilar;

    let (a, b) = (ellipse(), bumpy());
    let m = boundary_match(&a, &b, 0.13);
    let lb = b.perimeter();
    let h = 1e-5;
    let mut deriv = 0.0f64;
    for i in 0..40 {
        let s = a.perimeter() * (i as f64 + 0.5) / 40.0;
        let fd = arc_diff(m.shat(s + h), m.shat(s - h), lb) / (2.0 * h);
        deriv = deriv.max((fd - m.derivative(s)).abs());
    }
    let pass = sup <= TOL_DELTA && alpha <= TOL_ALPHA && verdicts && separated && deriv <= 1e-7;
    Ok((
        pass,
        format!(
            "similar pairs sup|Delta| {sup:.2e} (tol {TOL_DELTA:.0e}), |alpha| {alpha:.2e} (tol {TOL_ALPHA:.0e}); circle vs ellipse min over offsets {floor:.2e} -> {}; shat' error {deriv:.2e} (tol 1e-7)",
            r.verdict
        ),
    ))
}

fn reversibility_and_determinism() -> Check {
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for d in [ConvexDomain::circle(1.0)?, ellipse(), bumpy()] {
        for _ in 0..100 {
            let p = random_point(&mut rng, &d, 0.05);
            let back = step(&d, step(&d, p)?.reversed())?;
            let r = p.reversed();
            worst = worst.max(arc_gap(back.s, r.s, d.perimeter())).max((back.phi - r.phi).abs());
        }
    }
    let identical = cli_runs_identical()?;
    Ok((worst <= 1e-9 && identical, format!("reversal defect {worst:.2e} (tol 1e-9); repeated CLI runs identical: {identical}")))
}

fn cli_runs_identical() -> Result<bool, Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let domain = dir.path().join("ellipse.toml");
    std::fs::write(&domain, "kind = \"ellipse\"\na = 2.0\nb = 1.0\n")?;
    let runs: [&[&str]; 2] = [&["simulate", "--n", "2000", "--phi0", "0.4"], &["spectrum", "--qmax", "8"]];
    let mut same = true;
    for args in runs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{}-{k}", args[0]));
            let status = Command::new(env!("CARGO_BIN_EXE_billiards"))
                .args(args)
                .arg("--domain")
                .arg(&domain)
                .arg("--out")
                .arg(&out)
                .output()?;
            same &= status.status.success();
            outputs.push(read_dir_bytes(&out)?);
        }
        same &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    Ok(same)
}

fn read_dir_bytes(dir: &Path) -> std::io::Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        files.push((entry.file_name().to_string_lossy().into_owned(), std::fs::read(entry.path())?));
    }
    files.sort();
    Ok(files)
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("circle exactness", circle_exactness),
        ("generating function partials", generating_function),
        ("exact Jacobian", jacobian_matches_differences),
        ("first-order expansion", first_order_expansion),
        ("Lazutkin normal form", lazutkin_normal_form),
        ("Birkhoff orbits", birkhoff_orbits),
        ("beta expansion", beta_expansion),
        ("alpha expansion", alpha_expansion),
        ("ellipse integrability", ellipse_integrability),
        ("rigidity", rigidity),
        ("reversibility and determinism", reversibility_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
