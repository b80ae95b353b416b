use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use convex_billiards::billiard_map::step;
use convex_billiards::{ConvexDomain, PhasePoint, SupportFunction};
use proptest::prelude::*;
use tempfile::TempDir;

const CIRCLE: &str = "kind = \"circle\"\nr = 1.0\n";
const ELLIPSE: &str = "kind = \"ellipse\"\na = 2.0\nb = 1.0\n";
const ROTATED_COPY: &str = "kind = \"ellipse\"\na = 2.0\nb = 1.0\nrotate = 0.6\nscale = 1.7\n";
const BUMP: &str = "kind = \"support\"\nc0 = 1.0\ncos = [0.0, 0.0, 1e-7]\nsin = []\n";

fn domain(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn billiards(args: &[&str], domains: &[&Path], out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_billiards"));
    cmd.args(args);
    for d in domains {
        cmd.arg("--domain").arg(d);
    }
    cmd.arg("--out").arg(out).output().unwrap()
}

fn files(dir: &Path) -> Vec<String> {
    let Ok(entries) = std::fs::read_dir(dir) else { return Vec::new() };
    let mut names: Vec<String> = entries.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn simulate_writes_orbit_and_picture() {
    let dir = TempDir::new().unwrap();
    let e = domain(&dir, "e.toml", ELLIPSE);
    let out = dir.path().join("out");
    let o = billiards(&["simulate", "--n", "500"], &[&e], &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(files(&out), ["orbit.csv", "orbit.svg"]);
    let csv = std::fs::read_to_string(out.join("orbit.csv")).unwrap();
    assert!(csv.starts_with("# billiards simulate"));
    assert!(csv.lines().nth(1).unwrap().contains("integral_defect"));
}

#[test]
fn orbits_and_lazutkin_succeed() {
    let dir = TempDir::new().unwrap();
    let e = domain(&dir, "e.toml", ELLIPSE);
    let out = dir.path().join("orbits");
    assert_eq!(billiards(&["orbits", "--p", "2", "--q", "5"], &[&e], &out).status.code(), Some(0));
    assert_eq!(files(&out), ["periodic_orbit.csv", "periodic_orbit.svg"]);
    let out = dir.path().join("lazutkin");
    assert_eq!(billiards(&["lazutkin"], &[&e], &out).status.code(), Some(0));
    assert_eq!(files(&out), ["lazutkin.csv", "lazutkin.txt"]);
}

#[test]
fn rigidity_exit_codes_follow_the_verdict() {
    let dir = TempDir::new().unwrap();
    let c = domain(&dir, "c.toml", CIRCLE);
    let e = domain(&dir, "e.toml", ELLIPSE);
    let copy = domain(&dir, "copy.toml", ROTATED_COPY);
    let bump = domain(&dir, "bump.toml", BUMP);
    let cases = [(&e, &copy, 0, "similar"), (&c, &e, 1, "not_similar"), (&c, &bump, 2, "inconclusive")];
    for (k, (a, b, code, verdict)) in cases.into_iter().enumerate() {
        let out = dir.path().join(format!("r{k}"));
        let o = billiards(&["rigidity"], &[a, b], &out);
        assert_eq!(o.status.code(), Some(code));
        let text = std::fs::read_to_string(out.join("rigidity.txt")).unwrap();
        assert!(text.contains(&format!("verdict = {verdict}\n")), "{text}");
    }
}

#[test]
fn bad_input_is_a_usage_error_without_output() {
    let dir = TempDir::new().unwrap();
    let e = domain(&dir, "e.toml", ELLIPSE);
    let missing = dir.path().join("missing.toml");
    let cases: [(&[&str], Vec<&Path>); 5] = [
        (&["simulate"], vec![missing.as_path()]),
        (&["spectrum", "--qmax", "1"], vec![e.as_path()]),
        (&["orbits", "--p", "3", "--q", "4"], vec![e.as_path()]),
        (&["rigidity"], vec![e.as_path()]),
        (&["simulate", "--tolerance", "defect=-1"], vec![e.as_path()]),
    ];
    for (k, (args, domains)) in cases.iter().enumerate() {
        let out = dir.path().join(format!("bad{k}"));
        let o = billiards(args, domains, &out);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
        assert!(files(&out).is_empty(), "{args:?}");
    }
}

#[test]
fn non_convex_domain_is_rejected() {
    let dir = TempDir::new().unwrap();
    let d = domain(&dir, "d.toml", "kind = \"support\"\nc0 = 1.0\ncos = [0.0, 0.0, 0.2]\n");
    let out = dir.path().join("out");
    assert_eq!(billiards(&["simulate"], &[&d], &out).status.code(), Some(2));
    assert!(files(&out).is_empty());
}

#[test]
fn spectrum_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let e = domain(&dir, "e.toml", ELLIPSE);
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|k| {
            let out = dir.path().join(format!("s{k}"));
            assert_eq!(billiards(&["spectrum", "--qmax", "7"], &[&e], &out).status.code(), Some(0));
            std::fs::read(out.join("spectrum.csv")).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let text = String::from_utf8(runs[0].clone()).unwrap();
    assert!(text.lines().any(|l| l == "p,q,omega,length,beta,residual,error"));
}

fn tables() -> [ConvexDomain; 3] {
    [
        ConvexDomain::circle(0.8).unwrap(),
        ConvexDomain::ellipse(1.5, 1.0).unwrap(),
        ConvexDomain::from_support(SupportFunction::new(1.0, vec![0.0, 0.05, 0.02], vec![0.01])).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn time_reversal(which in 0usize..3, u in 0.0f64..1.0, phi in 0.05f64..PI - 0.05) {
        let d = &tables()[which];
        let l = d.perimeter();
        let p = PhasePoint::new(u * l, phi);
        let back = step(d, step(d, p).unwrap().reversed()).unwrap();
        let gap = (back.s - p.s + 0.5 * l).rem_euclid(l) - 0.5 * l;
        prop_assert!(gap.abs() <= 1e-9);
        prop_assert!((back.phi - (PI - phi)).abs() <= 1e-9);
    }
}
