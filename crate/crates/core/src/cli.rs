//! Command layer behind the `billiards` binary.
//!
//! Every command loads and validates its inputs before touching the output
//! directory, so a bad invocation leaves nothing behind. Each output file
//! starts with a `#` comment echoing the effective settings; no timestamps,
//! so identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::billiard_map::{iterate, PhasePoint};
use crate::error::BilliardError;
use crate::geometry::{read_domain_file, ConvexDomain, DomainKind};
use crate::integrable::integral_along;
use crate::lazutkin::{diagnostics_csv, normal_form_exponents_with, DEFECT_FLOOR};
use crate::output::{fmt_f64, orbit_csv, orbit_svg};
use crate::rigidity::{similarity_test_with, RigidityOptions, TOL_ALPHA, TOL_DELTA};
use crate::spectrum::{find_periodic_orbit_with, marked_length_spectrum_with, spectrum_csv, OrbitSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Orbits,
    Spectrum,
    Rigidity,
    Lazutkin,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Orbits => "orbits",
            Command::Spectrum => "spectrum",
            Command::Rigidity => "rigidity",
            Command::Lazutkin => "lazutkin",
        }
    }

    /// Tolerances a command accepts, with defaults.
    pub fn default_tolerances(self) -> BTreeMap<&'static str, f64> {
        let pairs: &[(&'static str, f64)] = match self {
            Command::Simulate => &[("defect", 1e-8)],
            Command::Orbits => &[("residual", 1e-10)],
            Command::Spectrum => &[("residual", 1e-10), ("converged", 0.9)],
            Command::Rigidity => &[("delta", TOL_DELTA), ("alpha", TOL_ALPHA)],
            Command::Lazutkin => &[("floor", DEFECT_FLOOR)],
        };
        pairs.iter().copied().collect()
    }

    fn domain_count(self) -> usize {
        match self {
            Command::Rigidity => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub domains: Vec<PathBuf>,
    pub out: PathBuf,
    pub n: Option<usize>,
    pub q_max: Option<i64>,
    pub s0: Option<f64>,
    pub phi0: Option<f64>,
    pub p: Option<i64>,
    pub q: Option<i64>,
    /// `name=value` overrides.
    pub tolerances: Vec<String>,
}

impl RunConfig {
    pub fn new(command: Command, domains: Vec<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            command,
            domains,
            out: out.into(),
            n: None,
            q_max: None,
            s0: None,
            phi0: None,
            p: None,
            q: None,
            tolerances: Vec::new(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] BilliardError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io { .. } => 3,
        }
    }
}

/// Result of a successful command: the files written, a short summary for
/// the terminal, and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// `name=value` overrides applied on top of a command's defaults.
pub fn parse_tolerances(command: Command, overrides: &[String]) -> Result<BTreeMap<&'static str, f64>, CliError> {
    let mut tol = command.default_tolerances();
    for item in overrides {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tolerance must be name=value, got {item:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("tolerance {name:?} has a non-numeric value {value:?}")))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::Usage(format!("tolerance {name:?} must be positive, got {value}")));
        }
        let slot = tol.get_mut(name.trim()).ok_or_else(|| {
            let known: Vec<&str> = command.default_tolerances().keys().copied().collect();
            CliError::Usage(format!("{} accepts tolerances {known:?}, not {name:?}", command.name()))
        })?;
        *slot = value;
    }
    Ok(tol)
}

fn load_domain(path: &Path) -> Result<ConvexDomain, CliError> {
    read_domain_file(path)
        .and_then(|spec| spec.build())
        .map_err(|e| CliError::Usage(e.to_string()))
}

struct Header {
    line: String,
}

impl Header {
    fn new(config: &RunConfig, tol: &BTreeMap<&'static str, f64>) -> Self {
        let mut line = format!("# billiards {}", config.command.name());
        for d in &config.domains {
            let _ = write!(line, " domain={}", d.display());
        }
        let options: [(&str, Option<String>); 6] = [
            ("n", config.n.map(|v| v.to_string())),
            ("qmax", config.q_max.map(|v| v.to_string())),
            ("s0", config.s0.map(|v| v.to_string())),
            ("phi0", config.phi0.map(|v| v.to_string())),
            ("p", config.p.map(|v| v.to_string())),
            ("q", config.q.map(|v| v.to_string())),
        ];
        for (k, v) in options {
            if let Some(v) = v {
                let _ = write!(line, " {k}={v}");
            }
        }
        for (k, v) in tol {
            let _ = write!(line, " tol.{k}={v:e}");
        }
        line.push('\n');
        Self { line }
    }

    fn with(&self, body: &str) -> String {
        format!("{}{body}", self.line)
    }
}

fn write_all(dir: &Path, files: Vec<(&str, String)>) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}

/// Validate, compute, then write. Usage errors are reported before any
/// output exists.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let expected = config.command.domain_count();
    if config.domains.len() != expected {
        return Err(CliError::Usage(format!(
            "{} needs {expected} --domain file(s), got {}",
            config.command.name(),
            config.domains.len()
        )));
    }
    match config.command {
        Command::Simulate => cmd_simulate(config),
        Command::Orbits => cmd_orbits(config),
        Command::Spectrum => cmd_spectrum(config),
        Command::Rigidity => cmd_rigidity(config),
        Command::Lazutkin => cmd_lazutkin(config),
    }
}

/// Orbit table and picture for `n` bounces from `(s0, phi0)`. Elliptic
/// tables get an extra `integral_defect` column.
pub fn cmd_simulate(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = parse_tolerances(Command::Simulate, &config.tolerances)?;
    let domain = load_domain(&config.domains[0])?;
    let n = config.n.unwrap_or(500);
    let s0 = config.s0.unwrap_or(0.0);
    let phi0 = config.phi0.unwrap_or(0.3);
    if !(phi0 > 0.0 && phi0 < std::f64::consts::PI) {
        return Err(CliError::Usage(format!("phi0 must lie in (0, pi), got {phi0}")));
    }
    let mut cfg = config.clone();
    cfg.n = Some(n);
    cfg.s0 = Some(s0);
    cfg.phi0 = Some(phi0);
    let header = Header::new(&cfg, &tol);

    let orbit = iterate(&domain, PhasePoint::new(domain.normalize(s0), phi0), n)?;
    let table = orbit_csv(&domain, &orbit);
    let (csv, summary) = if matches!(domain.kind(), DomainKind::Ellipse { a, b } if a > b) {
        let values = integral_along(&domain, &orbit)?;
        let mut out = String::new();
        let mut worst = 0.0f64;
        for (i, line) in table.lines().enumerate() {
            if i == 0 {
                out.push_str(line);
                out.push_str(",integral_defect\n");
            } else {
                let d = values[i - 1] - values[0];
                worst = worst.max(d.abs());
                let _ = writeln!(out, "{line},{}", fmt_f64(d));
            }
        }
        if worst > tol["defect"] {
            return Err(CliError::Numerical(BilliardError::NoConvergence {
                what: "first integral conservation",
                lo: 0.0,
                hi: tol["defect"],
                residual: worst,
            }));
        }
        (out, format!("{n} bounces, max first-integral defect {worst:e}"))
    } else {
        (table, format!("{n} bounces"))
    };
    let files = write_all(
        &config.out,
        vec![("orbit.csv", header.with(&csv)), ("orbit.svg", orbit_svg(&domain, &orbit))],
    )?;
    Ok(Outcome { exit_code: 0, summary, files })
}

/// The maximal periodic orbit of rotation number `p/q`.
pub fn cmd_orbits(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = parse_tolerances(Command::Orbits, &config.tolerances)?;
    let (p, q) = match (config.p, config.q) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(CliError::Usage("orbits needs --p and --q".into())),
    };
    if q < 2 || p < 1 || 2 * p > q {
        return Err(CliError::Usage(format!("need 1 <= p <= q/2 and q >= 2, got p = {p}, q = {q}")));
    }
    let domain = load_domain(&config.domains[0])?;
    let header = Header::new(config, &tol);
    let search = OrbitSearch { tolerance: tol["residual"], ..OrbitSearch::default() };
    let orbit = find_periodic_orbit_with(&domain, p, q, None, &search)?;
    let nodes: Vec<PhasePoint> =
        orbit.nodes.iter().zip(&orbit.angles).map(|(&s, &phi)| PhasePoint::new(s, phi)).collect();
    let mut closed = nodes.clone();
    closed.push(nodes[0]);
    let summary = format!(
        "p/q = {p}/{q}: length {}, residual {:e}",
        fmt_f64(orbit.total_length),
        orbit.residual
    );
    let body = format!("# total_length={} residual={:e}\n{}", fmt_f64(orbit.total_length), orbit.residual, orbit_csv(&domain, &nodes));
    let files = write_all(
        &config.out,
        vec![("periodic_orbit.csv", header.with(&body)), ("periodic_orbit.svg", orbit_svg(&domain, &closed))],
    )?;
    Ok(Outcome { exit_code: 0, summary, files })
}

/// Marked length spectrum up to `q_max`. Succeeds when at least the
/// `converged` fraction of entries converged.
pub fn cmd_spectrum(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = parse_tolerances(Command::Spectrum, &config.tolerances)?;
    let q_max = config.q_max.unwrap_or(10);
    if q_max < 2 {
        return Err(CliError::Usage(format!("qmax must be at least 2, got {q_max}")));
    }
    let domain = load_domain(&config.domains[0])?;
    let mut cfg = config.clone();
    cfg.q_max = Some(q_max);
    let header = Header::new(&cfg, &tol);
    let search = OrbitSearch { tolerance: tol["residual"], ..OrbitSearch::default() };
    let entries = marked_length_spectrum_with(&domain, q_max, &search)?;
    let ok = entries.iter().filter(|e| e.sample.is_ok()).count();
    let fraction = ok as f64 / entries.len() as f64;
    let files = write_all(&config.out, vec![("spectrum.csv", header.with(&spectrum_csv(&entries)))])?;
    let exit_code = if fraction >= tol["converged"] { 0 } else { 3 };
    Ok(Outcome { exit_code, summary: format!("{ok} of {} orbits converged", entries.len()), files })
}

/// Similarity verdict for two domains; exit code 0, 1 or 2 for similar,
/// not similar and inconclusive.
pub fn cmd_rigidity(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = parse_tolerances(Command::Rigidity, &config.tolerances)?;
    let a = load_domain(&config.domains[0])?;
    let b = load_domain(&config.domains[1])?;
    let header = Header::new(config, &tol);
    let options = RigidityOptions { tol_delta: tol["delta"], tol_alpha: tol["alpha"], ..RigidityOptions::default() };
    let report = similarity_test_with(&a, &b, &options)?;
    let files = write_all(
        &config.out,
        vec![("rigidity.txt", header.with(&report.to_text())), ("rigidity.csv", header.with(&report.to_csv()))],
    )?;
    Ok(Outcome {
        exit_code: report.verdict.exit_code(),
        summary: format!("{} (sup |delta| = {:e}, alpha = {:e})", report.verdict, report.sup_delta, report.alpha_const),
        files,
    })
}

/// Normal-form defects in Lazutkin coordinates and their fitted orders.
pub fn cmd_lazutkin(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = parse_tolerances(Command::Lazutkin, &config.tolerances)?;
    let domain = load_domain(&config.domains[0])?;
    let header = Header::new(config, &tol);
    let fit = normal_form_exponents_with(&domain, tol["floor"])?;
    let show = |v: Option<f64>| v.map_or_else(|| "at_noise_floor".to_string(), fmt_f64);
    let spread = |v: Option<(f64, f64)>| v.map_or_else(|| "none".to_string(), |(lo, hi)| format!("{} {}", fmt_f64(lo), fmt_f64(hi)));
    let text = format!(
        "slope_x = {}\nslope_y = {}\nspread_x = {}\nspread_y = {}\nsamples = {}\n",
        show(fit.slope_x),
        show(fit.slope_y),
        spread(fit.spread_x),
        spread(fit.spread_y),
        fit.samples.len()
    );
    let summary = format!("slope_x {}, slope_y {}", show(fit.slope_x), show(fit.slope_y));
    let files = write_all(
        &config.out,
        vec![("lazutkin.csv", header.with(&diagnostics_csv(&fit.samples))), ("lazutkin.txt", header.with(&text))],
    )?;
    Ok(Outcome { exit_code: 0, summary, files })
}
