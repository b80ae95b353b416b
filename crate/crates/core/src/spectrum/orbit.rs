//! Birkhoff periodic orbits as critical points of the total chord length.

use std::f64::consts::PI;

use crate::billiard_map::{angle_between, norm, step_with_advance, PhasePoint};
use crate::error::{BilliardError, Result};
use crate::geometry::ConvexDomain;
use crate::quad::golden_max;

/// A closed billiard trajectory with rotation number `p/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    pub p: i64,
    pub q: i64,
    /// Bounce points in traversal order, reduced to `[0, perimeter)`.
    pub nodes: Vec<f64>,
    /// Outgoing angle at each node.
    pub angles: Vec<f64>,
    pub total_length: f64,
    /// Largest mismatch between incoming and outgoing angle over the nodes.
    pub residual: f64,
}

impl PeriodicOrbit {
    pub fn rotation_number(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `sum_k ((s_{k+1} - s_k) mod l) / l`, rounded.
    pub fn winding(&self, perimeter: f64) -> i64 {
        let n = self.nodes.len();
        let total: f64 = (0..n)
            .map(|k| (self.nodes[(k + 1) % n] - self.nodes[k]).rem_euclid(perimeter))
            .sum();
        (total / perimeter).round() as i64
    }
}

/// Knobs of the orbit search.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSearch {
    /// Number of rotated equispaced seeds tried; the longest converged
    /// configuration wins.
    pub seeds: usize,
    /// Required reflection-law residual (radians).
    pub tolerance: f64,
    pub max_iterations: usize,
    /// When no equispaced seed converges, retry from orbit segments: from
    /// each seed offset, the launch angle whose `q`-th bounce lands exactly
    /// `p` turns further.
    pub shooting: bool,
}

impl Default for OrbitSearch {
    fn default() -> Self {
        Self { seeds: 8, tolerance: 1e-10, max_iterations: 200, shooting: true }
    }
}

impl OrbitSearch {
    /// Seed offsets: `j l / (seeds q)` for `j < seeds`. Shifting by `l/q`
    /// maps the equispaced configuration onto itself, so these cover all
    /// distinct rotations.
    pub fn seed_list(&self, domain: &ConvexDomain, p: i64, q: i64) -> Vec<Vec<f64>> {
        let l = domain.perimeter();
        (0..self.seeds.max(1))
            .map(|j| {
                let offset = j as f64 * l / (self.seeds.max(1) as f64 * q as f64);
                (0..q).map(|k| offset + k as f64 * p as f64 * l / q as f64).collect()
            })
            .collect()
    }

    /// Shooting seeds from the same offsets as [`seed_list`](Self::seed_list);
    /// offsets where the shot grazes are skipped.
    pub fn shooting_seeds(&self, domain: &ConvexDomain, p: i64, q: i64) -> Vec<Vec<f64>> {
        let l = domain.perimeter();
        let n = self.seeds.max(1);
        (0..n)
            .filter_map(|j| shooting_seed(domain, p, q, j as f64 * l / (n as f64 * q as f64)))
            .collect()
    }
}

/// Lifted nodes of the `q`-bounce segment from `s0` whose lifted endpoint
/// is `s0 + p l`. The endpoint is increasing in the launch angle (twist), so
/// the angle is a bracketed root.
fn shooting_seed(domain: &ConvexDomain, p: i64, q: i64, s0: f64) -> Option<Vec<f64>> {
    let l = domain.perimeter();
    let shoot = |phi: f64| -> Option<Vec<f64>> {
        let mut nodes = Vec::with_capacity(q as usize + 1);
        let mut at = PhasePoint::new(s0, phi);
        let mut lifted = s0;
        nodes.push(lifted);
        for _ in 0..q {
            let b = step_with_advance(domain, at).ok()?;
            lifted += b.advance;
            nodes.push(lifted);
            at = b.next;
        }
        Some(nodes)
    };
    // Illinois iteration on F(phi) = endpoint - s0 - p l, using the grazing
    // limits F(0) = -p l and F(pi) = (q - p) l as the initial bracket.
    let miss = |phi: f64| shoot(phi).map(|n| n[q as usize] - s0 - p as f64 * l);
    let (mut lo, mut hi) = (0.0, PI);
    let (mut flo, mut fhi) = (-(p as f64) * l, (q - p) as f64 * l);
    let mut side = 0;
    let mut phi = PI * p as f64 / q as f64;
    for _ in 0..100 {
        let f = miss(phi)?;
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = phi;
            flo = f;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = phi;
            fhi = f;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        phi = (lo * fhi - hi * flo) / (fhi - flo);
        if !(phi > lo && phi < hi) {
            phi = 0.5 * (lo + hi);
        }
    }
    let mut nodes = shoot(phi)?;
    nodes.pop();
    Some(nodes)
}

pub(crate) fn check_rotation(p: i64, q: i64) -> Result<()> {
    if q < 2 {
        return Err(BilliardError::RotationNumber { p, q, reason: "period must be at least 2" });
    }
    if p < 1 || p >= q {
        return Err(BilliardError::RotationNumber { p, q, reason: "winding must satisfy 1 <= p < q" });
    }
    if gcd(p, q) != 1 {
        return Err(BilliardError::RotationNumber { p, q, reason: "p/q must be in lowest terms" });
    }
    Ok(())
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// The maximal-length periodic orbit with rotation number `p/q`.
///
/// `seed`, when given, replaces the default seed sweep; it lists `q` arc
/// lengths visited in order with winding `p` (each gap in `(0, l)`).
/// Windings `p > q/2` describe the reversed orbit of `(q - p)/q`.
pub fn find_periodic_orbit(
    domain: &ConvexDomain,
    p: i64,
    q: i64,
    seed: Option<&[f64]>,
) -> Result<PeriodicOrbit> {
    find_periodic_orbit_with(domain, p, q, seed, &OrbitSearch::default())
}

pub fn find_periodic_orbit_with(
    domain: &ConvexDomain,
    p: i64,
    q: i64,
    seed: Option<&[f64]>,
    search: &OrbitSearch,
) -> Result<PeriodicOrbit> {
    let all = find_periodic_orbits(domain, p, q, seed, search)?;
    Ok(all.into_iter().next().expect("non-empty on success"))
}

/// Every distinct converged orbit reached from the seeds, longest first.
/// Orbits are identified up to cyclic relabelling of their nodes.
pub fn find_periodic_orbits(
    domain: &ConvexDomain,
    p: i64,
    q: i64,
    seed: Option<&[f64]>,
    search: &OrbitSearch,
) -> Result<Vec<PeriodicOrbit>> {
    check_rotation(p, q)?;
    let seeds = match seed {
        Some(s) => {
            if s.len() != q as usize {
                return Err(BilliardError::Unsupported(format!(
                    "seed has {} nodes, expected {q}",
                    s.len()
                )));
            }
            vec![lift_seed(domain, p, s)?]
        }
        None => search.seed_list(domain, p, q),
    };
    let mut found: Vec<PeriodicOrbit> = Vec::new();
    let mut best_residual = f64::INFINITY;
    for start in seeds {
        match refine(domain, p, start, search) {
            Ok(orbit) => {
                if !found.iter().any(|o| same_orbit(o, &orbit, domain.perimeter())) {
                    found.push(orbit);
                }
            }
            Err(residual) => best_residual = best_residual.min(residual),
        }
    }
    if found.is_empty() && seed.is_none() && search.shooting {
        for start in search.shooting_seeds(domain, p, q) {
            match refine(domain, p, start, search) {
                Ok(orbit) => {
                    if !found.iter().any(|o| same_orbit(o, &orbit, domain.perimeter())) {
                        found.push(orbit);
                    }
                }
                Err(residual) => best_residual = best_residual.min(residual),
            }
        }
    }
    if found.is_empty() {
        return Err(BilliardError::SearchFailed { p, q, best_residual });
    }
    found.sort_by(|a, b| b.total_length.total_cmp(&a.total_length));
    for orbit in &found {
        let w = orbit.winding(domain.perimeter());
        if w != p {
            return Err(BilliardError::Winding { expected: p, found: w });
        }
    }
    Ok(found)
}

fn lift_seed(domain: &ConvexDomain, p: i64, seed: &[f64]) -> Result<Vec<f64>> {
    let l = domain.perimeter();
    let mut lifted = Vec::with_capacity(seed.len());
    let mut current = seed[0];
    lifted.push(current);
    for pair in seed.windows(2) {
        let gap = (pair[1] - pair[0]).rem_euclid(l);
        current += gap;
        lifted.push(current);
    }
    let closing = (seed[0] - seed[seed.len() - 1]).rem_euclid(l);
    let winding = ((current + closing - seed[0]) / l).round() as i64;
    if winding != p {
        return Err(BilliardError::Winding { expected: p, found: winding });
    }
    Ok(lifted)
}

fn same_orbit(a: &PeriodicOrbit, b: &PeriodicOrbit, l: f64) -> bool {
    let mut x = a.nodes.clone();
    let mut y = b.nodes.clone();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let tol = 1e-7 * l;
    // Same point set up to where the cyclic order starts.
    (0..y.len()).any(|shift| {
        x.iter().enumerate().all(|(i, v)| {
            let d = (v - y[(i + shift) % y.len()]).rem_euclid(l);
            d.min(l - d) <= tol
        })
    })
}

/// Chord data for a lifted configuration `x_0 < ... < x_{q-1}`, closed by
/// `x_q = x_0 + p l`.
struct Configuration {
    length: f64,
    gradient: Vec<f64>,
    diag: Vec<f64>,
    /// `offdiag[k]` couples `k` and `k + 1 (mod q)`.
    offdiag: Vec<f64>,
    residual: f64,
    angles: Vec<f64>,
}

fn evaluate(domain: &ConvexDomain, p: i64, x: &[f64]) -> Configuration {
    let q = x.len();
    let l = domain.perimeter();
    let end = |k: usize| if k == q { x[0] + p as f64 * l } else { x[k] };
    let tangents: Vec<[f64; 2]> = x.iter().map(|&s| domain.tangent(s)).collect();
    let kappas: Vec<f64> = x.iter().map(|&s| domain.curvature(s)).collect();

    let mut length = Neumaier::default();
    // Per chord: length, outgoing angle at the start, arrival angle at the end.
    let mut chords = Vec::with_capacity(q);
    for k in 0..q {
        let d = domain.chord_vector(x[k], end(k + 1));
        let len = norm(d);
        length.add(len);
        let out = angle_between(tangents[k], d);
        let arrive = angle_between(d, tangents[(k + 1) % q]);
        chords.push((len, out, arrive));
    }
    let mut gradient = vec![0.0; q];
    let mut diag = vec![0.0; q];
    let mut offdiag = vec![0.0; q];
    let mut residual = 0.0f64;
    for k in 0..q {
        let (len_in, _, arrive) = chords[(k + q - 1) % q];
        let (len_out, out, arrive_next) = chords[k];
        gradient[k] = arrive.cos() - out.cos();
        residual = residual.max((arrive - out).abs());
        let (si, so) = (arrive.sin(), out.sin());
        diag[k] = si * si / len_in - kappas[k] * si + so * so / len_out - kappas[k] * so;
        offdiag[k] = so * arrive_next.sin() / len_out;
    }
    Configuration {
        length: length.total(),
        gradient,
        diag,
        offdiag,
        residual,
        angles: chords.iter().map(|c| c.1).collect(),
    }
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.c
    }
}

fn ordered(domain: &ConvexDomain, p: i64, x: &[f64]) -> bool {
    let l = domain.perimeter();
    let q = x.len();
    (0..q).all(|k| {
        let next = if k + 1 == q { x[0] + p as f64 * l } else { x[k + 1] };
        let gap = next - x[k];
        gap > 0.0 && gap < l
    })
}

/// Relative length loss tolerated for a step that halves the residual.
const FLAT_LENGTH: f64 = 1e-12;
const STALL_WINDOW: usize = 25;

/// Damped Newton ascent on the total length; falls back to cyclic
/// coordinate ascent when the damping saturates. Returns the best residual
/// on failure.
fn refine(domain: &ConvexDomain, p: i64, mut x: Vec<f64>, search: &OrbitSearch) -> std::result::Result<PeriodicOrbit, f64> {
    let mut fallback_used = false;
    let mut conf = evaluate(domain, p, &x);
    let mu_min = 1e-10;
    let mut mu = 1e-3;
    let mut iterations = 0;
    let mut checkpoint = conf.residual;
    while conf.residual > 0.1 * search.tolerance {
        iterations += 1;
        // Less than a halving of the residual per STALL_WINDOW iterations
        // counts as a stall.
        let stalled = iterations % STALL_WINDOW == 0 && conf.residual > 0.5 * checkpoint;
        if iterations % STALL_WINDOW == 0 {
            checkpoint = conf.residual;
        }
        if stalled || iterations > search.max_iterations || mu > 1e12 {
            if fallback_used {
                break;
            }
            fallback_used = true;
            coordinate_ascent(domain, p, &mut x, 50);
            conf = evaluate(domain, p, &x);
            mu = 1e-3;
            iterations = 0;
            checkpoint = conf.residual;
            continue;
        }
        // (mu D - H) delta = g with D = |diag H|
        let a: Vec<f64> = conf.diag.iter().map(|d| mu * d.abs() - d).collect();
        let off: Vec<f64> = conf.offdiag.iter().map(|o| -o).collect();
        let delta = match solve_cyclic(&a, &off, &conf.gradient) {
            Some(d) => d,
            None => {
                mu *= 10.0;
                continue;
            }
        };
        let trial: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + b).collect();
        if !ordered(domain, p, &trial) {
            mu *= 10.0;
            continue;
        }
        let next = evaluate(domain, p, &trial);
        let slack = 4.0 * f64::EPSILON * conf.length * (x.len() as f64).sqrt();
        // Near a degenerate family (integrable tables) the length is flat to
        // rounding; there a halved residual at a negligible length cost is progress.
        let accept = next.length > conf.length + slack
            || (next.length >= conf.length - slack && next.residual < conf.residual)
            || (next.length >= conf.length * (1.0 - FLAT_LENGTH) && next.residual < 0.5 * conf.residual);
        if accept {
            x = trial;
            conf = next;
            mu = (mu / 10.0).max(mu_min);
        } else {
            mu *= 10.0;
        }
    }
    if conf.residual > search.tolerance {
        return Err(conf.residual);
    }
    let q = x.len() as i64;
    Ok(PeriodicOrbit {
        p,
        q,
        nodes: x.iter().map(|&s| domain.normalize(s)).collect(),
        angles: conf.angles,
        total_length: conf.length,
        residual: conf.residual,
    })
}

/// Cyclic sweeps maximizing the two chords adjacent to each node.
fn coordinate_ascent(domain: &ConvexDomain, p: i64, x: &mut [f64], sweeps: usize) {
    let q = x.len();
    let l = domain.perimeter();
    for _ in 0..sweeps {
        for k in 0..q {
            let prev = if k == 0 { x[q - 1] - p as f64 * l } else { x[k - 1] };
            let next = if k + 1 == q { x[0] + p as f64 * l } else { x[k + 1] };
            let (pp, pn) = (domain.position(prev), domain.position(next));
            let local = |s: f64| {
                let c = domain.position(s);
                norm([c[0] - pp[0], c[1] - pp[1]]) + norm([pn[0] - c[0], pn[1] - c[1]])
            };
            let margin = 1e-9 * (next - prev);
            let (best, _) = golden_max(local, prev + margin, next - margin, 1e-12 * l);
            x[k] = best;
        }
    }
}

/// Solve `A z = b` for the symmetric cyclic tridiagonal `A` with diagonal
/// `diag` and `A[k][k+1 mod n] = off[k]`. Returns `None` on a zero pivot.
fn solve_cyclic(diag: &[f64], off: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    match n {
        0 => return Some(vec![]),
        1 => return Some(vec![b[0] / diag[0]]),
        2 => {
            let c = off[0] + off[1];
            let det = diag[0] * diag[1] - c * c;
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            return Some(vec![(b[0] * diag[1] - c * b[1]) / det, (diag[0] * b[1] - c * b[0]) / det]);
        }
        _ => {}
    }
    // Sherman-Morrison: A = T + u v^T with u = (gamma, 0.., corner),
    // v = (1, 0.., corner / gamma).
    let corner = off[n - 1];
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= corner * corner / gamma;
    let sub: Vec<f64> = off[..n - 1].to_vec();
    let x = solve_tridiagonal(&sub, &bb, &sub, b)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner;
    let z = solve_tridiagonal(&sub, &bb, &sub, &u)?;
    let fact = (x[0] + corner * x[n - 1] / gamma) / (1.0 + z[0] + corner * z[n - 1] / gamma);
    if !fact.is_finite() {
        return None;
    }
    Some(x.iter().zip(&z).map(|(a, b)| a - fact * b).collect())
}

/// Thomas algorithm; `lower[i] = A[i+1][i]`, `upper[i] = A[i][i+1]`.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return None;
    }
    d[0] = rhs[0] / beta;
    for i in 1..n {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i - 1] * c[i];
        if beta == 0.0 || !beta.is_finite() {
            return None;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i + 1] * d[i + 1];
    }
    Some(d)
}

/// Polygon length `2 q r sin(pi p / q)` of the regular `p/q` star inscribed
/// in a circle of radius `r`.
pub fn circle_orbit_length(r: f64, p: i64, q: i64) -> f64 {
    2.0 * q as f64 * r * (PI * p as f64 / q as f64).sin()
}
