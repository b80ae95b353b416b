//! Integrability diagnostics for elliptic tables.
//!
//! For the ellipse `x = a cos t, y = b sin t` with foci `(+-h, 0)`,
//! `a = h cosh mu0`, the quantity
//! `I(t, phi) = cosh^2(mu0) cos^2(phi) + cos^2(t) sin^2(phi)` is constant
//! along billiard orbits. Levels above the focal level belong to orbits
//! tangent to a confocal ellipse, levels below it to orbits tangent to a
//! confocal hyperbola.

use std::fmt;
use std::fmt::Write as _;

use crate::billiard_map::{angle_between, iterate, step, PhasePoint};
use crate::error::{BilliardError, Result};
use crate::geometry::{ConvexDomain, DomainKind};
use crate::output::fmt_f64;
use crate::spectrum::{rotation_number, RotationEstimate};

/// Levels within this distance of the separatrix are classified as on it.
pub const SEPARATRIX_TOL: f64 = 1e-9;
/// Bounces used for rotation numbers of caustic levels.
pub const CAUSTIC_ROTATION_STEPS: usize = 4096;

fn semi_axes(domain: &ConvexDomain) -> Result<(f64, f64)> {
    match domain.kind() {
        DomainKind::Ellipse { a, b } if a > b => Ok((*a, *b)),
        DomainKind::Ellipse { .. } | DomainKind::Circle { .. } => Err(BilliardError::Unsupported(
            "circle has no focal parametrization; its integral is phi itself".into(),
        )),
        DomainKind::Support(_) => Err(BilliardError::Unsupported("first integral needs an elliptic domain".into())),
    }
}

/// `cosh^2(mu0) = a^2 / (a^2 - b^2)` with `a` the major semi-axis.
pub fn cosh2_mu0(domain: &ConvexDomain) -> Result<f64> {
    let (a, b) = semi_axes(domain)?;
    Ok(a * a / (a * a - b * b))
}

/// Distance from the centre to either focus, `sqrt(a^2 - b^2)`.
pub fn focal_distance(domain: &ConvexDomain) -> Result<f64> {
    let (a, b) = semi_axes(domain)?;
    Ok(domain.scale() * (a * a - b * b).sqrt())
}

pub fn elliptic_first_integral(domain: &ConvexDomain, theta: f64, phi: f64) -> Result<f64> {
    let c2 = cosh2_mu0(domain)?;
    let (sp, cp) = phi.sin_cos();
    let ct = theta.cos();
    Ok(c2 * cp * cp + ct * ct * sp * sp)
}

/// The first integral at a phase point.
pub fn first_integral_at(domain: &ConvexDomain, p: PhasePoint) -> Result<f64> {
    elliptic_first_integral(domain, domain.base_parameter(p.s), p.phi)
}

/// `max_k |I_k - I_0|` along `n` bounces from `p0`.
pub fn conservation_defect(domain: &ConvexDomain, p0: PhasePoint, n: usize) -> Result<f64> {
    let i0 = first_integral_at(domain, p0)?;
    let mut worst = 0.0f64;
    let mut p = p0;
    for k in 0..n {
        p = step(domain, p).map_err(|e| BilliardError::OrbitStep { index: k, source: Box::new(e) })?;
        worst = worst.max((first_integral_at(domain, p)? - i0).abs());
    }
    Ok(worst)
}

/// Integral along every point of an orbit.
pub fn integral_along(domain: &ConvexDomain, orbit: &[PhasePoint]) -> Result<Vec<f64>> {
    orbit.iter().map(|p| first_integral_at(domain, *p)).collect()
}

/// Level of the orbit through a focus: launched from the major vertex
/// towards the focus `(+h, 0)`.
pub fn separatrix_level(domain: &ConvexDomain) -> Result<f64> {
    separatrix_level_from(domain, 0.0)
}

/// Level of the ray from eccentric angle `theta` aimed at the focus `(+h, 0)`; independent of `theta`.
pub fn separatrix_level_from(domain: &ConvexDomain, theta: f64) -> Result<f64> {
    let s = domain.arc_of_parameter(theta);
    let h = focal_distance(domain)?;
    let angle = domain.rotation();
    let focus = [h * angle.cos(), h * angle.sin()];
    let x = domain.position(s);
    let phi = angle_between(domain.tangent(s), [focus[0] - x[0], focus[1] - x[1]]);
    elliptic_first_integral(domain, theta, phi)
}

/// Phase point with first integral `level` at eccentric angle `theta`,
/// moving counterclockwise (`phi <= pi/2`).
pub fn level_set_start(domain: &ConvexDomain, level: f64, theta: f64) -> Result<PhasePoint> {
    let c2 = cosh2_mu0(domain)?;
    let ct2 = theta.cos().powi(2);
    let cos2 = (level - ct2) / (c2 - ct2);
    if !(0.0..=1.0).contains(&cos2) {
        return Err(BilliardError::Range { value: level, lo: ct2, hi: c2 });
    }
    Ok(PhasePoint::new(domain.normalize(domain.arc_of_parameter(theta)), cos2.sqrt().acos()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Caustic {
    ConfocalEllipse,
    ConfocalHyperbola,
    Separatrix,
}

impl fmt::Display for Caustic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Caustic::ConfocalEllipse => "confocal_ellipse",
            Caustic::ConfocalHyperbola => "confocal_hyperbola",
            Caustic::Separatrix => "separatrix",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticClass {
    pub integral_value: f64,
    pub class: Caustic,
    /// Only for confocal-ellipse levels strictly inside the attainable range.
    pub rotation_number: Option<RotationEstimate>,
}

/// Classify the level `I` against the focal level; attainable levels lie in
/// `[0, cosh^2 mu0]`.
pub fn classify_caustic(domain: &ConvexDomain, level: f64) -> Result<CausticClass> {
    let c2 = cosh2_mu0(domain)?;
    if !(0.0..=c2).contains(&level) {
        return Err(BilliardError::Range { value: level, lo: 0.0, hi: c2 });
    }
    let sep = separatrix_level(domain)?;
    let class = if (level - sep).abs() <= SEPARATRIX_TOL {
        Caustic::Separatrix
    } else if level > sep {
        Caustic::ConfocalEllipse
    } else {
        Caustic::ConfocalHyperbola
    };
    let rotation_number = if class == Caustic::ConfocalEllipse && level < c2 {
        let p0 = level_set_start(domain, level, 0.0)?;
        Some(rotation_number(domain, p0, CAUSTIC_ROTATION_STEPS)?)
    } else {
        None
    };
    Ok(CausticClass { integral_value: level, class, rotation_number })
}

/// Caustic scan table with columns `I, class, rotation_number, rotation_error`.
pub fn caustic_csv(rows: &[CausticClass]) -> String {
    let mut out = String::from("I,class,rotation_number,rotation_error\n");
    for r in rows {
        let (rho, err) = match r.rotation_number {
            Some(e) => (fmt_f64(e.value), fmt_f64(e.error)),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(out, "{},{},{},{}", fmt_f64(r.integral_value), r.class, rho, err);
    }
    out
}

/// Whether the chord from `p` crosses the major axis strictly between the
/// foci.
pub fn crosses_focal_segment(domain: &ConvexDomain, p: PhasePoint) -> Result<bool> {
    let h = focal_distance(domain)?;
    let (sa, ca) = domain.rotation().sin_cos();
    let to_axes = |x: [f64; 2]| [ca * x[0] + sa * x[1], -sa * x[0] + ca * x[1]];
    let q = step(domain, p)?;
    let (x0, x1) = (to_axes(domain.position(p.s)), to_axes(domain.position(q.s)));
    if x0[1] * x1[1] > 0.0 || x0[1] == x1[1] {
        return Ok(false);
    }
    let t = x0[1] / (x0[1] - x1[1]);
    let x = x0[0] + t * (x1[0] - x0[0]);
    Ok(x.abs() < h)
}

/// First integral sampled along an orbit of `n` bounces.
pub fn integral_trace(domain: &ConvexDomain, p0: PhasePoint, n: usize) -> Result<Vec<f64>> {
    integral_along(domain, &iterate(domain, p0, n)?)
}
