//! Lazutkin coordinates.
//!
//! `x = C^-1 int_0^s kappa^(2/3)`, `y = 4 C^-1 kappa(s)^(-1/3) sin(phi/2)`
//! with `C` the Lazutkin perimeter. In this chart the billiard map reads
//! `(x, y) -> (x + y + O(y^3), y + O(y^4))` and preserves `dx ^ d(y^2)`
//! exactly. Circles of every radius give the same map, which is what fixes
//! the curvature exponents.

use std::fmt::Write as _;

use crate::billiard_map::{step_with_advance, PhasePoint};
use crate::error::{BilliardError, Result};
use crate::geometry::ConvexDomain;
use crate::output::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LazutkinPoint {
    pub x: f64,
    pub y: f64,
}

impl LazutkinPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

pub fn to_lazutkin(domain: &ConvexDomain, p: PhasePoint) -> LazutkinPoint {
    let c = domain.lazutkin_perimeter();
    let s = domain.normalize(p.s);
    let x = (domain.lazutkin_abscissa(s) / c).rem_euclid(1.0);
    let y = 4.0 / c * domain.curvature(s).powf(-1.0 / 3.0) * (0.5 * p.phi).sin();
    LazutkinPoint { x: if x >= 1.0 { 0.0 } else { x }, y }
}

pub fn from_lazutkin(domain: &ConvexDomain, q: LazutkinPoint) -> Result<PhasePoint> {
    let c = domain.lazutkin_perimeter();
    let s = domain.normalize(domain.arc_at_lazutkin(q.x.rem_euclid(1.0) * c));
    let half = 0.25 * q.y * c * domain.curvature(s).cbrt();
    if !(q.y >= 0.0) || half > 1.0 {
        return Err(BilliardError::ChartRange { x: q.x, y: q.y });
    }
    Ok(PhasePoint { s, phi: 2.0 * half.asin() })
}

/// Conjugated map together with the lifted abscissa increment `x' - x`.
pub fn step_lazutkin_lifted(domain: &ConvexDomain, q: LazutkinPoint) -> Result<(LazutkinPoint, f64)> {
    let p = from_lazutkin(domain, q)?;
    let bounce = step_with_advance(domain, p)?;
    let c = domain.lazutkin_perimeter();
    let dx = (domain.lazutkin_abscissa(p.s + bounce.advance) - domain.lazutkin_abscissa(p.s)) / c;
    Ok((to_lazutkin(domain, bounce.next), dx))
}

pub fn step_lazutkin(domain: &ConvexDomain, q: LazutkinPoint) -> Result<LazutkinPoint> {
    step_lazutkin_lifted(domain, q).map(|(next, _)| next)
}

/// One normal-form sample: `defect_x = (x' - x) - y`, `defect_y = y' - y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormSample {
    pub x: f64,
    pub y: f64,
    pub xp: f64,
    pub yp: f64,
    pub defect_x: f64,
    pub defect_y: f64,
}

pub fn normal_form_sample(domain: &ConvexDomain, q: LazutkinPoint) -> Result<NormalFormSample> {
    let (next, dx) = step_lazutkin_lifted(domain, q)?;
    Ok(NormalFormSample {
        x: q.x,
        y: q.y,
        xp: next.x,
        yp: next.y,
        defect_x: dx - q.y,
        defect_y: next.y - q.y,
    })
}

/// Defects at or below this magnitude are treated as exact zeros.
pub const DEFECT_FLOOR: f64 = 1e-14;

/// Log-log fit of the normal-form defects against `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormFit {
    /// Slope of the x-averaged `|defect_x|`; `None` when every sample sits at
    /// the noise floor.
    pub slope_x: Option<f64>,
    pub slope_y: Option<f64>,
    /// Range of the per-`x` slopes, `(min, max)`.
    pub spread_x: Option<(f64, f64)>,
    pub spread_y: Option<(f64, f64)>,
    pub samples: Vec<NormalFormSample>,
}

/// Geometric grid with four points per decade on `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64) -> Vec<f64> {
    let n = (4.0 * (hi / lo).log10()).round() as usize;
    (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect()
}

/// Least-squares slope of `ln v` against `ln y`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, v)| (a + x.ln() / n, b + v.ln() / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), (x, v)| {
        let dx = x.ln() - mx;
        (a + dx * (v.ln() - my), b + dx * dx)
    });
    Some(sxy / sxx)
}

pub const FIT_Y_MIN: f64 = 5e-3;
pub const FIT_Y_MAX: f64 = 5e-2;
pub const FIT_X_SAMPLES: usize = 32;

/// Orders of the two normal-form remainders, `x' - x - y = O(y^slope_x)` and
/// `y' - y = O(y^slope_y)`, over `y` in `[5e-3, 5e-2]` and 32 equispaced `x`.
pub fn normal_form_exponents(domain: &ConvexDomain) -> Result<NormalFormFit> {
    normal_form_exponents_with(domain, DEFECT_FLOOR)
}

/// As [`normal_form_exponents`] with defects at or below `floor` ignored.
pub fn normal_form_exponents_with(domain: &ConvexDomain, floor: f64) -> Result<NormalFormFit> {
    let ys = geometric_grid(FIT_Y_MIN, FIT_Y_MAX);
    let mut samples = Vec::with_capacity(ys.len() * FIT_X_SAMPLES);
    for i in 0..FIT_X_SAMPLES {
        let x = i as f64 / FIT_X_SAMPLES as f64;
        for &y in &ys {
            samples.push(normal_form_sample(domain, LazutkinPoint { x, y })?);
        }
    }
    let fit = |pick: fn(&NormalFormSample) -> f64| {
        let averaged: Vec<(f64, f64)> = ys
            .iter()
            .enumerate()
            .filter_map(|(j, &y)| {
                let kept: Vec<f64> = (0..FIT_X_SAMPLES)
                    .map(|i| pick(&samples[i * ys.len() + j]).abs())
                    .filter(|v| *v > floor)
                    .collect();
                (!kept.is_empty()).then(|| (y, kept.iter().sum::<f64>() / kept.len() as f64))
            })
            .collect();
        let per_x: Vec<f64> = (0..FIT_X_SAMPLES)
            .filter_map(|i| {
                let pts: Vec<(f64, f64)> = ys
                    .iter()
                    .enumerate()
                    .map(|(j, &y)| (y, pick(&samples[i * ys.len() + j]).abs()))
                    .filter(|(_, v)| *v > floor)
                    .collect();
                (pts.len() == ys.len()).then(|| loglog_slope(&pts)).flatten()
            })
            .collect();
        let spread = (!per_x.is_empty()).then(|| {
            per_x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
        });
        (loglog_slope(&averaged), spread)
    };
    let (slope_x, spread_x) = fit(|s| s.defect_x);
    let (slope_y, spread_y) = fit(|s| s.defect_y);
    Ok(NormalFormFit { slope_x, slope_y, spread_x, spread_y, samples })
}

pub fn diagnostics_csv(samples: &[NormalFormSample]) -> String {
    let mut out = String::from("x,y,xp,yp,defect_x,defect_y\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(s.x),
            fmt_f64(s.y),
            fmt_f64(s.xp),
            fmt_f64(s.yp),
            fmt_f64(s.defect_x),
            fmt_f64(s.defect_y)
        );
    }
    out
}
