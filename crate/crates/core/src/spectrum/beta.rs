//! Marked length spectrum and Mather's beta and alpha functions.
//!
//! `beta(p/q) = -L(p, q)/q` with `L` the maximal length of a `p/q` orbit.
//! For a unit-perimeter domain with Lazutkin perimeter `C`,
//! `beta(w) = -w + C^3 w^3 / 24 + O(w^5)`; the conjugate
//! `alpha(c) = max_w (c w - beta(w))` then behaves like
//! `(4 sqrt 2 / 3) C^(-3/2) I^(3/2)` at `c = -1 + I`.

use std::fmt::Write as _;

use super::orbit::{check_rotation, find_periodic_orbit_with, gcd, OrbitSearch, PeriodicOrbit};
use crate::error::{BilliardError, Result};
use crate::geometry::ConvexDomain;
use crate::output::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct BetaSample {
    pub p: i64,
    pub q: i64,
    pub omega: f64,
    pub beta: f64,
    pub length: f64,
    pub residual: f64,
}

impl BetaSample {
    fn from_orbit(orbit: &PeriodicOrbit) -> Self {
        Self {
            p: orbit.p,
            q: orbit.q,
            omega: orbit.p as f64 / orbit.q as f64,
            beta: -orbit.total_length / orbit.q as f64,
            length: orbit.total_length,
            residual: orbit.residual,
        }
    }
}

pub fn beta(domain: &ConvexDomain, p: i64, q: i64) -> Result<BetaSample> {
    beta_with(domain, p, q, &OrbitSearch::default())
}

pub fn beta_with(domain: &ConvexDomain, p: i64, q: i64, search: &OrbitSearch) -> Result<BetaSample> {
    find_periodic_orbit_with(domain, p, q, None, search).map(|o| BetaSample::from_orbit(&o))
}

/// Reduced fractions `p/q` with `2 <= q <= q_max` and `p/q <= 1/2`, in
/// increasing order.
pub fn farey_half(q_max: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (2..=q_max)
        .flat_map(|q| (1..=q / 2).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q)))
        .collect();
    out.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    out
}

/// One row of the spectrum; a failed search is kept, not propagated.
#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub p: i64,
    pub q: i64,
    pub omega: f64,
    pub sample: Result<BetaSample>,
}

pub fn marked_length_spectrum(domain: &ConvexDomain, q_max: i64) -> Result<Vec<SpectrumEntry>> {
    marked_length_spectrum_with(domain, q_max, &OrbitSearch::default())
}

pub fn marked_length_spectrum_with(
    domain: &ConvexDomain,
    q_max: i64,
    search: &OrbitSearch,
) -> Result<Vec<SpectrumEntry>> {
    if q_max < 2 {
        return Err(BilliardError::RotationNumber { p: 1, q: q_max, reason: "q_max must be at least 2" });
    }
    Ok(farey_half(q_max)
        .into_iter()
        .map(|(p, q)| SpectrumEntry {
            p,
            q,
            omega: p as f64 / q as f64,
            sample: beta_with(domain, p, q, search),
        })
        .collect())
}

/// Spectrum table with columns `p, q, omega, length, beta, residual`;
/// failed entries leave the numeric columns empty and add the message.
pub fn spectrum_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from("p,q,omega,length,beta,residual,error\n");
    for e in entries {
        match &e.sample {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},",
                    e.p,
                    e.q,
                    fmt_f64(e.omega),
                    fmt_f64(s.length),
                    fmt_f64(s.beta),
                    fmt_f64(s.residual)
                );
            }
            Err(err) => {
                let _ = writeln!(out, "{},{},{},,,,\"{}\"", e.p, e.q, fmt_f64(e.omega), err.to_string().replace('"', "'"));
            }
        }
    }
    out
}

/// Largest violation of discrete convexity over consecutive triples
/// (positive means non-convex).
pub fn convexity_violation(samples: &[(f64, f64)]) -> f64 {
    samples
        .windows(3)
        .map(|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let t = (b.0 - a.0) / (c.0 - a.0);
            b.1 - ((1.0 - t) * a.1 + t * c.1)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Comparison of `beta(1/q) + 1/q` with the cubic term `C^3 / (24 q^3)`
/// on the unit-perimeter rescaling of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    /// Lazutkin perimeter of the unit-perimeter copy.
    pub lazutkin_perimeter: f64,
    /// `(q, r(q))` with `r = (beta(1/q) + 1/q) / (C^3 / (24 q^3))`.
    pub ratios: Vec<(i64, f64)>,
    pub max_deviation: f64,
}

pub fn beta_expansion_check(domain: &ConvexDomain, q_list: &[i64]) -> Result<ExpansionReport> {
    let unit = domain.scaled(1.0 / domain.perimeter())?;
    let c = unit.lazutkin_perimeter();
    let coefficient = c * c * c / 24.0;
    let mut ratios = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let b = beta(&unit, 1, q)?;
        let w = 1.0 / q as f64;
        ratios.push((q, (b.beta + w) / (coefficient * w * w * w)));
    }
    let max_deviation = ratios.iter().fold(0.0f64, |m, (_, r)| m.max((r - 1.0).abs()));
    Ok(ExpansionReport { lazutkin_perimeter: c, ratios, max_deviation })
}

/// Sampled beta function, sorted by rotation number.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGrid {
    pub samples: Vec<BetaSample>,
}

/// Value of the convex conjugate at one slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaValue {
    pub c: f64,
    pub value: f64,
    /// Maximizing rotation number after quadratic refinement.
    pub omega: f64,
    /// The discrete maximizer sits at the first or last grid point, so the
    /// value is only a bound.
    pub at_edge: bool,
}

impl BetaGrid {
    /// Default rotation numbers: every reduced `p/q <= 1/2` with `q <= 40`,
    /// `1/q` for `40 < q <= 400`, then `1/q` on a geometric ladder (ratio
    /// 1.03) up to `q_tail`.
    pub fn default_rotations(q_tail: i64) -> Vec<(i64, i64)> {
        let mut out = farey_half(40);
        let mut q = 41;
        while q <= q_tail.min(400) {
            out.push((1, q));
            q += 1;
        }
        let mut qf = 400.0f64;
        loop {
            qf *= 1.03;
            let q = qf.round() as i64;
            if q > q_tail {
                break;
            }
            out.push((1, q));
        }
        out
    }

    pub fn build(domain: &ConvexDomain, rotations: &[(i64, i64)], search: &OrbitSearch) -> Result<Self> {
        let mut samples = Vec::with_capacity(rotations.len());
        for &(p, q) in rotations {
            check_rotation(p, q)?;
            samples.push(beta_with(domain, p, q, search)?);
        }
        samples.sort_by(|a, b| a.omega.total_cmp(&b.omega));
        samples.dedup_by(|a, b| a.omega == b.omega);
        Ok(Self { samples })
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.omega, s.beta)).collect()
    }

    /// `alpha(c) = max_w (c w - beta(w))` over the grid with a parabolic
    /// refinement through the discrete maximizer and its neighbours.
    pub fn alpha(&self, c: f64) -> Result<AlphaValue> {
        let pts = self.points();
        if pts.len() < 3 {
            return Err(BilliardError::Unsupported("alpha needs at least three beta samples".into()));
        }
        let vals: Vec<f64> = pts.iter().map(|(w, b)| c * w - b).collect();
        let (k, _) = vals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if *v > best.1 { (i, *v) } else { best });
        if k == 0 || k == pts.len() - 1 {
            return Ok(AlphaValue { c, value: vals[k], omega: pts[k].0, at_edge: true });
        }
        let (x0, x1, x2) = (pts[k - 1].0, pts[k].0, pts[k + 1].0);
        let (y0, y1, y2) = (vals[k - 1], vals[k], vals[k + 1]);
        // Newton form of the interpolating parabola.
        let d01 = (y1 - y0) / (x1 - x0);
        let d12 = (y2 - y1) / (x2 - x1);
        let curv = (d12 - d01) / (x2 - x0);
        if !(curv < 0.0) {
            return Ok(AlphaValue { c, value: y1, omega: x1, at_edge: false });
        }
        let w = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
        let w = w.clamp(x0, x2);
        let value = y0 + d01 * (w - x0) + curv * (w - x0) * (w - x1);
        Ok(AlphaValue { c, value: value.max(y1), omega: w, at_edge: false })
    }
}

/// `alpha(c)` from a freshly built default grid (`q_tail = 2048`).
pub fn alpha(domain: &ConvexDomain, c: f64) -> Result<AlphaValue> {
    BetaGrid::build(domain, &BetaGrid::default_rotations(2048), &OrbitSearch::default())?.alpha(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::orbit::circle_orbit_length;
    use std::f64::consts::PI;

    #[test]
    fn farey_order() {
        let f = farey_half(5);
        assert_eq!(f, vec![(1, 5), (1, 4), (1, 3), (2, 5), (1, 2)]);
    }

    #[test]
    fn circle_spectrum_matches_star_polygons() {
        let c = ConvexDomain::circle(1.0).unwrap();
        let spec = marked_length_spectrum(&c, 5).unwrap();
        assert_eq!(spec.len(), 5);
        for e in &spec {
            let s = e.sample.as_ref().unwrap();
            assert!((s.length - circle_orbit_length(1.0, e.p, e.q)).abs() < 1e-10);
        }
        assert!(marked_length_spectrum(&c, 1).is_err());
        let csv = spectrum_csv(&spec);
        assert!(csv.starts_with("p,q,omega,length,beta,residual"));
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn circle_beta_values() {
        let unit = ConvexDomain::circle(1.0 / (2.0 * PI)).unwrap();
        let b = beta(&unit, 1, 4).unwrap();
        assert!((b.beta + (PI / 4.0).sin() / PI).abs() < 1e-12);
        assert!((b.beta + 0.2250791).abs() < 1e-7);
        let c = ConvexDomain::circle(1.0).unwrap();
        assert!((beta(&c, 1, 2).unwrap().beta + 2.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_of_an_exact_parabola() {
        // beta(w) = w^2 on a fine grid: alpha(c) = c^2 / 4 at w = c / 2.
        let samples: Vec<BetaSample> = (1..=100)
            .map(|i| {
                let w = i as f64 / 200.0;
                BetaSample { p: i, q: 200, omega: w, beta: w * w, length: 0.0, residual: 0.0 }
            })
            .collect();
        let grid = BetaGrid { samples };
        let a = grid.alpha(0.3).unwrap();
        assert!(!a.at_edge);
        assert!((a.value - 0.0225).abs() < 1e-14 && (a.omega - 0.15).abs() < 1e-12);
        assert!(grid.alpha(-1.0).unwrap().at_edge);
    }

    #[test]
    fn convexity_violation_sign() {
        let convex: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, (i as f64).powi(2))).collect();
        assert!(convexity_violation(&convex) < 0.0);
        let bumpy = vec![(0.0, 0.0), (1.0, 2.0), (2.0, 0.0)];
        assert!((convexity_violation(&bumpy) - 2.0).abs() < 1e-15);
    }
}
