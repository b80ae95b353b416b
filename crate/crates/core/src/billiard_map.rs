//! The billiard map in `(s, phi)` coordinates.
//!
//! `s` is the arc length of the bounce point and `phi` in `(0, pi)` the
//! angle from the positive (counterclockwise) tangent to the outgoing ray.
//! The chord length `l(s, s')` is the generating function:
//! `dl/ds = -cos phi`, `dl/ds' = cos phi'`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use crate::error::{BilliardError, Result};
use crate::geometry::ConvexDomain;
use crate::quad::safeguarded_newton;

/// Angles closer than this to `0` or `pi` are rejected as grazing.
pub const PHI_MIN: f64 = 1e-12;
/// Smallest `sin(phi')` accepted by [`jacobian_exact`].
pub const SIN_PHI_MIN: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub s: f64,
    pub phi: f64,
}

impl PhasePoint {
    pub fn new(s: f64, phi: f64) -> Self {
        Self { s, phi }
    }

    /// The same bounce travelled backwards: `(s, pi - phi)`.
    pub fn reversed(self) -> Self {
        Self { s: self.s, phi: PI - self.phi }
    }
}

/// Differential of the billiard map, rows `(s', phi')`, columns `(s, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jacobian2 {
    pub ds_ds: f64,
    pub ds_dphi: f64,
    pub dphi_ds: f64,
    pub dphi_dphi: f64,
}

impl Jacobian2 {
    pub fn new(ds_ds: f64, ds_dphi: f64, dphi_ds: f64, dphi_dphi: f64) -> Self {
        Self { ds_ds, ds_dphi, dphi_ds, dphi_dphi }
    }

    pub fn det(&self) -> f64 {
        self.ds_ds * self.dphi_dphi - self.ds_dphi * self.dphi_ds
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.ds_ds, self.ds_dphi, self.dphi_ds, self.dphi_dphi]
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.entries().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl Add for Jacobian2 {
    type Output = Jacobian2;
    fn add(self, o: Jacobian2) -> Jacobian2 {
        Jacobian2::new(
            self.ds_ds + o.ds_ds,
            self.ds_dphi + o.ds_dphi,
            self.dphi_ds + o.dphi_ds,
            self.dphi_dphi + o.dphi_dphi,
        )
    }
}

impl Sub for Jacobian2 {
    type Output = Jacobian2;
    fn sub(self, o: Jacobian2) -> Jacobian2 {
        self + o * -1.0
    }
}

impl Mul<f64> for Jacobian2 {
    type Output = Jacobian2;
    fn mul(self, k: f64) -> Jacobian2 {
        Jacobian2::new(self.ds_ds * k, self.ds_dphi * k, self.dphi_ds * k, self.dphi_dphi * k)
    }
}


pub(crate) fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Counterclockwise angle from `from` to `to`, in `(-pi, pi]`.
pub(crate) fn angle_between(from: [f64; 2], to: [f64; 2]) -> f64 {
    cross(from, to).atan2(dot(from, to))
}

/// One bounce together with the arc length travelled, `s' - s` in `(0, l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounce {
    pub next: PhasePoint,
    pub advance: f64,
}

/// The billiard map.
pub fn step(domain: &ConvexDomain, p: PhasePoint) -> Result<PhasePoint> {
    step_with_advance(domain, p).map(|b| b.next)
}

pub fn step_with_advance(domain: &ConvexDomain, p: PhasePoint) -> Result<Bounce> {
    if !(p.phi > PHI_MIN && p.phi < PI - PHI_MIN) {
        return Err(BilliardError::Grazing { phi: p.phi });
    }
    let l = domain.perimeter();
    let s = domain.normalize(p.s);
    let f0 = domain.frame(s);
    let (sin_phi, cos_phi) = p.phi.sin_cos();
    let t0 = f0.tangent;
    let ray = [cos_phi * t0[0] - sin_phi * t0[1], sin_phi * t0[0] + cos_phi * t0[1]];

    // Angle from the ray to the chord towards gamma(t); increases from -phi
    // to pi - phi as t runs over (s, s + l).
    let signed_angle = |t: f64| {
        let d = domain.chord_vector(s, t);
        let value = angle_between(ray, d);
        let slope = cross(d, domain.tangent(t)) / dot(d, d);
        (value, slope)
    };
    let s1 = safeguarded_newton(signed_angle, s, s + l, 1e-3 * l, 1e-14 * l, "next bounce")?;

    let chord = domain.chord_vector(s, s1);
    let phi1 = angle_between(chord, domain.tangent(s1));
    Ok(Bounce { next: PhasePoint { s: domain.normalize(s1), phi: phi1 }, advance: s1 - s })
}

/// Chord between two boundary points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub length: f64,
    /// Angle at `s` from the tangent to the chord.
    pub phi: f64,
    /// Angle at `s1` from the chord to the tangent.
    pub phi1: f64,
}

pub fn chord(domain: &ConvexDomain, s: f64, s1: f64) -> Result<Chord> {
    let l = domain.perimeter();
    let gap = (s1 - s).rem_euclid(l);
    if gap.min(l - gap) <= 1e-14 * l {
        return Err(BilliardError::DegenerateChord { s });
    }
    // Shortest lift of s1 relative to s, so short chords stay accurate.
    let s1 = s + if gap <= 0.5 * l { gap } else { gap - l };
    let d = domain.chord_vector(s, s1);
    Ok(Chord {
        length: norm(d),
        phi: angle_between(domain.tangent(s), d),
        phi1: angle_between(d, domain.tangent(s1)),
    })
}

/// Closed-form differential of the billiard map at `p`.
pub fn jacobian_exact(domain: &ConvexDomain, p: PhasePoint) -> Result<Jacobian2> {
    let bounce = step_with_advance(domain, p)?;
    let sin1 = bounce.next.phi.sin();
    if sin1 < SIN_PHI_MIN {
        return Err(BilliardError::NearTangency { sin_phi1: sin1 });
    }
    let s = domain.normalize(p.s);
    let len = norm(domain.chord_vector(s, s + bounce.advance));
    let (k0, k1) = (domain.curvature(s), domain.curvature(bounce.next.s));
    let sin0 = p.phi.sin();
    Ok(Jacobian2 {
        ds_ds: (k0 * len - sin0) / sin1,
        ds_dphi: len / sin1,
        dphi_ds: (k0 * k1 * len - k0 * sin1 - k1 * sin0) / sin1,
        dphi_dphi: (k1 * len - sin1) / sin1,
    })
}

/// Zeroth- and first-order coefficients of the differential near the
/// boundary: `Df(s, phi) = L(s) + phi A(s) + O(phi^2)`.
///
/// `L = [[1, 2/k], [0, 1]]`. The first-order matrix is
/// `A = [[-2 k'/k^2, -(8/3) k'/k^3], [0, (4/3) k'/k^2]]`: the left column
/// is the `s`-derivative of the `phi`-column of `L`, and the right column
/// the second `phi`-derivative of `s' = s + 2 phi/k - (4/3) k' phi^2/k^3`
/// and `phi' = phi + (2/3) k' phi^2/k^2`.
pub fn taylor_coefficients(domain: &ConvexDomain, s: f64) -> (Jacobian2, Jacobian2) {
    let k = domain.curvature(s);
    let dk = domain.curvature_deriv(s);
    let l = Jacobian2::new(1.0, 2.0 / k, 0.0, 1.0);
    let a = Jacobian2::new(
        -2.0 * dk / (k * k),
        -8.0 / 3.0 * dk / (k * k * k),
        0.0,
        4.0 / 3.0 * dk / (k * k),
    );
    (l, a)
}

/// `L(s) + phi A(s)`; meaningful for small `phi` only.
pub fn jacobian_taylor(domain: &ConvexDomain, s: f64, phi: f64) -> Jacobian2 {
    let (l, a) = taylor_coefficients(domain, s);
    l + a * phi
}

/// `n` forward bounces; the returned orbit starts with `p` and has `n + 1`
/// points.
pub fn iterate(domain: &ConvexDomain, p: PhasePoint, n: usize) -> Result<Vec<PhasePoint>> {
    let mut orbit = Vec::with_capacity(n + 1);
    let mut current = PhasePoint::new(domain.normalize(p.s), p.phi);
    orbit.push(current);
    for index in 0..n {
        current = step(domain, current)
            .map_err(|e| BilliardError::OrbitStep { index, source: Box::new(e) })?;
        orbit.push(current);
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SupportFunction;
    use std::f64::consts::TAU;

    fn fd_jacobian(d: &ConvexDomain, p: PhasePoint, h: f64) -> Jacobian2 {
        let l = d.perimeter();
        let lifted = |q: PhasePoint, reference: f64| {
            let n = step(d, q).unwrap();
            let mut ds = n.s - reference;
            ds -= l * (ds / l).round();
            (reference + ds, n.phi)
        };
        let base = step(d, p).unwrap().s;
        let (sp, pp) = lifted(PhasePoint::new(p.s + h, p.phi), base);
        let (sm, pm) = lifted(PhasePoint::new(p.s - h, p.phi), base);
        let (sp2, pp2) = lifted(PhasePoint::new(p.s, p.phi + h), base);
        let (sm2, pm2) = lifted(PhasePoint::new(p.s, p.phi - h), base);
        Jacobian2::new(
            (sp - sm) / (2.0 * h),
            (sp2 - sm2) / (2.0 * h),
            (pp - pm) / (2.0 * h),
            (pp2 - pm2) / (2.0 * h),
        )
    }

    #[test]
    fn circle_chords_subtend_twice_the_angle() {
        let c = ConvexDomain::circle(1.0).unwrap();
        let n = step(&c, PhasePoint::new(0.0, PI / 3.0)).unwrap();
        assert!((n.s - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!((n.phi - PI / 3.0).abs() < 1e-12);
        let n = step(&c, PhasePoint::new(0.0, PI / 2.0)).unwrap();
        assert!((n.s - PI).abs() < 1e-12 && (n.phi - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ellipse_major_axis_bounce() {
        let e = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let n = step(&e, PhasePoint::new(0.0, PI / 2.0)).unwrap();
        assert!((n.s - e.perimeter() / 2.0).abs() < 1e-10);
        assert!((n.phi - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn grazing_is_rejected() {
        let c = ConvexDomain::circle(1.0).unwrap();
        assert!(matches!(step(&c, PhasePoint::new(0.0, 0.0)), Err(BilliardError::Grazing { .. })));
        assert!(matches!(step(&c, PhasePoint::new(0.0, PI)), Err(BilliardError::Grazing { .. })));
        assert!(matches!(step(&c, PhasePoint::new(0.0, -0.1)), Err(BilliardError::Grazing { .. })));
        let err = iterate(&c, PhasePoint::new(0.0, 1e-13), 3).unwrap_err();
        assert!(matches!(err, BilliardError::OrbitStep { index: 0, .. }));
    }

    #[test]
    fn chord_examples() {
        let c = ConvexDomain::circle(1.0).unwrap();
        let ch = chord(&c, 0.0, PI).unwrap();
        assert!((ch.length - 2.0).abs() < 1e-14);
        assert!((ch.phi - PI / 2.0).abs() < 1e-14 && (ch.phi1 - PI / 2.0).abs() < 1e-14);
        let ch = chord(&c, 0.0, PI / 3.0).unwrap();
        assert!((ch.length - 1.0).abs() < 1e-14);
        let e = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let ch = chord(&e, 0.0, e.perimeter() / 4.0).unwrap();
        assert!((ch.length - 5f64.sqrt()).abs() < 1e-12);
        assert!(matches!(chord(&c, 1.0, 1.0 + TAU), Err(BilliardError::DegenerateChord { .. })));
    }

    #[test]
    fn circle_jacobian_is_a_shear() {
        let c = ConvexDomain::circle(1.0).unwrap();
        for &(s, phi) in &[(0.0, 0.3), (2.0, 1.1), (5.0, 2.5)] {
            let j = jacobian_exact(&c, PhasePoint::new(s, phi)).unwrap();
            let expected = [1.0, 2.0, 0.0, 1.0];
            for (a, b) in j.entries().iter().zip(expected) {
                assert!((a - b).abs() < 1e-10, "{j:?}");
            }
        }
    }

    #[test]
    fn exact_jacobian_matches_finite_differences_near_boundary() {
        let e = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let p = PhasePoint::new(0.0, 0.01);
        let j = jacobian_exact(&e, p).unwrap();
        let fd = fd_jacobian(&e, p, 1e-6);
        assert!((j - fd).max_norm() <= 1e-5 * j.max_norm(), "{j:?} vs {fd:?}");
    }

    #[test]
    fn taylor_coefficients_at_symmetric_points() {
        let c = ConvexDomain::circle(1.0).unwrap();
        let (l, a) = taylor_coefficients(&c, 0.7);
        assert_eq!(l, Jacobian2::new(1.0, 2.0, 0.0, 1.0));
        assert!(a.max_norm() == 0.0);
        let e = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let (l, a) = taylor_coefficients(&e, 0.0);
        assert!((l - Jacobian2::new(1.0, 1.0, 0.0, 1.0)).max_norm() < 1e-12);
        assert!(a.max_norm() < 1e-12);
    }

    #[test]
    fn first_order_terms_match_mixed_finite_differences() {
        // d/dphi of the exact Jacobian at the boundary equals A(s).
        let d = ConvexDomain::from_support(SupportFunction::new(1.0, vec![0.0, 0.1, 0.05], vec![0.0, 0.03]))
            .unwrap();
        for i in 0..6 {
            let s = d.perimeter() * (i as f64 + 0.3) / 6.0;
            let (h1, h2) = (2e-3, 1e-3);
            let j1 = jacobian_exact(&d, PhasePoint::new(s, h1)).unwrap();
            let j2 = jacobian_exact(&d, PhasePoint::new(s, h2)).unwrap();
            let (l, a) = taylor_coefficients(&d, s);
            // Richardson: remove the phi^2 term.
            let slope = ((j2 - l) * (1.0 / h2)) * 2.0 - (j1 - l) * (1.0 / h1);
            assert!((slope - a).max_norm() < 1e-3 * (1.0 + a.max_norm()), "{slope:?} vs {a:?}");
        }
    }

    #[test]
    fn three_bounces_close_an_equilateral_triangle() {
        let c = ConvexDomain::circle(1.0).unwrap();
        let orbit = iterate(&c, PhasePoint::new(0.0, PI / 3.0), 3).unwrap();
        assert_eq!(orbit.len(), 4);
        let last = orbit[3];
        assert!(last.s.min(TAU - last.s) < 1e-12 && (last.phi - PI / 3.0).abs() < 1e-12);
        let orbit = iterate(&c, PhasePoint::new(0.0, PI / 2.0), 2).unwrap();
        assert!(orbit[2].s.min(TAU - orbit[2].s) < 1e-12);
    }

    #[test]
    fn grazing_limit_fixes_the_boundary() {
        let e = ConvexDomain::ellipse(2.0, 1.0).unwrap();
        let kmin = e.min_curvature();
        for &phi in &[1e-6, 1e-8, 1e-10] {
            for i in 0..8 {
                let s = e.perimeter() * i as f64 / 8.0;
                let b = step_with_advance(&e, PhasePoint::new(s, phi)).unwrap();
                assert!(b.advance > 0.0 && b.advance <= 3.0 * phi / kmin, "phi {phi} s {s} adv {} bound {}", b.advance, 3.0 * phi / kmin);
            }
        }
    }
}
