use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{BilliardError, Result};

/// Highest harmonic accepted in a support-function description.
pub const MAX_HARMONIC: usize = 64;

/// Support function `h(t) = c0 + sum_k (cos[k-1] cos kt + sin[k-1] sin kt)`
/// of a convex curve, `t` being the direction angle of the outward normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFunction {
    pub c0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl SupportFunction {
    pub fn new(c0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { c0, cos, sin }
    }

    fn harmonics(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.cos.len().max(self.sin.len());
        (0..n).map(move |i| {
            let a = self.cos.get(i).copied().unwrap_or(0.0);
            let b = self.sin.get(i).copied().unwrap_or(0.0);
            ((i + 1) as f64, a, b)
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.c0
            + self
                .harmonics()
                .map(|(k, a, b)| a * (k * t).cos() + b * (k * t).sin())
                .sum::<f64>()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.harmonics()
            .map(|(k, a, b)| k * (b * (k * t).cos() - a * (k * t).sin()))
            .sum()
    }

    /// Radius of curvature `h + h''`.
    pub fn radius(&self, t: f64) -> f64 {
        self.c0
            + self
                .harmonics()
                .map(|(k, a, b)| (1.0 - k * k) * (a * (k * t).cos() + b * (k * t).sin()))
                .sum::<f64>()
    }

    pub fn radius_derivative(&self, t: f64) -> f64 {
        self.harmonics()
            .map(|(k, a, b)| (1.0 - k * k) * k * (b * (k * t).cos() - a * (k * t).sin()))
            .sum()
    }

    /// Antiderivative of the radius of curvature, zero at `t = 0`.
    pub fn arc_length(&self, t: f64) -> f64 {
        self.c0 * t
            + self
                .harmonics()
                .map(|(k, a, b)| (1.0 - k * k) / k * (a * (k * t).sin() + b * (1.0 - (k * t).cos())))
                .sum::<f64>()
    }
}

/// Boundary curve in its natural angular parameter `t` in `[0, 2pi)`.
///
/// For the circle and the ellipse `t` is the eccentric angle
/// (`(a cos t, b sin t)`); for support-function curves it is the normal
/// direction. All curves are traversed counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Support(SupportFunction),
}

impl Shape {
    pub fn point(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        match self {
            Shape::Circle { r } => [r * c, r * s],
            Shape::Ellipse { a, b } => [a * c, b * s],
            Shape::Support(h) => {
                let (hv, hd) = (h.value(t), h.derivative(t));
                [hv * c - hd * s, hv * s + hd * c]
            }
        }
    }

    /// `ds/dt`.
    pub fn speed(&self, t: f64) -> f64 {
        match self {
            Shape::Circle { r } => *r,
            Shape::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                (a * a * s * s + b * b * c * c).sqrt()
            }
            Shape::Support(h) => h.radius(t),
        }
    }

    pub fn tangent(&self, t: f64) -> [f64; 2] {
        let (s, c) = t.sin_cos();
        match self {
            Shape::Circle { .. } | Shape::Support(_) => [-s, c],
            Shape::Ellipse { a, b } => {
                let v = self.speed(t);
                [-a * s / v, b * c / v]
            }
        }
    }

    pub fn curvature(&self, t: f64) -> f64 {
        match self {
            Shape::Circle { r } => 1.0 / r,
            Shape::Ellipse { a, b } => {
                let v = self.speed(t);
                a * b / (v * v * v)
            }
            Shape::Support(h) => 1.0 / h.radius(t),
        }
    }

    /// `d(kappa)/dt`.
    pub fn curvature_dt(&self, t: f64) -> f64 {
        match self {
            Shape::Circle { .. } => 0.0,
            Shape::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                let v = self.speed(t);
                let dv = (a * a - b * b) * s * c / v;
                -3.0 * a * b * dv / v.powi(4)
            }
            Shape::Support(h) => {
                let r = h.radius(t);
                -h.radius_derivative(t) / (r * r)
            }
        }
    }

    /// Closed-form arc length from `t = 0`, when one exists.
    pub fn exact_arc_length(&self, t: f64) -> Option<f64> {
        match self {
            Shape::Circle { r } => Some(r * t),
            Shape::Ellipse { .. } => None,
            Shape::Support(h) => Some(h.arc_length(t)),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match self {
            Shape::Circle { r } => {
                if !(finite(*r) && *r > 0.0) {
                    return Err(BilliardError::InvalidDomain(format!(
                        "circle radius must be positive, got {r}"
                    )));
                }
            }
            Shape::Ellipse { a, b } => {
                if !(finite(*a) && finite(*b)) || *b <= 0.0 {
                    return Err(BilliardError::InvalidDomain(format!(
                        "ellipse semi-axes must be positive, got a = {a}, b = {b}"
                    )));
                }
                if a < b {
                    return Err(BilliardError::InvalidDomain(format!(
                        "ellipse requires a >= b (major axis along x), got a = {a}, b = {b}"
                    )));
                }
            }
            Shape::Support(h) => {
                if h.cos.len() > MAX_HARMONIC || h.sin.len() > MAX_HARMONIC {
                    return Err(BilliardError::InvalidDomain(format!(
                        "support function harmonics above {MAX_HARMONIC} are not accepted"
                    )));
                }
                if !finite(h.c0) || h.cos.iter().chain(&h.sin).any(|v| !v.is_finite()) {
                    return Err(BilliardError::InvalidDomain(
                        "support function coefficients must be finite".into(),
                    ));
                }
                if h.c0 <= 0.0 {
                    return Err(BilliardError::InvalidDomain(format!(
                        "support function mean c0 must be positive, got {}",
                        h.c0
                    )));
                }
            }
        }
        Ok(())
    }

    /// Strict convexity on an equispaced grid: the radius of curvature must
    /// stay positive and the curvature must not drop below
    /// `min_scaled_curvature / perimeter`.
    pub(crate) fn check_convexity(&self, grid: usize, perimeter: f64, min_scaled_curvature: f64) -> Result<()> {
        for i in 0..grid {
            let t = TAU * i as f64 / grid as f64;
            let radius = match self {
                Shape::Support(h) => h.radius(t),
                _ => 1.0 / self.curvature(t),
            };
            if !(radius > 0.0) || perimeter / radius < min_scaled_curvature {
                return Err(BilliardError::NotConvex { theta: t, radius });
            }
        }
        Ok(())
    }
}
