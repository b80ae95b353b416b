//! Rotation numbers of billiard orbits by weighted Birkhoff averages.

use crate::billiard_map::{step_with_advance, PhasePoint};
use crate::error::{BilliardError, Result};
use crate::geometry::ConvexDomain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEstimate {
    pub value: f64,
    /// `|rho_n - rho_{n/2}| + n eps`; the second term bounds the linear
    /// growth of rounding along the computed orbit, which the halving
    /// comparison cannot see once the average itself has converged.
    pub error: f64,
    pub steps: usize,
    /// The orbit grazed the boundary before `n` steps; the estimate uses the
    /// steps completed.
    pub grazed: bool,
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

/// Weighted average of `a_k` with the smooth bump `exp(-1/(t(1-t)))`,
/// `t = (k + 1/2)/n`. For quasi-periodic sequences it converges faster than
/// any power of `n`; for periodic ones it is exact up to rounding.
pub fn weighted_birkhoff_average(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let (num, den) = values.iter().enumerate().fold((0.0, 0.0), |(num, den), (k, v)| {
        let w = bump((k as f64 + 0.5) / n);
        (num + w * v, den + w)
    });
    num / den
}

/// Mean fraction of the perimeter advanced per bounce over `n` bounces.
pub fn rotation_number(domain: &ConvexDomain, p0: PhasePoint, n: usize) -> Result<RotationEstimate> {
    if n < 100 {
        return Err(BilliardError::Unsupported(format!("rotation number needs n >= 100, got {n}")));
    }
    let l = domain.perimeter();
    let mut increments = Vec::with_capacity(n);
    let mut p = p0;
    let mut grazed = false;
    for _ in 0..n {
        match step_with_advance(domain, p) {
            Ok(b) => {
                increments.push(b.advance / l);
                p = b.next;
            }
            Err(BilliardError::Grazing { .. }) => {
                grazed = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if increments.len() < 4 {
        return Err(BilliardError::Grazing { phi: p.phi });
    }
    let value = weighted_birkhoff_average(&increments);
    let half = weighted_birkhoff_average(&increments[..increments.len() / 2]);
    let floor = increments.len() as f64 * f64::EPSILON;
    Ok(RotationEstimate { value, error: (value - half).abs() + floor, steps: increments.len(), grazed })
}
