//! Spectral-rigidity diagnostics: boundary matching through Lazutkin
//! abscissas and the obstruction
//! `Delta(s) = (1/3) kA(s)^2 d/ds [kB(shat(s))^-2 - kA(s)^-2]`,
//! which vanishes identically exactly when `kB^-2(shat) - kA^-2` is a
//! constant `alpha`; for tables with equal Lazutkin perimeter that forces
//! `alpha = 0` and the two domains are similar.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{BilliardError, Result};
use crate::geometry::CONVEXITY_GRID;
use crate::geometry::ConvexDomain;
use crate::output::fmt_f64;
use crate::quad;

pub const TOL_DELTA: f64 = 1e-6;
pub const TOL_ALPHA: f64 = 1e-8;
/// `not_similar` needs `sup |Delta| >= NOT_SIMILAR_FACTOR * tol_delta` at every offset.
pub const NOT_SIMILAR_FACTOR: f64 = 100.0;

/// The map `s -> shat` defined by `xA(s)/CA + offset = xB(shat)/CB`, with
/// `x` the Lazutkin abscissa and `C` the Lazutkin perimeter. `offset` is a
/// fraction of a turn.
#[derive(Debug, Clone)]
pub struct BoundaryMatch {
    a: ConvexDomain,
    b: ConvexDomain,
    offset: f64,
    ca: f64,
    cb: f64,
}

pub fn boundary_match(a: &ConvexDomain, b: &ConvexDomain, offset: f64) -> BoundaryMatch {
    BoundaryMatch {
        a: a.clone(),
        b: b.clone(),
        offset,
        ca: a.lazutkin_perimeter(),
        cb: b.lazutkin_perimeter(),
    }
}

impl BoundaryMatch {
    /// Lifted `shat(s)`; `shat(s + lA) = shat(s) + lB`.
    pub fn shat(&self, s: f64) -> f64 {
        let x = self.a.lazutkin_abscissa(s) / self.ca + self.offset;
        self.b.arc_at_lazutkin(x * self.cb)
    }

    /// `d shat / ds = (CB/CA) (kA(s) / kB(shat))^(2/3)`.
    pub fn derivative(&self, s: f64) -> f64 {
        self.derivative_at(s, self.shat(s))
    }

    fn derivative_at(&self, s: f64, shat: f64) -> f64 {
        self.cb / self.ca * (self.a.curvature(s) / self.b.curvature(shat)).powf(2.0 / 3.0)
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `(shat, Delta)` at `s`.
    pub fn delta(&self, s: f64) -> (f64, f64) {
        let shat = self.shat(s);
        let ka = self.a.curvature(s);
        let kb = self.b.curvature(shat);
        let dka = self.a.curvature_deriv(s);
        let dkb = self.b.curvature_deriv(shat);
        let d = -2.0 * dkb / (kb * kb * kb) * self.derivative_at(s, shat) + 2.0 * dka / (ka * ka * ka);
        (shat, ka * ka * d / 3.0)
    }

    /// `kB(shat(s))^-2 - kA(s)^-2`.
    pub fn radius_gap(&self, s: f64) -> f64 {
        let kb = self.b.curvature(self.shat(s));
        let ka = self.a.curvature(s);
        1.0 / (kb * kb) - 1.0 / (ka * ka)
    }
}

/// Copy of `b` rescaled to the Lazutkin perimeter of `a`.
pub fn lazutkin_rescaled(a: &ConvexDomain, b: &ConvexDomain) -> Result<ConvexDomain> {
    let t = (a.lazutkin_perimeter() / b.lazutkin_perimeter()).powi(3);
    b.scaled(t)
}

/// `Delta(s)` for `b` rescaled to the Lazutkin perimeter of `a`.
pub fn delta_function(a: &ConvexDomain, b: &ConvexDomain, s: f64, offset: f64) -> Result<f64> {
    Ok(boundary_match(a, &lazutkin_rescaled(a, b)?, offset).delta(s).1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Similar,
    NotSimilar,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Similar => 0,
            Verdict::NotSimilar => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Similar => "similar",
            Verdict::NotSimilar => "not_similar",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidityOptions {
    /// Sample points on the boundary of the first domain.
    pub grid: usize,
    /// Offsets in the coarse scan before refinement.
    pub offsets: usize,
    pub tol_delta: f64,
    pub tol_alpha: f64,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        Self { grid: 512, offsets: 64, tol_delta: TOL_DELTA, tol_alpha: TOL_ALPHA }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub s_grid: Vec<f64>,
    pub shat: Vec<f64>,
    pub delta: Vec<f64>,
    /// Offset (fraction of a turn) minimizing `sup |Delta|`.
    pub best_offset: f64,
    pub sup_delta: f64,
    /// `(offset, sup |Delta|)` over the coarse scan.
    pub scan: Vec<(f64, f64)>,
    /// Mean of `kB^-2(shat) - kA^-2` at the best offset.
    pub alpha_const: f64,
    /// Standard deviation of the same samples.
    pub alpha_residual: f64,
    /// `int kA [(1 + alpha kA^2)^(-5/6) - 1] ds`; `None` where the
    /// integrand is undefined.
    pub step7_integral: Option<f64>,
    /// Scale factor applied to the second domain.
    pub rescale: f64,
    pub options: RigidityOptions,
    pub verdict: Verdict,
}

fn sup_delta(m: &BoundaryMatch, grid: &[f64]) -> f64 {
    grid.iter().map(|&s| m.delta(s).1.abs()).fold(0.0, f64::max)
}

pub fn similarity_test(a: &ConvexDomain, b: &ConvexDomain) -> Result<RigidityReport> {
    similarity_test_with(a, b, &RigidityOptions::default())
}

pub fn similarity_test_with(a: &ConvexDomain, b: &ConvexDomain, options: &RigidityOptions) -> Result<RigidityReport> {
    let rescale = (a.lazutkin_perimeter() / b.lazutkin_perimeter()).powi(3);
    let bs = b.scaled(rescale)?;
    let la = a.perimeter();
    let grid: Vec<f64> = (0..options.grid).map(|i| la * i as f64 / options.grid as f64).collect();
    let sup_at = |offset: f64| sup_delta(&boundary_match(a, &bs, offset), &grid);

    let n = options.offsets.max(1);
    let scan: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let offset = i as f64 / n as f64;
            (offset, sup_at(offset))
        })
        .collect();
    let (k, _) = scan
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &(_, v))| if v < best.1 { (i, v) } else { best });
    let h = 1.0 / n as f64;
    let centre = scan[k].0;
    let (refined, neg_sup) = quad::golden_max(|o| -sup_at(o), centre - h, centre + h, 1e-13);
    let (best_offset, best_sup) = if -neg_sup <= scan[k].1 {
        (refined.rem_euclid(1.0), -neg_sup)
    } else {
        (centre, scan[k].1)
    };

    let m = boundary_match(a, &bs, best_offset);
    let mut shat = Vec::with_capacity(grid.len());
    let mut delta = Vec::with_capacity(grid.len());
    for &s in &grid {
        let (sh, d) = m.delta(s);
        shat.push(sh);
        delta.push(d);
    }
    let gaps: Vec<f64> = grid.iter().map(|&s| m.radius_gap(s)).collect();
    let alpha_const = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let alpha_residual =
        (gaps.iter().map(|g| (g - alpha_const).powi(2)).sum::<f64>() / gaps.len() as f64).sqrt();
    let step7_integral = step7_integral(a, alpha_const).ok();

    let min_sup = scan.iter().map(|&(_, v)| v).fold(best_sup, f64::min);
    let verdict = if best_sup <= options.tol_delta && alpha_residual <= options.tol_alpha {
        Verdict::Similar
    } else if min_sup >= NOT_SIMILAR_FACTOR * options.tol_delta {
        Verdict::NotSimilar
    } else {
        Verdict::Inconclusive
    };
    Ok(RigidityReport {
        s_grid: grid,
        shat,
        delta,
        best_offset,
        sup_delta: best_sup,
        scan,
        alpha_const,
        alpha_residual,
        step7_integral,
        rescale,
        options: *options,
        verdict,
    })
}

/// `int_0^l k [(1 + alpha k^2)^(-5/6) - 1] ds`; zero only for `alpha = 0`.
/// Undefined (range error) once `1 + alpha k^2` vanishes somewhere.
pub fn step7_integral(domain: &ConvexDomain, alpha: f64) -> Result<f64> {
    let l = domain.perimeter();
    let k_max = (0..CONVEXITY_GRID)
        .map(|i| domain.curvature(l * i as f64 / CONVEXITY_GRID as f64))
        .fold(0.0, f64::max);
    let lo = -1.0 / (k_max * k_max);
    if alpha <= lo {
        return Err(BilliardError::Range { value: alpha, lo, hi: f64::INFINITY });
    }
    let f = |s: f64| {
        let k = domain.curvature(s);
        k * ((1.0 + alpha * k * k).powf(-5.0 / 6.0) - 1.0)
    };
    quad::integrate(f, 0.0, l, 1e-10)
}

impl RigidityReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict = {}", self.verdict);
        let _ = writeln!(out, "sup_delta = {}", fmt_f64(self.sup_delta));
        let _ = writeln!(out, "best_offset = {}", fmt_f64(self.best_offset));
        let _ = writeln!(out, "alpha = {}", fmt_f64(self.alpha_const));
        let _ = writeln!(out, "alpha_residual = {}", fmt_f64(self.alpha_residual));
        match self.step7_integral {
            Some(v) => {
                let _ = writeln!(out, "step7_integral = {}", fmt_f64(v));
            }
            None => out.push_str("step7_integral = undefined\n"),
        }
        let _ = writeln!(out, "rescale = {}", fmt_f64(self.rescale));
        let _ = writeln!(out, "tol_delta = {}", fmt_f64(self.options.tol_delta));
        let _ = writeln!(out, "tol_alpha = {}", fmt_f64(self.options.tol_alpha));
        let _ = writeln!(out, "grid = {}", self.options.grid);
        let _ = writeln!(out, "offsets = {}", self.options.offsets);
        out
    }

    /// Columns `s, shat, delta`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,shat,delta\n");
        for i in 0..self.s_grid.len() {
            let _ = writeln!(out, "{},{},{}", fmt_f64(self.s_grid[i]), fmt_f64(self.shat[i]), fmt_f64(self.delta[i]));
        }
        out
    }
}
