//! Strictly convex planar domains parametrized by arc length.
//!
//! A [`ConvexDomain`] wraps one of three base curves (circle, ellipse,
//! support-function curve) together with a similarity transform: a
//! rescaling, a rotation of the plane and a shift of the arc-length origin.
//! Every evaluator takes an arc length `s`, interpreted modulo the
//! perimeter and measured counterclockwise.

mod file;
mod shape;
mod table;

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use file::{read_domain_file, write_domain_file, DomainSpec};
pub use shape::{Shape, SupportFunction, MAX_HARMONIC};

use crate::error::{BilliardError, Result};
use crate::quad;
use table::CumulativeTable;

/// Equispaced samples used to certify strict convexity.
pub const CONVEXITY_GRID: usize = 8192;
/// Minimum curvature, in units of `1 / perimeter`.
pub const MIN_SCALED_CURVATURE: f64 = 1e-6;
/// Initial resolution of the cumulative arc-length tables.
pub const TABLE_PANELS: usize = 4096;
const TABLE_MAX_PANELS: usize = 1 << 16;
const QUAD_TOL: f64 = 1e-12;
const SHORT_CHORD: f64 = 1e-2;
const SHORT_PANEL: f64 = 2e-3;

/// Which base curve a domain was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainKind {
    Circle { r: f64 },
    Ellipse { a: f64, b: f64 },
    Support(SupportFunction),
}

#[derive(Debug)]
struct BaseCurve {
    shape: Shape,
    perimeter: f64,
    lazutkin_perimeter: f64,
    arc: Option<CumulativeTable>,
    lazutkin: CumulativeTable,
}

impl BaseCurve {
    fn new(shape: Shape) -> Result<Self> {
        shape.validate()?;
        let arc = match shape.exact_arc_length(TAU) {
            Some(_) => None,
            None => Some(build_table(|t| shape.speed(t))?),
        };
        let perimeter = match (&arc, shape.exact_arc_length(TAU)) {
            (_, Some(p)) => p,
            (Some(table), None) => table.total(),
            (None, None) => unreachable!(),
        };
        shape.check_convexity(CONVEXITY_GRID, perimeter, MIN_SCALED_CURVATURE)?;
        let lazutkin_density = |t: f64| shape.curvature(t).powf(2.0 / 3.0) * shape.speed(t);
        let lazutkin = build_table(lazutkin_density)?;
        let lazutkin_perimeter = quad::integrate(lazutkin_density, 0.0, TAU, QUAD_TOL)?;
        Ok(Self { shape, perimeter, lazutkin_perimeter, arc, lazutkin })
    }

    fn arc_at(&self, t: f64) -> f64 {
        match &self.arc {
            None => self.shape.exact_arc_length(t).unwrap(),
            Some(table) => table.eval(&|t| self.shape.speed(t), t),
        }
    }

    fn param_at(&self, s: f64) -> f64 {
        match (&self.shape, &self.arc) {
            (Shape::Circle { r }, _) => s / r,
            (_, Some(table)) => table.invert(&|t| self.shape.speed(t), s),
            (Shape::Support(h), None) => {
                let turns = (s / self.perimeter).floor();
                let r = s - turns * self.perimeter;
                let mut t = TAU * r / self.perimeter;
                // h + h'' > 0 makes the antiderivative strictly increasing.
                let (mut lo, mut hi) = (0.0, TAU);
                for _ in 0..100 {
                    let g = h.arc_length(t) - r;
                    if g < 0.0 {
                        lo = t;
                    } else {
                        hi = t;
                    }
                    let mut next = t - g / h.radius(t);
                    if !(next > lo && next < hi) {
                        next = 0.5 * (lo + hi);
                    }
                    let dt = (next - t).abs();
                    t = next;
                    if dt <= 1e-15 * (1.0 + t.abs()) || hi - lo <= 4e-16 {
                        break;
                    }
                }
                t + turns * TAU
            }
            (Shape::Ellipse { .. }, None) => unreachable!(),
        }
    }

    fn lazutkin_at_param(&self, t: f64) -> f64 {
        self.lazutkin
            .eval(&|t| self.shape.curvature(t).powf(2.0 / 3.0) * self.shape.speed(t), t)
    }

    fn param_at_lazutkin(&self, x: f64) -> f64 {
        self.lazutkin
            .invert(&|t| self.shape.curvature(t).powf(2.0 / 3.0) * self.shape.speed(t), x)
    }
}

fn build_table<F: Fn(f64) -> f64>(f: F) -> Result<CumulativeTable> {
    let reference = quad::integrate(&f, 0.0, TAU, QUAD_TOL)?;
    let mut panels = TABLE_PANELS;
    loop {
        let table = CumulativeTable::build(&f, panels);
        if ((table.total() - reference) / reference).abs() <= 1e-10 || panels >= TABLE_MAX_PANELS {
            return Ok(table);
        }
        panels *= 2;
    }
}

/// An immutable strictly convex domain with arc-length evaluators.
///
/// Cloning is cheap; the quadrature tables are shared.
#[derive(Debug, Clone)]
pub struct ConvexDomain {
    base: Arc<BaseCurve>,
    kind: DomainKind,
    scale: f64,
    rotation: f64,
    rot: (f64, f64),
    origin: f64,
}

impl ConvexDomain {
    /// Circle of radius `r`, arc length measured from `(r, 0)`.
    pub fn circle(r: f64) -> Result<Self> {
        Self::from_shape(Shape::Circle { r }, DomainKind::Circle { r })
    }

    /// Ellipse `x^2/a^2 + y^2/b^2 = 1` with `a >= b > 0`, arc length measured
    /// from the vertex `(a, 0)`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::from_shape(Shape::Ellipse { a, b }, DomainKind::Ellipse { a, b })
    }

    /// Curve with support function `h`; arc length measured from the point
    /// whose outward normal is `(1, 0)`.
    pub fn from_support(h: SupportFunction) -> Result<Self> {
        Self::from_shape(Shape::Support(h.clone()), DomainKind::Support(h))
    }

    fn from_shape(shape: Shape, kind: DomainKind) -> Result<Self> {
        Ok(Self {
            base: Arc::new(BaseCurve::new(shape)?),
            kind,
            scale: 1.0,
            rotation: 0.0,
            rot: (0.0, 1.0),
            origin: 0.0,
        })
    }

    pub fn from_kind(kind: &DomainKind) -> Result<Self> {
        match kind {
            DomainKind::Circle { r } => Self::circle(*r),
            DomainKind::Ellipse { a, b } => Self::ellipse(*a, *b),
            DomainKind::Support(h) => Self::from_support(h.clone()),
        }
    }

    /// Homothetic copy: lengths multiply by `factor`, curvatures divide.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(BilliardError::InvalidDomain(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(Self { scale: self.scale * factor, origin: self.origin * factor, ..self.clone() })
    }

    /// Copy rotated about the origin of the plane by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Self {
        let rotation = self.rotation + angle;
        Self { rotation, rot: rotation.sin_cos(), ..self.clone() }
    }

    /// Same curve with the arc-length origin moved forward by `shift`.
    pub fn with_origin_shift(&self, shift: f64) -> Self {
        let origin = (self.origin + shift).rem_euclid(self.perimeter());
        Self { origin, ..self.clone() }
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// Arc length (in this domain's units) of the current origin measured
    /// from the base curve's origin.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn perimeter(&self) -> f64 {
        self.scale * self.base.perimeter
    }

    /// `int_0^l kappa^(2/3) ds`.
    pub fn lazutkin_perimeter(&self) -> f64 {
        self.scale.cbrt() * self.base.lazutkin_perimeter
    }

    /// Reduce `s` into `[0, perimeter)`.
    pub fn normalize(&self, s: f64) -> f64 {
        let l = self.perimeter();
        let r = s.rem_euclid(l);
        if r >= l {
            0.0
        } else {
            r
        }
    }

    fn base_arc(&self, s: f64) -> f64 {
        (s + self.origin) / self.scale
    }

    /// Parameter of the base curve at arc length `s` (the eccentric angle
    /// for ellipses), lifted continuously in `s`.
    pub fn base_parameter(&self, s: f64) -> f64 {
        self.base.param_at(self.base_arc(s))
    }

    /// Arc length of the base-curve parameter `t`, lifted.
    pub fn arc_of_parameter(&self, t: f64) -> f64 {
        self.base.arc_at(t) * self.scale - self.origin
    }

    fn rotate(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.rot;
        [c * v[0] - s * v[1], s * v[0] + c * v[1]]
    }

    pub fn position(&self, s: f64) -> [f64; 2] {
        let p = self.base.shape.point(self.base_parameter(s));
        let p = self.rotate(p);
        [self.scale * p[0], self.scale * p[1]]
    }

    /// Unit tangent, counterclockwise.
    pub fn tangent(&self, s: f64) -> [f64; 2] {
        self.rotate(self.base.shape.tangent(self.base_parameter(s)))
    }

    pub fn curvature(&self, s: f64) -> f64 {
        self.base.shape.curvature(self.base_parameter(s)) / self.scale
    }

    /// `d(kappa)/ds`.
    pub fn curvature_deriv(&self, s: f64) -> f64 {
        let t = self.base_parameter(s);
        let shape = &self.base.shape;
        shape.curvature_dt(t) / shape.speed(t) / (self.scale * self.scale)
    }

    /// Position, unit tangent and curvature in one parameter inversion.
    pub fn frame(&self, s: f64) -> Frame {
        let t = self.base_parameter(s);
        let shape = &self.base.shape;
        let p = self.rotate(shape.point(t));
        Frame {
            position: [self.scale * p[0], self.scale * p[1]],
            tangent: self.rotate(shape.tangent(t)),
            curvature: shape.curvature(t) / self.scale,
        }
    }

    /// `position(t) - position(s)`. Short chords are integrated from the
    /// tangent so the result keeps full relative precision.
    pub fn chord_vector(&self, s: f64, t: f64) -> [f64; 2] {
        let gap = t - s;
        let l = self.perimeter();
        if gap.abs() >= SHORT_CHORD * l {
            let (p, q) = (self.position(s), self.position(t));
            return [q[0] - p[0], q[1] - p[1]];
        }
        let panels = (gap.abs() / (SHORT_PANEL * l)).ceil().max(1.0) as usize;
        let h = gap / panels as f64;
        let mut acc = [0.0, 0.0];
        for i in 0..panels {
            let lo = s + h * i as f64;
            let part = quad::gauss_legendre2(&|u| self.tangent(u), lo, lo + h);
            acc[0] += part[0];
            acc[1] += part[1];
        }
        acc
    }

    /// Lifted `int_0^s kappa^(2/3) ds`; equals `lazutkin_perimeter()` at `s = perimeter`.
    pub fn lazutkin_abscissa(&self, s: f64) -> f64 {
        let t0 = self.base_parameter(0.0);
        let t = self.base_parameter(s);
        self.scale.cbrt() * (self.base.lazutkin_at_param(t) - self.base.lazutkin_at_param(t0))
    }

    /// Inverse of [`lazutkin_abscissa`](Self::lazutkin_abscissa), lifted.
    pub fn arc_at_lazutkin(&self, x: f64) -> f64 {
        let t0 = self.base_parameter(0.0);
        let xb = x / self.scale.cbrt() + self.base.lazutkin_at_param(t0);
        let t = self.base.param_at_lazutkin(xb);
        self.arc_of_parameter(t)
    }

    /// `int kappa ds` over the boundary by adaptive quadrature; `2pi` for
    /// every closed convex curve.
    pub fn total_curvature(&self) -> Result<f64> {
        let shape = &self.base.shape;
        quad::integrate(|t| shape.curvature(t) * shape.speed(t), 0.0, TAU, QUAD_TOL)
    }

    /// Smallest curvature over the convexity grid.
    pub fn min_curvature(&self) -> f64 {
        (0..CONVEXITY_GRID)
            .map(|i| self.base.shape.curvature(TAU * i as f64 / CONVEXITY_GRID as f64))
            .fold(f64::INFINITY, f64::min)
            / self.scale
    }

    /// Description that rebuilds this domain through [`DomainSpec::build`].
    pub fn spec(&self) -> DomainSpec {
        DomainSpec {
            shape: self.kind.clone(),
            rotate: self.rotation,
            scale: self.scale,
            origin: self.origin,
        }
    }
}

/// Boundary data at one arc-length position.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub position: [f64; 2],
    pub tangent: [f64; 2],
    pub curvature: f64,
}
