use std::f64::consts::TAU;

use crate::quad::gauss_legendre;

/// Cumulative integral `F(t) = int_0^t f` of a positive `2pi`-periodic
/// integrand, stored at equispaced nodes and completed inside a panel by
/// Gauss-Legendre. Arguments and values are lifted: `F(t + 2pi) = F(t) + total`.
#[derive(Debug, Clone)]
pub(crate) struct CumulativeTable {
    step: f64,
    values: Vec<f64>,
    total: f64,
}

impl CumulativeTable {
    pub fn build<F: Fn(f64) -> f64>(f: &F, panels: usize) -> Self {
        let step = TAU / panels as f64;
        let mut values = Vec::with_capacity(panels + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for i in 0..panels {
            let lo = step * i as f64;
            acc += gauss_legendre(f, lo, lo + step);
            values.push(acc);
        }
        Self { step, values, total: acc }
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn panels(&self) -> usize {
        self.values.len() - 1
    }

    pub fn eval<F: Fn(f64) -> f64>(&self, f: &F, t: f64) -> f64 {
        let turns = (t / TAU).floor();
        let tr = t - turns * TAU;
        let i = ((tr / self.step) as usize).min(self.panels() - 1);
        let lo = self.step * i as f64;
        let within = if tr == lo { 0.0 } else { gauss_legendre(f, lo, tr) };
        turns * self.total + self.values[i] + within
    }

    /// Parameter `t` with `F(t) = target`, Newton-polished from a linear
    /// interpolation inside the bracketing panel.
    pub fn invert<F: Fn(f64) -> f64>(&self, f: &F, target: f64) -> f64 {
        let turns = (target / self.total).floor();
        let r = target - turns * self.total;
        let i = match self.values.binary_search_by(|v| v.total_cmp(&r)) {
            Ok(i) => i.min(self.panels() - 1),
            Err(i) => i.saturating_sub(1).min(self.panels() - 1),
        };
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let lo = self.step * i as f64;
        let mut t = lo + self.step * ((r - v0) / (v1 - v0)).clamp(0.0, 1.0);
        for _ in 0..8 {
            let g = self.eval(f, t) - r;
            let dt = g / f(t);
            t -= dt;
            if dt.abs() <= 1e-9 * (1.0 + t.abs()) {
                break;
            }
        }
        t + turns * TAU
    }
}
