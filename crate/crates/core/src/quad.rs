//! Quadrature and scalar root finding used by the geometry tables and the
//! billiard map.

use crate::error::{BilliardError, Result};

/// Gauss-Legendre abscissae and weights on [-1, 1], 8 points.
const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Fixed 8-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL8_X.iter().zip(GL8_W.iter()) {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// [`gauss_legendre`] for a planar-vector integrand.
pub fn gauss_legendre2<F: Fn(f64) -> [f64; 2]>(f: &F, a: f64, b: f64) -> [f64; 2] {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = [0.0, 0.0];
    for (x, w) in GL8_X.iter().zip(GL8_W.iter()) {
        let (u, v) = (f(mid - half * x), f(mid + half * x));
        acc[0] += w * (u[0] + v[0]);
        acc[1] += w * (u[1] + v[1]);
    }
    [acc[0] * half, acc[1] * half]
}

// Gauss-Kronrod 7/15 nodes on [0, 1] (symmetric), from QUADPACK.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature.
///
/// Bisects the panel with the largest error estimate until the summed
/// estimate is below `rel_tol * |integral|` (or an absolute floor of
/// `1e-300`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    const MAX_PANELS: usize = 20_000;
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if !(total.is_finite() && err.is_finite()) {
            return Err(BilliardError::Quadrature { requested: rel_tol, achieved: f64::NAN });
        }
        if err <= rel_tol * total.abs() || err <= 1e-300 {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(BilliardError::Quadrature {
                requested: rel_tol,
                achieved: err / total.abs().max(f64::MIN_POSITIVE),
            });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p.3 > best.1 {
                    (i, p.3)
                } else {
                    best
                }
            });
        let (lo, hi, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

/// Root of an increasing function on `[lo, hi]` with `f(lo) < 0 < f(hi)`.
///
/// Bisection until the bracket is narrower than `coarse`, then Newton steps
/// that fall back to bisection whenever they leave the bracket. `f` returns
/// the value and the derivative.
pub fn safeguarded_newton<F: Fn(f64) -> (f64, f64)>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    coarse: f64,
    tol: f64,
    what: &'static str,
) -> Result<f64> {
    let mut x = 0.5 * (lo + hi);
    let mut last = f64::NAN;
    for _ in 0..200 {
        if hi - lo > coarse {
            let (v, _) = f(x);
            last = v;
            if v == 0.0 {
                return Ok(x);
            }
            if v < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            x = 0.5 * (lo + hi);
            continue;
        }
        let (v, d) = f(x);
        last = v;
        if v == 0.0 {
            return Ok(x);
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = if d > 0.0 { x - v / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= tol || hi - lo <= tol {
            return Ok(x);
        }
    }
    Err(BilliardError::NoConvergence {
        what,
        lo,
        hi,
        residual: last,
    })
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
