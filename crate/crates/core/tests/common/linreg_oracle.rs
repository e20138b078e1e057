//! Plaintext integer simulators of the regression trainers. Every
//! intermediate is reduced to the same width the circuits use.

use super::{div, wrap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub slope: i64,
    pub intercept: i64,
}

/// Closed-form fit with intermediates at `acc` bits, results at `w` bits.
/// `None` when a division violates the divider contract.
pub fn closed_form(points: &[(i64, i64)], w: u32, acc: u32) -> Option<Params> {
    let a = |v: i128| wrap(v, acc) as i128;
    let m = points.len() as i128;
    let sx = a(points.iter().map(|p| p.0 as i128).sum());
    let sy = a(points.iter().map(|p| p.1 as i128).sum());
    let mut num = 0i128;
    let mut sq = 0i128;
    for &(x, y) in points {
        let centered = a(a(m * x as i128) - sx);
        num = a(num + a(y as i128 * centered));
        sq = a(sq + a(x as i128 * x as i128));
    }
    let den = a(a(m * sq) - a(sx * sx));
    let (slope, _) = div(num as i64, den as i64, acc)?;
    let rest = a(sy - a(slope as i128 * sx));
    let (intercept, _) = div(rest as i64, m as i64, acc)?;
    Some(Params {
        slope: wrap(slope as i128, w),
        intercept: wrap(intercept as i128, w),
    })
}

/// Exact closed-form fit over the rationals, for sanity checks.
pub fn closed_form_real(points: &[(i64, i64)]) -> (f64, f64) {
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0 as f64).sum();
    let sy: f64 = points.iter().map(|p| p.1 as f64).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 * p.1) as f64).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 * p.0) as f64).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    (slope, (sy - slope * sx) / m)
}

#[derive(Clone, Debug)]
pub struct GdTrace {
    pub steps: Vec<Params>,
    /// Mean squared error of the real-valued model before training and
    /// after each iteration.
    pub losses: Vec<f64>,
    /// Some intermediate left its range or a division was invalid.
    pub overflowed: bool,
}

pub fn gd(points: &[(i64, i64)], zoom: i64, k: i64, iterations: usize, w: u32) -> GdTrace {
    let w2 = 2 * w;
    let overflowed = std::cell::Cell::new(false);
    let fit = |v: i128, bits: u32| {
        let r = wrap(v, bits);
        if r as i128 != v {
            overflowed.set(true);
        }
        r as i128
    };
    let mut p = Params {
        slope: 0,
        intercept: 0,
    };
    let mut steps = Vec::new();
    let mut losses = vec![mse(points, p, zoom)];
    for _ in 0..iterations {
        let mut dws = Vec::new();
        let mut dbs = Vec::new();
        for &(x, y) in points {
            let pred = fit(fit(p.slope as i128 * x as i128, w2) + p.intercept as i128, w2);
            let r = fit(fit(y as i128 * zoom as i128, w2) - pred, w2);
            let rx = fit(r * x as i128, w2);
            let q = |v: i128| div(v as i64, k, w).map(|(q, _)| q);
            match (q(r), q(rx)) {
                (Some(db), Some(dw)) => {
                    dbs.push(db);
                    dws.push(dw);
                }
                _ => {
                    overflowed.set(true);
                    dbs.push(0);
                    dws.push(0);
                }
            }
        }
        let mut slope = p.slope as i128;
        for d in dws {
            slope = fit(slope + d as i128, w);
        }
        let mut intercept = p.intercept as i128;
        for d in dbs {
            intercept = fit(intercept + d as i128, w);
        }
        p = Params {
            slope: slope as i64,
            intercept: intercept as i64,
        };
        steps.push(p);
        losses.push(mse(points, p, zoom));
    }
    GdTrace {
        steps,
        losses,
        overflowed: overflowed.get(),
    }
}

pub fn mse(points: &[(i64, i64)], p: Params, zoom: i64) -> f64 {
    let z = zoom as f64;
    points
        .iter()
        .map(|&(x, y)| {
            let e = y as f64 - (p.slope as f64 * x as f64 + p.intercept as f64) / z;
            e * e
        })
        .sum::<f64>()
        / points.len() as f64
}

/// Truncated prediction `(W x + B) / Z` with a `2w`-bit numerator.
pub fn predict(p: Params, x: i64, zoom: i64, w: u32) -> Option<i64> {
    let raw = wrap(p.slope as i128 * x as i128 + p.intercept as i128, 2 * w);
    div(raw, zoom, w).map(|(q, _)| q)
}

/// Truncated mean of squared prediction errors, all at `w` bits.
pub fn loss(points: &[(i64, i64)], p: Params, zoom: i64, w: u32) -> Option<i64> {
    let mut total = 0i128;
    for &(x, y) in points {
        let e = wrap(y as i128 - predict(p, x, zoom, w)? as i128, w) as i128;
        total = wrap(total + wrap(e * e, w) as i128, w) as i128;
    }
    div(total as i64, points.len() as i64, w).map(|(q, _)| q)
}
