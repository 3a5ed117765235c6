//! Brute-force replay of the sine-product inequality behind
//! `ρ = sin(πk/(2k+1))` for `w = (1 − z)/2` and `B = z^{2k}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EXAMPLE6_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example6Row {
    pub n: usize,
    /// `max_θ ∏_{j=0}^{n} |sin((2k)^j θ)|` found on the mesh after refinement.
    pub max_product: f64,
    pub theta: f64,
    /// `sin^n(πk/(2k+1))`.
    pub bound: f64,
    pub slack: f64,
    /// Weighted product `P_n`: mesh maximum and its value at `θ_0`.
    pub weighted_max: f64,
    pub weighted_at_theta0: f64,
    pub weighted_closed_form: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example6Report {
    pub k: usize,
    pub grid: usize,
    pub theta0: f64,
    /// `max |sin^{2k}θ · sin(2kθ)|` versus `sin^{2k+1}(θ_0)`.
    pub step_a_max: f64,
    pub step_a_expected: f64,
    pub rows: Vec<Example6Row>,
    pub max_slack: f64,
    pub pass: bool,
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-15 * hi.abs().max(1.0) {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Mesh maximum of `f` on `[0, π)`, refined around the best local maxima.
fn maximize(f: impl Fn(f64) -> f64 + Sync, grid: usize, extra: &[f64]) -> (f64, f64) {
    let h = PI / grid as f64;
    let vals: Vec<f64> = (0..grid).into_par_iter().map(|i| f(i as f64 * h)).collect();
    let mut peaks: Vec<usize> = (0..grid)
        .filter(|&i| vals[i] >= vals[(i + grid - 1) % grid] && vals[i] >= vals[(i + 1) % grid])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    peaks.truncate(64);
    let mut best = peaks
        .par_iter()
        .map(|&i| {
            let c = i as f64 * h;
            golden_max(&f, c - h, c + h)
        })
        .reduce(|| (0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    for &x in extra {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

pub fn verify_example6(k: usize, n_max: usize, grid: usize) -> Result<Example6Report> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be ≥ 1".into()));
    }
    if !(1..=8).contains(&n_max) {
        return Err(Error::InvalidInput(format!("n_max = {n_max} must lie in 1..=8")));
    }
    if grid < 16 {
        return Err(Error::InvalidInput("grid must have at least 16 points".into()));
    }
    let m = 2.0 * k as f64;
    let theta0 = PI * k as f64 / (2 * k + 1) as f64;
    let s0 = theta0.sin();
    let kk = 2 * k as i32;

    let step_a = |t: f64| (t.sin().powi(kk) * (m * t).sin()).abs();
    let (_, step_a_max) = maximize(step_a, grid, &[theta0]);
    let step_a_expected = s0.powi(kk + 1);

    let mut rows = Vec::with_capacity(n_max);
    let mut pass = (step_a_max - step_a_expected).abs() <= EXAMPLE6_TOL;
    let mut max_slack = f64::NEG_INFINITY;
    for n in 1..=n_max {
        let product = |t: f64| {
            let mut acc = 1.0;
            let mut x = t;
            for _ in 0..=n {
                acc *= x.sin().abs();
                x *= m;
            }
            acc
        };
        let weighted = |t: f64| {
            let mut acc = t.sin().abs().powi(kk);
            let mut x = t * m;
            for _ in 1..n {
                acc *= x.sin().abs().powi(kk + 1);
                x *= m;
            }
            acc * x.sin().abs()
        };
        let (theta, max_product) = maximize(product, grid, &[theta0]);
        let bound = s0.powi(n as i32);
        let slack = bound - max_product;
        let (_, weighted_max) = maximize(weighted, grid, &[theta0]);
        let weighted_at_theta0 = weighted(theta0);
        let weighted_closed_form = s0.powi(n as i32 * (kk + 1));
        pass &= max_product <= bound + EXAMPLE6_TOL;
        pass &= weighted_max <= weighted_at_theta0 + EXAMPLE6_TOL;
        pass &= (weighted_at_theta0 - weighted_closed_form).abs() <= EXAMPLE6_TOL;
        max_slack = max_slack.max(slack);
        rows.push(Example6Row {
            n,
            max_product,
            theta,
            bound,
            slack,
            weighted_max,
            weighted_at_theta0,
            weighted_closed_form,
        });
    }
    Ok(Example6Report {
        k,
        grid,
        theta0,
        step_a_max,
        step_a_expected,
        rows,
        max_slack,
        pass,
    })
}
