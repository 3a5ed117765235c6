//! Weights with prescribed circle spectra: orbit peaks, zeros on the
//! off-orbit preimages, and outer synthesis of the rest.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{find_order_preserving_orbits, periodic_orbits, preimages, Angle, PeriodicOrbit};
use crate::error::{Error, Result};
use crate::outer::{
    grid_for_width, layered_sum_synthesis, min_gap, outer_from_modulus, peak_profile, simple_zero, AnalyticWeight,
    Layer, LayerReport, Peak,
};
use crate::radius::{CircleZero, WcoSpec, Weight};

use super::assemble::{assemble_spectrum, SpectrumOptions, SpectrumResult};

#[derive(Clone, Debug, PartialEq)]
pub struct BuildOptions {
    pub max_period: usize,
    pub grid_m: Option<u32>,
    pub sigma: Option<f64>,
    pub max_layers: usize,
    pub spectrum: SpectrumOptions,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            max_period: 8,
            grid_m: None,
            sigma: None,
            max_layers: 8,
            spectrum: SpectrumOptions::default(),
        }
    }
}

/// First `count` periodic orbits in enumeration order. Distinct periodic
/// orbits are disjoint, and so are their off-orbit preimages.
pub fn select_disjoint_orbits(d: usize, count: usize, max_period: usize) -> Result<Vec<PeriodicOrbit>> {
    let all = periodic_orbits(d, max_period)?;
    if all.len() < count {
        return Err(Error::OrbitShortage(format!(
            "{count} orbits requested, {} exist with period ≤ {max_period}",
            all.len()
        )));
    }
    Ok(all.into_iter().take(count).collect())
}

fn off_orbit_preimages(orbit: &PeriodicOrbit, d: usize) -> Vec<Angle> {
    let mut out = Vec::new();
    for p in orbit.angles() {
        for e in preimages(&p, d) {
            if !e.as_rational().map_or(false, |r| orbit.contains(&r)) {
                out.push(e);
            }
        }
    }
    out
}

struct Design {
    zeros: Vec<CircleZero>,
    peaks: Vec<Peak>,
    sigma: f64,
    grid_m: u32,
}

fn design(d: usize, targets: &[(PeriodicOrbit, f64)], opts: &BuildOptions) -> Design {
    let mut zeros = Vec::new();
    let mut peaks = Vec::new();
    let mut special = Vec::new();
    for (orbit, lambda) in targets {
        for e in off_orbit_preimages(orbit, d) {
            special.push(e.to_f64());
            zeros.push(simple_zero(e));
        }
        for p in orbit.angles() {
            special.push(p.to_f64());
            if *lambda > 0.0 {
                peaks.push(Peak {
                    at: p.to_f64(),
                    value: *lambda,
                });
            } else {
                zeros.push(simple_zero(p));
            }
        }
    }
    let sigma = opts.sigma.unwrap_or_else(|| min_gap(&special) / 20.0);
    let grid_m = opts.grid_m.unwrap_or_else(|| grid_for_width(sigma));
    Design {
        zeros,
        peaks,
        sigma,
        grid_m,
    }
}

/// Weight with `|w| = |λ_j|` on the `j`-th orbit, zeros on the off-orbit
/// preimages, and a floor of `min|λ_j|/4` times the zero factor elsewhere.
/// Only the moduli `|λ_j|` matter: the spectra are rotation invariant.
pub fn theorem6_build_weight(
    d: usize,
    lambdas: &[Complex64],
    opts: &BuildOptions,
) -> Result<(Weight, AnalyticWeight, SpectrumResult)> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("at least one λ is required".into()));
    }
    let mods: Vec<f64> = lambdas.iter().map(|l| l.norm()).collect();
    if mods.windows(2).any(|p| !(p[0] < p[1])) || !mods.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidInput("|λ_j| must be finite and strictly increasing".into()));
    }
    let positive: Vec<f64> = mods.iter().copied().filter(|&x| x > 0.0).collect();
    let floor = positive.first().copied().unwrap_or(1.0) / 4.0;
    let orbits = select_disjoint_orbits(d, mods.len(), opts.max_period)?;
    let targets: Vec<(PeriodicOrbit, f64)> = orbits.into_iter().zip(mods).collect();
    let plan = design(d, &targets, opts);
    let profile = peak_profile(plan.grid_m, &plan.peaks, &plan.zeros, floor, plan.sigma)?;
    let analytic = outer_from_modulus(&profile)?;
    let weight = analytic.to_weight()?;
    let spec = WcoSpec::model(d, weight.clone())?;
    let result = assemble_spectrum(&spec, &opts.spectrum)?;
    Ok((weight, analytic, result))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetOrbit {
    pub orbit: PeriodicOrbit,
    pub lambda: f64,
    pub order_preserving: bool,
    pub achieved_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem11Report {
    pub orbits: Vec<TargetOrbit>,
    pub layers: Vec<LayerReport>,
    /// `|w| > 0` at every grid point farther than a grid step from the zeros.
    pub positive_off_zero_set: bool,
    /// Bound on the neglected tail `Σ_{n > N} |f_n|`.
    pub truncation_bound: f64,
    pub spectrum: SpectrumResult,
}

/// Finite truncation: `λ_0` on an orbit where `φ` reverses cyclic order,
/// `λ_1 > … > λ_N` on order-preserving orbits, one layer per orbit with
/// floors shrinking by `1/4` from layer to layer.
pub fn theorem11_build_weight(
    d: usize,
    lambdas: &[f64],
    n_trunc: usize,
    opts: &BuildOptions,
) -> Result<(Weight, AnalyticWeight, Theorem11Report)> {
    if lambdas.len() < n_trunc + 1 {
        return Err(Error::InvalidInput(format!(
            "{} values given, {} needed",
            lambdas.len(),
            n_trunc + 1
        )));
    }
    let lambdas = &lambdas[..=n_trunc];
    if lambdas.windows(2).any(|p| !(p[0] > p[1])) || !lambdas.iter().all(|&x| x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput("λ_n must be positive and strictly decreasing".into()));
    }
    if n_trunc + 1 > opts.max_layers {
        return Err(Error::LayerBudgetExceeded(format!(
            "{} layers needed, budget {}",
            n_trunc + 1,
            opts.max_layers
        )));
    }
    let sel = find_order_preserving_orbits(d, n_trunc.max(1), opts.max_period).map_err(|e| match e {
        Error::NotFound { requested, achieved } => Error::OrbitShortage(format!(
            "{requested} order-preserving orbits requested, {achieved} found"
        )),
        other => other,
    })?;
    let failing = sel.failing.ok_or_else(|| {
        Error::OrbitShortage(format!("no order-reversing orbit with period ≤ {}", opts.max_period))
    })?;
    let mut targets = vec![(failing, lambdas[0])];
    targets.extend(sel.orbits.into_iter().take(n_trunc).zip(lambdas[1..].iter().copied()));

    let plan = design(d, &targets, opts);
    let base = lambdas[n_trunc] * 1e-4;
    let mut layers = Vec::with_capacity(targets.len());
    let mut caps = Vec::with_capacity(targets.len());
    for (i, (orbit, lambda)) in targets.iter().enumerate() {
        layers.push(Layer {
            peaks: orbit
                .angles()
                .iter()
                .map(|p| Peak {
                    at: p.to_f64(),
                    value: *lambda,
                })
                .collect(),
            floor: base * 0.25f64.powi(i as i32),
            sigma: plan.sigma,
        });
        caps.push(lambda * (1.0 + 1e-3));
    }
    let (analytic, layer_reports) = layered_sum_synthesis(plan.grid_m, &plan.zeros, &layers, &caps, opts.max_layers)?;
    let weight = analytic.to_weight()?;

    let n = 1usize << plan.grid_m;
    let step = 1.0 / n as f64;
    let zero_pts: Vec<f64> = plan.zeros.iter().map(|z| z.angle.to_f64()).collect();
    let positive_off_zero_set = (0..n).all(|k| {
        let t = k as f64 * step;
        zero_pts.iter().any(|&z| crate::circle::circle_gap(z, t) <= step) || weight.modulus_at(t) > 0.0
    });

    let spec = WcoSpec::model(d, weight.clone())?;
    let spectrum = assemble_spectrum(&spec, &opts.spectrum)?;
    let orbits = targets
        .iter()
        .enumerate()
        .map(|(i, (orbit, lambda))| TargetOrbit {
            orbit: orbit.clone(),
            lambda: *lambda,
            order_preserving: i > 0,
            achieved_mean: crate::radius::orbit_geometric_mean(&weight, orbit),
        })
        .collect();
    let truncation_bound = 0.25f64.powi(targets.len() as i32) * base * 4.0 / 3.0;
    Ok((
        weight,
        analytic,
        Theorem11Report {
            orbits,
            layers: layer_reports,
            positive_off_zero_set,
            truncation_bound,
            spectrum,
        },
    ))
}
