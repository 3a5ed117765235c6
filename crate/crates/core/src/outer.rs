//! Disc-algebra weights with a prescribed boundary modulus.
//!
//! A profile `p` is split as `p = |Z|·q` where `Z(z) = ∏ ((z − ζ_j)/2)^{α_j}`
//! carries the prescribed circle zeros and `q > 0` is smooth. The outer
//! function `O = exp(log q + i·(log q)~)` has `|O| = q` on the circle, and
//! `w = Z·O`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circle::Angle;
use crate::error::{Error, Result};
use crate::json;
use crate::radius::{CircleZero, Weight};

const TWO_PI: f64 = 2.0 * PI;

pub const DEFAULT_GRID_M: u32 = 12;
pub const ANALYTICITY_TOL: f64 = 1e-8;
pub const COEFF_TAIL: f64 = 1e-12;

/// Interchange form of a synthesized (or user supplied) weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticWeight {
    #[serde(with = "json::complex_vec")]
    pub coeffs: Vec<Complex64>,
    #[serde(rename = "grid_M", default = "default_grid_m")]
    pub grid_m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<CircleZero>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "json::opt_complex_vec")]
    pub cofactor: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyticity_ratio: Option<f64>,
}

fn default_grid_m() -> u32 {
    DEFAULT_GRID_M
}

impl AnalyticWeight {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self {
            coeffs,
            grid_m: DEFAULT_GRID_M,
            zeros: None,
            cofactor: None,
            analyticity_ratio: None,
        }
    }

    pub fn to_weight(&self) -> Result<Weight> {
        Weight::from_analytic(self)
    }

    /// `w(e^{2πik/N})` for `N = 2^grid_M`.
    pub fn boundary_values(&self) -> Vec<Complex64> {
        boundary_values(&self.coeffs, 1 << self.grid_m)
    }
}

fn fft(buf: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(buf);
}

/// Values `Σ c_j e^{2πijk/n}` of a polynomial on the `n`-point grid.
pub(crate) fn boundary_values(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, c) in coeffs.iter().enumerate() {
        buf[j % n] += c;
    }
    fft(&mut buf, true);
    buf
}

/// Fourier coefficients `ĉ_j = (1/n) Σ_k f_k e^{−2πijk/n}`.
fn fourier(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len() as f64;
    let mut buf = samples.to_vec();
    fft(&mut buf, false);
    for c in &mut buf {
        *c /= n;
    }
    buf
}

/// `(c0 + c1 z)·a(z)` on coefficient vectors.
pub(crate) fn multiply_linear(a: &[Complex64], c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + 1];
    for (j, x) in a.iter().enumerate() {
        out[j] += c0 * x;
        out[j + 1] += c1 * x;
    }
    out
}

/// Share of spectral energy at negative frequencies of a boundary sample.
pub fn analyticity_ratio(samples: &[Complex64]) -> f64 {
    let c = fourier(samples);
    let n = c.len();
    let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let neg: f64 = c[n / 2 + 1..].iter().map(|x| x.norm_sqr()).sum();
    neg / total
}

/// Harmonic conjugate of a real periodic sample: Fourier multiplier
/// `−i·sign(j)`, zero at the mean and at the Nyquist frequency.
pub fn conjugate_function(log_samples: &[f64]) -> Result<Vec<f64>> {
    let n = log_samples.len();
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!("grid size {n} must be a power of two ≥ 4")));
    }
    if log_samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("conjugate_function needs finite samples".into()));
    }
    let mut buf: Vec<Complex64> = log_samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft(&mut buf, false);
    let mi = Complex64::new(0.0, -1.0);
    buf[0] = Complex64::new(0.0, 0.0);
    buf[n / 2] = Complex64::new(0.0, 0.0);
    for (j, c) in buf.iter_mut().enumerate().skip(1) {
        if j < n / 2 {
            *c *= mi;
        } else if j > n / 2 {
            *c *= -mi;
        }
    }
    fft(&mut buf, true);
    Ok(buf.into_iter().map(|c| c.re / n as f64).collect())
}

/// `|Z(e^{2πit})| = ∏ |sin π(t − τ_j)|^{α_j}`.
pub fn zero_factor_modulus(zeros: &[CircleZero], t: f64) -> f64 {
    zeros
        .iter()
        .map(|z| {
            let f = (Complex64::from_polar(1.0, TWO_PI * t) - Complex64::from_polar(1.0, TWO_PI * z.angle.to_f64())) * 0.5;
            f.norm().powi(z.order as i32)
        })
        .product()
}

/// `d/dt log|Z(e^{2πit})|`.
pub fn zero_factor_log_slope(zeros: &[CircleZero], t: f64) -> f64 {
    zeros
        .iter()
        .map(|z| z.order as f64 * PI / (PI * (t - z.angle.to_f64())).tan())
        .sum()
}

/// Target boundary modulus on a `2^M` grid, stored as the smooth residual
/// `q = p/|Z|` together with the prescribed zeros.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    residual: Vec<f64>,
    zeros: Vec<CircleZero>,
}

impl ModulusProfile {
    /// From full modulus samples `p(k/N)`; grid points sitting on a zero take
    /// the residual of their neighbours.
    pub fn from_samples(samples: Vec<f64>, zeros: Vec<CircleZero>) -> Result<Self> {
        let n = samples.len();
        check_grid(n)?;
        if samples.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidInput("profile samples must be finite and ≥ 0".into()));
        }
        let mut residual = vec![f64::NAN; n];
        for k in 0..n {
            let z = zero_factor_modulus(&zeros, k as f64 / n as f64);
            if z > 1e-9 {
                residual[k] = samples[k] / z;
            }
        }
        for k in 0..n {
            if residual[k].is_nan() {
                let left = (1..n).map(|i| residual[(k + n - i) % n]).find(|x| !x.is_nan());
                let right = (1..n).map(|i| residual[(k + i) % n]).find(|x| !x.is_nan());
                residual[k] = match (left, right) {
                    (Some(a), Some(b)) => 0.5 * (a + b),
                    _ => return Err(Error::InvalidInput("profile vanishes everywhere".into())),
                };
            }
        }
        Self::from_residual(residual, zeros)
    }

    pub fn from_residual(residual: Vec<f64>, zeros: Vec<CircleZero>) -> Result<Self> {
        check_grid(residual.len())?;
        if residual.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::InvalidInput(
                "residual modulus must be strictly positive off the prescribed zeros".into(),
            ));
        }
        let log_sum: f64 = residual.iter().map(|x| x.ln()).sum::<f64>() / residual.len() as f64;
        if log_sum < -1e6 {
            return Err(Error::InvalidInput("log p is not integrable on the grid".into()));
        }
        Ok(Self { residual, zeros })
    }

    /// `p(t) = f(t)` sampled on `2^m` points.
    pub fn from_fn(m: u32, zeros: Vec<CircleZero>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let n = 1usize << m;
        Self::from_samples((0..n).map(|k| f(k as f64 / n as f64)).collect(), zeros)
    }

    pub fn grid_m(&self) -> u32 {
        self.residual.len().trailing_zeros()
    }

    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    pub fn zeros(&self) -> &[CircleZero] {
        &self.zeros
    }

    /// Full target modulus `p = |Z|·q` on the grid.
    pub fn samples(&self) -> Vec<f64> {
        let n = self.residual.len();
        (0..n)
            .map(|k| self.residual[k] * zero_factor_modulus(&self.zeros, k as f64 / n as f64))
            .collect()
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n < 16 || !n.is_power_of_two() || n > 1 << 20 {
        return Err(Error::InvalidInput(format!("profile grid {n} must be a power of two in [16, 2^20]")));
    }
    Ok(())
}

/// Outer part only: Taylor coefficients of `O` with `|O| = q`, truncated at
/// [`COEFF_TAIL`], plus the negative-frequency energy ratio.
fn outer_coefficients(residual: &[f64]) -> Result<(Vec<Complex64>, f64)> {
    let n = residual.len();
    let u: Vec<f64> = residual.iter().map(|x| x.ln()).collect();
    let v = conjugate_function(&u)?;
    let values: Vec<Complex64> = u.iter().zip(&v).map(|(&a, &b)| Complex64::new(a, b).exp()).collect();
    let c = fourier(&values);
    let total: f64 = c.iter().map(|x| x.norm_sqr()).sum();
    let neg: f64 = c[n / 2 + 1..].iter().map(|x| x.norm_sqr()).sum();
    let ratio = if total > 0.0 { neg / total } else { 0.0 };
    let mut coeffs = c[..=n / 2].to_vec();
    while coeffs.len() > 1 && coeffs.last().map_or(false, |x| x.norm() < COEFF_TAIL) {
        coeffs.pop();
    }
    Ok((coeffs, ratio))
}

fn expand(zeros: &[CircleZero], cofactor: &[Complex64]) -> Vec<Complex64> {
    let mut acc = cofactor.to_vec();
    for z in zeros {
        let r = Complex64::from_polar(1.0, TWO_PI * z.angle.to_f64());
        for _ in 0..z.order {
            acc = multiply_linear(&acc, -r * 0.5, Complex64::new(0.5, 0.0));
        }
    }
    acc
}

/// `w = Z·O` with `|w| = p` on the circle.
pub fn outer_from_modulus(profile: &ModulusProfile) -> Result<AnalyticWeight> {
    outer_from_modulus_with(profile, ANALYTICITY_TOL)
}

pub fn outer_from_modulus_with(profile: &ModulusProfile, analyticity_tol: f64) -> Result<AnalyticWeight> {
    let (cofactor, ratio) = outer_coefficients(&profile.residual)?;
    if ratio > analyticity_tol {
        return Err(Error::NonAnalytic {
            ratio,
            tol: analyticity_tol,
        });
    }
    Ok(assemble(profile.grid_m(), profile.zeros.clone(), cofactor, ratio))
}

fn assemble(grid_m: u32, zeros: Vec<CircleZero>, cofactor: Vec<Complex64>, ratio: f64) -> AnalyticWeight {
    let coeffs = expand(&zeros, &cofactor);
    let (zeros, cofactor) = if zeros.is_empty() {
        (None, None)
    } else {
        (Some(zeros), Some(cofactor))
    };
    AnalyticWeight {
        coeffs,
        grid_m,
        zeros,
        cofactor,
        analyticity_ratio: Some(ratio),
    }
}

/// One peak of a [`peak_profile`]: `|w(t)| = value` with `t` a local maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub at: f64,
    pub value: f64,
}

/// Residual profile with Gaussian peaks of width `sigma` over the constant
/// floor `baseline`. The peak at `t_p` is tilted by `−(log|Z|)'(t_p)` so that
/// `|w| = |Z|·q` has a critical point there and reaches exactly `value`.
pub fn peak_profile(
    m: u32,
    peaks: &[Peak],
    zeros: &[CircleZero],
    baseline: f64,
    sigma: f64,
) -> Result<ModulusProfile> {
    if !(baseline > 0.0) || !(sigma > 0.0) {
        return Err(Error::InvalidInput("baseline and width must be positive".into()));
    }
    for p in peaks {
        if !(p.value > 0.0) {
            return Err(Error::InvalidInput("peak values must be positive".into()));
        }
        if zero_factor_modulus(zeros, p.at) < 1e-9 {
            return Err(Error::InvalidInput(format!("peak at {} sits on a prescribed zero", p.at)));
        }
    }
    let lb = baseline.ln();
    let shaped: Vec<(f64, f64, f64)> = peaks
        .iter()
        .map(|p| {
            let height = (p.value / zero_factor_modulus(zeros, p.at)).ln() - lb;
            (p.at, height, zero_factor_log_slope(zeros, p.at))
        })
        .collect();
    let n = 1usize << m;
    let residual = (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            let mut l = lb;
            for &(at, height, slope) in &shaped {
                let x = (t - at + 0.5).rem_euclid(1.0) - 0.5;
                let g = (-0.5 * (x / sigma).powi(2)).exp();
                if g > 0.0 {
                    l += g * (height - slope * x);
                }
            }
            l.exp()
        })
        .collect();
    ModulusProfile::from_residual(residual, zeros.to_vec())
}

/// One layer for [`layered_sum_synthesis`].
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub peaks: Vec<Peak>,
    pub floor: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub index: usize,
    pub sup: f64,
    pub cap: f64,
    pub floor: f64,
    pub analyticity_ratio: f64,
}

/// `w = Z·Σ O_n` where each `O_n` is the outer function of one layer's
/// residual profile. All layers share the zero factor `Z`.
pub fn layered_sum_synthesis(
    m: u32,
    zeros: &[CircleZero],
    layers: &[Layer],
    caps: &[f64],
    max_layers: usize,
) -> Result<(AnalyticWeight, Vec<LayerReport>)> {
    if layers.is_empty() {
        return Err(Error::InvalidInput("at least one layer is required".into()));
    }
    if layers.len() > max_layers {
        return Err(Error::LayerBudgetExceeded(format!(
            "{} layers requested, budget {max_layers}",
            layers.len()
        )));
    }
    if caps.len() != layers.len() {
        return Err(Error::InvalidInput("one cap per layer".into()));
    }
    let mut sum: Vec<Complex64> = Vec::new();
    let mut reports = Vec::with_capacity(layers.len());
    let mut worst = 0.0f64;
    for (i, layer) in layers.iter().enumerate() {
        let profile = peak_profile(m, &layer.peaks, zeros, layer.floor, layer.sigma)?;
        let (coeffs, ratio) = outer_coefficients(profile.residual())?;
        worst = worst.max(ratio);
        let full = expand(zeros, &coeffs);
        let sup = boundary_values(&full, 1 << (m + 2)).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if sup > caps[i] * (1.0 + 1e-6) {
            return Err(Error::LayerBudgetExceeded(format!(
                "layer {i} has sup {sup} above its cap {}",
                caps[i]
            )));
        }
        if sum.len() < coeffs.len() {
            sum.resize(coeffs.len(), Complex64::new(0.0, 0.0));
        }
        for (s, c) in sum.iter_mut().zip(&coeffs) {
            *s += c;
        }
        reports.push(LayerReport {
            index: i,
            sup,
            cap: caps[i],
            floor: layer.floor,
            analyticity_ratio: ratio,
        });
    }
    if worst > ANALYTICITY_TOL {
        return Err(Error::NonAnalytic {
            ratio: worst,
            tol: ANALYTICITY_TOL,
        });
    }
    Ok((assemble(m, zeros.to_vec(), sum, worst), reports))
}

/// Smallest circle gap among `points`, ignoring coincident entries.
pub fn min_gap(points: &[f64]) -> f64 {
    let mut best = 1.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let g = crate::circle::circle_gap(*a, *b);
            if g > 0.0 {
                best = best.min(g);
            }
        }
    }
    best
}

/// Grid exponent giving at least 16 samples per `sigma`, within `[12, 16]`.
pub fn grid_for_width(sigma: f64) -> u32 {
    let need = (16.0 / sigma).log2().ceil() as i64;
    need.clamp(DEFAULT_GRID_M as i64, 16) as u32
}

/// First-order zero at `t`.
pub fn simple_zero(angle: Angle) -> CircleZero {
    CircleZero { angle, order: 1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_of_modes() {
        let n = 1 << 12;
        let c: Vec<f64> = vec![1.7; n];
        assert!(conjugate_function(&c).unwrap().iter().all(|x| x.abs() < 1e-14));
        let cos: Vec<f64> = (0..n).map(|k| (TWO_PI * k as f64 / n as f64).cos()).collect();
        let v = conjugate_function(&cos).unwrap();
        for (k, x) in v.iter().enumerate() {
            assert!((x - (TWO_PI * k as f64 / n as f64).sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn conjugate_of_log_sine() {
        // log|1 − e^{iθ}| has conjugate (θ − π)/2 on (0, 2π)
        let n = 1 << 12;
        let mut u: Vec<f64> = (0..n)
            .map(|k| (2.0 * (PI * k as f64 / n as f64).sin()).abs().ln())
            .collect();
        // grid-scale mollifier: the zero-mean value at the singular sample
        u[0] = -u[1..].iter().sum::<f64>();
        let v = conjugate_function(&u).unwrap();
        for k in (0..n).step_by(7) {
            let t = k as f64 / n as f64;
            if t < 0.15 || t > 0.85 {
                continue;
            }
            let expected = (TWO_PI * t - PI) / 2.0;
            assert!((v[k] - expected).abs() < 1e-3, "t={t} {} vs {expected}", v[k]);
        }
    }

    #[test]
    fn recovers_half_one_minus_z() {
        let zero = simple_zero(Angle::zero());
        let profile = ModulusProfile::from_fn(12, vec![zero], |t| (PI * t).sin().abs()).unwrap();
        let w = outer_from_modulus(&profile).unwrap();
        assert!(w.analyticity_ratio.unwrap() <= 1e-8);
        let unit = w.coeffs[0] / Complex64::new(0.5, 0.0);
        assert!((unit.norm() - 1.0).abs() < 1e-6);
        let target = [Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)];
        for (j, c) in w.coeffs.iter().enumerate() {
            let want = target.get(j).copied().unwrap_or_default() * unit;
            assert!((c - want).norm() < 1e-6, "coefficient {j}: {c}");
        }
    }

    #[test]
    fn constant_profile_gives_constant() {
        let p = ModulusProfile::from_fn(12, vec![], |_| 1.0).unwrap();
        let w = outer_from_modulus(&p).unwrap();
        assert_eq!(w.coeffs.len(), 1);
        assert!((w.coeffs[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn peaks_hit_their_values() {
        let zeros = vec![simple_zero(Angle::exact(1, 2).unwrap())];
        let peaks = [Peak { at: 0.0, value: 0.5 }, Peak { at: 0.3, value: 0.9 }];
        let p = peak_profile(13, &peaks, &zeros, 0.1, 0.01).unwrap();
        let w = outer_from_modulus(&p).unwrap().to_weight().unwrap();
        assert!((w.modulus_at(0.0) - 0.5).abs() < 1e-6);
        assert!((w.modulus_at(0.3) - 0.9).abs() < 1e-6);
        assert_eq!(w.modulus_at(0.5), 0.0);
        for dx in [1e-3, -1e-3, 5e-3, -5e-3] {
            assert!(w.modulus_at(0.3 + dx) < 0.9);
        }
    }

    #[test]
    fn idempotent_in_modulus() {
        let zeros = vec![simple_zero(Angle::exact(1, 2).unwrap())];
        let p = peak_profile(12, &[Peak { at: 0.1, value: 0.8 }], &zeros, 0.2, 0.02).unwrap();
        let a = outer_from_modulus(&p).unwrap();
        let n = 1 << 12;
        let vals = a.boundary_values();
        let again = ModulusProfile::from_samples(vals.iter().map(|v| v.norm()).collect(), zeros).unwrap();
        let b = outer_from_modulus(&again).unwrap();
        let len = a.coeffs.len().max(b.coeffs.len());
        let unit = b.coeffs[0] / a.coeffs[0];
        for j in 0..len {
            let x = a.coeffs.get(j).copied().unwrap_or_default() * unit;
            let y = b.coeffs.get(j).copied().unwrap_or_default();
            assert!((x - y).norm() < 1e-6, "coefficient {j} of {n}");
        }
    }

    #[test]
    fn rough_profile_is_rejected() {
        let p = ModulusProfile::from_fn(12, vec![], |t| if (t * 64.0).floor() as i64 % 2 == 0 { 1.0 } else { 1e-6 })
            .unwrap();
        assert!(matches!(outer_from_modulus(&p), Err(Error::NonAnalytic { .. })));
    }

    #[test]
    fn layer_budget() {
        let layer = Layer {
            peaks: vec![Peak { at: 0.0, value: 0.5 }],
            floor: 0.1,
            sigma: 0.02,
        };
        let r = layered_sum_synthesis(12, &[], &[layer.clone(), layer.clone()], &[1.0, 1.0], 1);
        assert!(matches!(r, Err(Error::LayerBudgetExceeded(_))));
        let (w, rep) = layered_sum_synthesis(12, &[], &[layer], &[1.0], 4).unwrap();
        assert_eq!(rep.len(), 1);
        let w = w.to_weight().unwrap();
        assert!((w.modulus_at(0.0) - 0.5).abs() < 1e-6);
    }
}
