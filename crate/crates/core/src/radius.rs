//! Spectral radius by ergodic optimization.
//!
//! `ρ(T) = max_μ exp ∫ log|w| dμ` over `φ`-invariant probability measures,
//! and periodic orbit measures are dense among the ergodic ones. The
//! maximum of the orbit geometric means over periods `≤ m` is therefore a
//! certified lower bound that converges to `ρ(T)` as `m` grows.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::circle::{self, doubling_step, shub_semiconjugacy, Angle, PeriodicOrbit, Rational, SemiconjugacyTable};
use crate::error::{Error, Result};
use crate::outer::{self, AnalyticWeight};

const TWO_PI: f64 = 2.0 * PI;

/// `log|w|` floor for nonzero factors; exact zeros stay `-∞`.
pub const LOG_FLOOR: f64 = -745.0;

pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// log2 of the boundary grid used for tabulated evaluation and grid estimates.
pub const TABLE_LOG2: u32 = 16;

/// Cofactors with more coefficients than this are evaluated from a table.
const HORNER_MAX: usize = 64;

/// Prescribed circle zero: the factor `((z − e^{2πiτ})/2)^order`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleZero {
    pub angle: Angle,
    pub order: u32,
}

#[derive(Clone, Debug)]
enum Cofactor {
    Poly(Vec<Complex64>),
    Tabled {
        coeffs: Vec<Complex64>,
        table: Arc<Vec<Complex64>>,
    },
    Sampled(Arc<Vec<Complex64>>),
}

/// A weight `w` in the disc algebra, stored as prescribed circle zero
/// factors times an analytic cofactor, with a separate unimodular phase.
#[derive(Clone, Debug)]
pub struct Weight {
    zeros: Vec<CircleZero>,
    cofactor: Cofactor,
    phase: f64,
    zero_tol: f64,
    circle_zeros: Vec<Angle>,
}

fn unit(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, TWO_PI * t)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Periodic 4-point Lagrange interpolation on a uniform table.
fn interpolate(table: &[Complex64], t: f64) -> Complex64 {
    let n = table.len();
    let x = t.rem_euclid(1.0) * n as f64;
    let k = x.floor();
    let s = x - k;
    let k = k as isize;
    let at = |i: isize| table[i.rem_euclid(n as isize) as usize];
    let (p0, p1, p2, p3) = (at(k - 1), at(k), at(k + 1), at(k + 2));
    let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3
}

fn linear_interpolate(table: &[Complex64], t: f64) -> Complex64 {
    let n = table.len();
    let x = t.rem_euclid(1.0) * n as f64;
    let k = (x.floor() as usize).min(n - 1);
    let s = x - k as f64;
    table[k] * (1.0 - s) + table[(k + 1) % n] * s
}

impl Weight {
    /// Polynomial weight from Taylor coefficients `c_0..c_K`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::factored(Vec::new(), coeffs)
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c]).expect("finite constant")
    }

    /// `w(z) = ∏ ((z − e^{2πiτ_j})/2)^{α_j} · g(z)` with `g` given by its
    /// Taylor coefficients.
    pub fn factored(zeros: Vec<CircleZero>, cofactor: Vec<Complex64>) -> Result<Self> {
        if cofactor.is_empty() {
            return Err(Error::InvalidInput("weight needs at least one coefficient".into()));
        }
        if cofactor.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("weight coefficients must be finite".into()));
        }
        if zeros.iter().any(|z| z.order == 0) {
            return Err(Error::InvalidInput("zero order must be ≥ 1".into()));
        }
        let cofactor = if cofactor.len() <= HORNER_MAX {
            Cofactor::Poly(cofactor)
        } else {
            let table = outer::boundary_values(&cofactor, 1 << TABLE_LOG2);
            Cofactor::Tabled {
                coeffs: cofactor,
                table: Arc::new(table),
            }
        };
        let mut w = Self {
            zeros,
            cofactor,
            phase: 0.0,
            zero_tol: DEFAULT_ZERO_TOL,
            circle_zeros: Vec::new(),
        };
        w.refresh_circle_zeros();
        Ok(w)
    }

    /// Boundary-only weight from `2^M` uniform samples of `w(e^{2πik/N})`.
    pub fn sampled(samples: Vec<Complex64>, zeros: Vec<Angle>) -> Result<Self> {
        if samples.len() < 4 || !samples.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "sample count {} must be a power of two ≥ 4",
                samples.len()
            )));
        }
        let mut w = Self {
            zeros: Vec::new(),
            cofactor: Cofactor::Sampled(Arc::new(samples)),
            phase: 0.0,
            zero_tol: DEFAULT_ZERO_TOL,
            circle_zeros: zeros,
        };
        w.circle_zeros.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
        Ok(w)
    }

    pub fn from_analytic(a: &AnalyticWeight) -> Result<Self> {
        match (&a.zeros, &a.cofactor) {
            (Some(zeros), Some(cofactor)) => Self::factored(zeros.clone(), cofactor.clone()),
            _ => Self::polynomial(a.coeffs.clone()),
        }
    }

    pub fn with_zero_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("zero_tol must be positive".into()));
        }
        self.zero_tol = tol;
        if !matches!(self.cofactor, Cofactor::Sampled(_)) {
            self.refresh_circle_zeros();
        }
        Ok(self)
    }

    /// `e^{iα} w`. Moduli are untouched bit for bit.
    pub fn rotated(&self, alpha: f64) -> Self {
        let mut w = self.clone();
        w.phase = (w.phase + alpha).rem_euclid(TWO_PI);
        w
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn prescribed_zeros(&self) -> &[CircleZero] {
        &self.zeros
    }

    /// Circle points where `|w| ≤ zero_tol`: the prescribed zeros plus zeros
    /// of the cofactor found by grid search (snapped to small rationals when
    /// they vanish there).
    pub fn circle_zeros(&self) -> &[Angle] {
        &self.circle_zeros
    }

    pub fn has_circle_zeros(&self) -> bool {
        !self.circle_zeros.is_empty()
    }

    fn cofactor_at(&self, t: f64) -> Complex64 {
        match &self.cofactor {
            Cofactor::Poly(c) => horner(c, unit(t)),
            Cofactor::Tabled { table, .. } => interpolate(table, t),
            Cofactor::Sampled(s) => linear_interpolate(s, t),
        }
    }

    fn zero_factors_at(&self, t: f64) -> Complex64 {
        let z = unit(t);
        let mut acc = Complex64::new(1.0, 0.0);
        for zero in &self.zeros {
            let f = (z - unit(zero.angle.to_f64())) * 0.5;
            acc *= f.powu(zero.order);
        }
        acc
    }

    /// `w(e^{2πit})`.
    pub fn value_at(&self, t: f64) -> Complex64 {
        self.zero_factors_at(t) * self.cofactor_at(t) * Complex64::from_polar(1.0, self.phase)
    }

    pub fn value(&self, t: &Angle) -> Complex64 {
        self.value_at(t.to_f64())
    }

    /// `|w(e^{2πit})|`, independent of the phase.
    pub fn modulus_at(&self, t: f64) -> f64 {
        (self.zero_factors_at(t) * self.cofactor_at(t)).norm()
    }

    pub fn modulus(&self, t: &Angle) -> f64 {
        self.modulus_at(t.to_f64())
    }

    /// `log|w|` floored at [`LOG_FLOOR`]; `-∞` at points with `|w| ≤ zero_tol`.
    pub fn log_modulus_at(&self, t: f64) -> f64 {
        let m = self.modulus_at(t);
        if m <= self.zero_tol {
            f64::NEG_INFINITY
        } else {
            m.ln().max(LOG_FLOOR)
        }
    }

    pub fn is_zero_at(&self, t: f64) -> bool {
        self.modulus_at(t) <= self.zero_tol
    }

    /// `w(z)` on the closed disc. Boundary-sampled weights only support `|z| = 1`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let g = match &self.cofactor {
            Cofactor::Poly(c) | Cofactor::Tabled { coeffs: c, .. } => horner(c, z),
            Cofactor::Sampled(_) => {
                if (z.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::Unsupported(
                        "boundary-sampled weight cannot be evaluated inside the disc".into(),
                    ));
                }
                return Ok(self.value_at((z.arg() / TWO_PI).rem_euclid(1.0)));
            }
        };
        let mut acc = g * Complex64::from_polar(1.0, self.phase);
        for zero in &self.zeros {
            acc *= ((z - unit(zero.angle.to_f64())) * 0.5).powu(zero.order);
        }
        Ok(acc)
    }

    /// `log|w|` on the uniform grid `k/2^log2n`.
    pub fn log_modulus_grid(&self, log2n: u32) -> Vec<f64> {
        let n = 1usize << log2n;
        (0..n).into_par_iter().map(|k| self.log_modulus_at(k as f64 / n as f64)).collect()
    }

    /// Supremum of `|w|` on a fine boundary grid.
    pub fn sup_norm(&self) -> f64 {
        let n = 1usize << 14;
        (0..n)
            .into_par_iter()
            .map(|k| self.modulus_at(k as f64 / n as f64))
            .reduce(|| 0.0, f64::max)
    }

    /// Full Taylor coefficients of `w` (zero factors expanded) when available.
    pub fn taylor_coefficients(&self) -> Option<Vec<Complex64>> {
        let base = match &self.cofactor {
            Cofactor::Poly(c) | Cofactor::Tabled { coeffs: c, .. } => c.clone(),
            Cofactor::Sampled(_) => return None,
        };
        let mut acc = base;
        for zero in &self.zeros {
            let r = unit(zero.angle.to_f64());
            for _ in 0..zero.order {
                acc = outer::multiply_linear(&acc, -r * 0.5, Complex64::new(0.5, 0.0));
            }
        }
        let phase = Complex64::from_polar(1.0, self.phase);
        Some(acc.into_iter().map(|c| c * phase).collect())
    }

    /// JSON interchange form.
    pub fn to_analytic(&self, grid_m: u32) -> Option<AnalyticWeight> {
        let coeffs = self.taylor_coefficients()?;
        let (zeros, cofactor) = if self.zeros.is_empty() {
            (None, None)
        } else {
            let phase = Complex64::from_polar(1.0, self.phase);
            let cof = match &self.cofactor {
                Cofactor::Poly(c) | Cofactor::Tabled { coeffs: c, .. } => c.iter().map(|x| x * phase).collect(),
                Cofactor::Sampled(_) => return None,
            };
            (Some(self.zeros.clone()), Some(cof))
        };
        Some(AnalyticWeight {
            coeffs,
            grid_m,
            zeros,
            cofactor,
            analyticity_ratio: None,
        })
    }

    fn refresh_circle_zeros(&mut self) {
        let mut found: Vec<Angle> = self.zeros.iter().map(|z| z.angle).collect();
        let n = 1usize << 12;
        let m: Vec<f64> = (0..n)
            .map(|k| {
                let t = k as f64 / n as f64;
                self.cofactor_at(t).norm()
            })
            .collect();
        let sup = m.iter().cloned().fold(0.0, f64::max);
        for k in 0..n {
            let (prev, here, next) = (m[(k + n - 1) % n], m[k], m[(k + 1) % n]);
            if here > prev || here > next || here > 1e-2 * sup.max(1e-300) {
                continue;
            }
            let center = k as f64 / n as f64;
            let step = 1.0 / n as f64;
            let (t, val) = golden_min(|t| self.cofactor_at(t).norm(), center - step, center + step);
            if val > self.zero_tol {
                continue;
            }
            let angle = snap_rational(t, |r| self.cofactor_at(r).norm() <= self.zero_tol)
                .unwrap_or(Angle::Approx(t.rem_euclid(1.0)));
            if !found.iter().any(|a| a.circle_distance(&angle) < 1e-9) {
                found.push(angle);
            }
        }
        found.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
        self.circle_zeros = found;
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-16 {
            break;
        }
        if f1 < f2 {
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
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Smallest-denominator rational within `1e-9` of `t` accepted by `accept`.
fn snap_rational(t: f64, accept: impl Fn(f64) -> bool) -> Option<Angle> {
    let t = t.rem_euclid(1.0);
    for q in 1..=1000i128 {
        let p = (t * q as f64).round() as i128;
        let r = Rational::new(p, q);
        let a = Angle::from_rational(r);
        if circle::circle_gap(a.to_f64(), t) < 1e-9 && accept(a.to_f64()) {
            return Some(a);
        }
    }
    None
}

/// `w_n(t) = w(t)·w(φt)···w(φ^{n−1}t)`, with the modulus accumulated in log
/// space. A zero factor gives exactly `0`.
pub fn birkhoff_product(w: &Weight, t: &Angle, n: usize, d: usize) -> Complex64 {
    let mut log_mod = 0.0;
    let mut arg = 0.0;
    let mut x = *t;
    for _ in 0..n {
        let v = w.value(&x);
        let m = v.norm();
        if m == 0.0 || m <= w.zero_tol {
            return Complex64::new(0.0, 0.0);
        }
        log_mod += m.ln().max(LOG_FLOOR);
        arg += v.arg();
        x = doubling_step(&x, d);
    }
    Complex64::from_polar(log_mod.exp(), arg)
}

/// `log|w_n(t)|`, `-∞` on a zero factor.
pub fn log_birkhoff(w: &Weight, t: &Angle, n: usize, d: usize) -> f64 {
    let mut acc = 0.0;
    let mut x = *t;
    for _ in 0..n {
        acc += w.log_modulus_at(x.to_f64());
        if acc == f64::NEG_INFINITY {
            return acc;
        }
        x = doubling_step(&x, d);
    }
    acc
}

/// `∫ log|w| dμ_t` for the uniform orbit measure.
pub fn orbit_log_mean(w: &Weight, orbit: &PeriodicOrbit) -> f64 {
    let mut acc = 0.0;
    for p in orbit.points() {
        let l = w.log_modulus_at(circle::rational_to_f64(*p));
        if l == f64::NEG_INFINITY {
            return l;
        }
        acc += l;
    }
    acc / orbit.period() as f64
}

/// `(∏ |w(t)|)^{1/m}` over the orbit; `0` if the orbit meets a zero of `w`.
pub fn orbit_geometric_mean(w: &Weight, orbit: &PeriodicOrbit) -> f64 {
    orbit_log_mean(w, orbit).exp()
}

/// Operator data: the model degree after reduction to `z^d` and the weight
/// seen on the model circle.
#[derive(Clone, Debug)]
pub struct WcoSpec {
    degree: usize,
    weight: Weight,
    original: Option<(BlaschkeProduct, SemiconjugacyTable)>,
}

impl WcoSpec {
    pub fn model(degree: usize, weight: Weight) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidInput(format!("degree {degree} < 2")));
        }
        Ok(Self {
            degree,
            weight,
            original: None,
        })
    }

    /// Transports `w` through the boundary semiconjugacy `h` of `B` onto the
    /// model circle: the stored weight is `w∘h^{-1}` sampled on `2^sample_log2`
    /// points. Monomial `B = z^d` needs no transport.
    pub fn from_blaschke(
        b: BlaschkeProduct,
        weight: Weight,
        grid: usize,
        iters: usize,
        sample_log2: u32,
    ) -> Result<Self> {
        let d = b.degree();
        if b.is_monomial() && b.rotation() == 0.0 {
            return Self::model(d, weight);
        }
        let table = shub_semiconjugacy(&b, grid, iters)?;
        let n = 1usize << sample_log2;
        let samples: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|k| weight.value_at(table.inverse(k as f64 / n as f64)))
            .collect();
        let zeros: Vec<Angle> = weight
            .circle_zeros()
            .iter()
            .map(|z| Angle::Approx(table.forward(z.to_f64()).rem_euclid(1.0)))
            .collect();
        let transported = Weight::sampled(samples, zeros)?.with_zero_tol(weight.zero_tol())?;
        Ok(Self {
            degree: d,
            weight: transported,
            original: Some((b, table)),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn original(&self) -> Option<&(BlaschkeProduct, SemiconjugacyTable)> {
        self.original.as_ref()
    }

    /// Same operator with `w` replaced by `e^{iα} w`.
    pub fn rotated(&self, alpha: f64) -> Self {
        Self {
            degree: self.degree,
            weight: self.weight.rotated(alpha),
            original: self.original.clone(),
        }
    }
}

/// Period cap keeping the enumerated orbit points at or below `10^6`
/// (and at most 12).
pub fn default_max_period(d: usize) -> usize {
    let mut total: u128 = 0;
    let mut m = 0;
    while m < 12 {
        let next = match (d as u128).checked_pow(m as u32 + 1) {
            Some(p) => p - 1,
            None => break,
        };
        if total + next > 1_000_000 {
            break;
        }
        total += next;
        m += 1;
    }
    m.max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// Largest orbit geometric mean: a certified lower bound on `ρ(T)`.
    pub rho_lower: f64,
    /// `max_t |w_n(t)|^{1/n}` on a `2^16` grid at `n = max_period` (heuristic).
    #[serde(rename = "rho_upper_est")]
    pub rho_grid_upper: f64,
    pub gap: f64,
    pub orbit: PeriodicOrbit,
    pub max_period: usize,
    pub orbits_examined: usize,
}

pub fn spectral_radius(spec: &WcoSpec, max_period: usize) -> Result<RadiusEstimate> {
    let d = spec.degree();
    let w = spec.weight();
    let orbits = circle::periodic_orbits(d, max_period)?;
    let means: Vec<f64> = orbits.par_iter().map(|o| orbit_log_mean(w, o)).collect();
    // strict improvement keeps the earliest (period, base) on ties
    let mut best = 0;
    for (i, &m) in means.iter().enumerate() {
        if m > means[best] {
            best = i;
        }
    }
    let rho_lower = means[best].exp();
    let rho_grid_upper = grid_radius_estimate(w, d, max_period);
    Ok(RadiusEstimate {
        rho_lower,
        rho_grid_upper,
        gap: rho_grid_upper - rho_lower,
        orbit: orbits[best].clone(),
        max_period,
        orbits_examined: orbits.len(),
    })
}

/// `max_k |w_n(k/N)|^{1/n}` on `N = 2^16`; the grid is `φ`-invariant.
pub fn grid_radius_estimate(w: &Weight, d: usize, n: usize) -> f64 {
    let log = w.log_modulus_grid(TABLE_LOG2);
    let size = log.len();
    let best = (0..size)
        .into_par_iter()
        .map(|k| {
            let mut idx = k;
            let mut acc = 0.0;
            for _ in 0..n {
                acc += log[idx];
                if acc == f64::NEG_INFINITY {
                    break;
                }
                idx = (idx * d) % size;
            }
            acc
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    (best / n as f64).exp()
}

/// Exact angle helper used by tests and the engine.
pub fn angle(p: i128, q: i128) -> Angle {
    Angle::from_rational(Rational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_one_minus_z() -> Weight {
        Weight::polynomial(vec![Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)]).unwrap()
    }

    #[test]
    fn birkhoff_examples() {
        let w = half_one_minus_z();
        let v = birkhoff_product(&w, &angle(1, 3), 2, 2);
        assert!((v.norm() - 0.75).abs() < 1e-15);
        let c = Weight::constant(Complex64::new(0.7, 0.0));
        let v = birkhoff_product(&c, &angle(1, 5), 6, 2);
        assert!((v - Complex64::new(0.7f64.powi(6), 0.0)).norm() < 1e-14);
        for d in [3, 5, 7] {
            for n in 1..8 {
                let v = birkhoff_product(&w, &angle(1, 2), n, d);
                assert!((v.norm() - 1.0).abs() < 1e-14);
            }
        }
        assert_eq!(birkhoff_product(&w, &angle(0, 1), 3, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn geometric_means() {
        let w = half_one_minus_z();
        let pair = PeriodicOrbit::of(Rational::new(1, 3), 2, 4).unwrap();
        assert!((orbit_geometric_mean(&w, &pair) - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let fixed = PeriodicOrbit::of(Rational::new(0, 1), 2, 4).unwrap();
        assert_eq!(orbit_geometric_mean(&w, &fixed), 0.0);
        let one = Weight::constant(Complex64::new(1.0, 0.0));
        assert_eq!(orbit_geometric_mean(&one, &pair), 1.0);
    }

    #[test]
    fn zero_detection_snaps_to_rationals() {
        let w = half_one_minus_z();
        assert_eq!(w.circle_zeros(), &[angle(0, 1)]);
        // (z² + 1)/2 vanishes at ±i
        let w = Weight::polynomial(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)])
            .unwrap();
        assert_eq!(w.circle_zeros(), &[angle(1, 4), angle(3, 4)]);
        assert!(!Weight::constant(Complex64::new(2.0, 0.0)).has_circle_zeros());
    }

    #[test]
    fn constant_weight_radius() {
        let spec = WcoSpec::model(2, Weight::constant(Complex64::new(0.4, 0.3))).unwrap();
        for m in 1..6 {
            let r = spectral_radius(&spec, m).unwrap();
            assert!((r.rho_lower - 0.5).abs() < 1e-15);
            assert!((r.rho_grid_upper - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn default_periods() {
        assert_eq!(default_max_period(2), 12);
        assert_eq!(default_max_period(8), 6);
        assert!(default_max_period(1000) >= 1);
    }

    #[test]
    fn rotation_leaves_moduli_bitwise() {
        let w = half_one_minus_z();
        let r = w.rotated(1.234);
        for k in 0..100 {
            let t = k as f64 / 97.0;
            assert_eq!(w.modulus_at(t), r.modulus_at(t));
        }
        assert!((r.value_at(0.3) - w.value_at(0.3) * Complex64::from_polar(1.0, 1.234)).norm() < 1e-15);
    }

    #[test]
    fn sampled_weight_rejects_bad_grid() {
        assert!(Weight::sampled(vec![Complex64::new(1.0, 0.0); 6], vec![]).is_err());
        let w = Weight::sampled(vec![Complex64::new(1.0, 0.0); 8], vec![]).unwrap();
        assert!(w.evaluate(Complex64::new(0.1, 0.0)).is_err());
    }
}
