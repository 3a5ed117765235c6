//! Annuli in `σ_usf(T)` for symbols with an attracting boundary fixed point.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, Kind};
use crate::error::{Error, Result};
use crate::radius::Weight;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasinArc {
    /// Endpoints in lifted coordinates: `left ≤ t0 ≤ right`.
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusReport {
    pub kind: Kind,
    pub t0: f64,
    pub arc: BasinArc,
    /// `|F(t) − t| mod 1` at both endpoints.
    pub endpoint_residuals: [f64; 2],
    pub r_inner: f64,
    pub r_outer: f64,
    /// Share of interior mesh points whose orbit reached `t0` within tolerance.
    pub mesh_converged: f64,
    /// The inclusion `{r_inner ≤ |λ| ≤ 1} ⊆ σ_usf(T)` is cited, not verified.
    pub certified_by: String,
}

/// Continuous lift of `t ↦ arg B(e^{2πit})/2π` along a walk in `t`.
struct LiftWalker<'a> {
    b: &'a BlaschkeProduct,
    value: f64,
}

impl LiftWalker<'_> {
    fn step_to(&mut self, t: f64) -> f64 {
        let raw = self.b.boundary_angle(t);
        let k = (self.value - raw).round();
        self.value = raw + k;
        self.value
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let x = (a - b).rem_euclid(1.0);
    x.min(1.0 - x)
}

/// Nearest sign change of `G(t) = F(t) − t` moving from `t0` in direction `dir`.
fn endpoint(b: &BlaschkeProduct, t0: f64, dir: f64, grid: usize) -> Result<f64> {
    let h = dir / grid as f64;
    let mut walker = LiftWalker {
        b,
        value: b.boundary_angle(t0),
    };
    // G(t0) is an integer; shift it to 0
    let offset = walker.value - t0;
    let g = |f: f64, t: f64| f - t - offset;
    let mut prev_t = t0 + h;
    let mut prev_g = g(walker.step_to(prev_t), prev_t);
    let attracting = prev_g * dir < 0.0;
    if !attracting {
        return Ok(t0);
    }
    for i in 2..=grid {
        let t = t0 + h * i as f64;
        let gt = g(walker.step_to(t), t);
        if gt * prev_g <= 0.0 {
            let (mut lo, mut hi) = (prev_t, t);
            let mut base = LiftWalker {
                b,
                value: prev_g + prev_t + offset,
            };
            let g_lo = prev_g;
            while (hi - lo).abs() > 1e-13 {
                let mid = 0.5 * (lo + hi);
                let gm = g(base.step_to(mid), mid);
                base.value = prev_g + prev_t + offset;
                if gm * g_lo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_g = gt;
    }
    Err(Error::BasinUnresolved(format!(
        "no fixed point of the lift within one turn of {t0}"
    )))
}

/// Immediate basin of the boundary Wolff–Denjoy point and the inner radius
/// `max |w|` over its endpoints.
pub fn proposition1_annulus(b: &BlaschkeProduct, w: &Weight, grid: usize) -> Result<AnnulusReport> {
    if grid < 64 {
        return Err(Error::InvalidInput("grid must be ≥ 64".into()));
    }
    let c = b.classify()?;
    if !matches!(c.kind, Kind::Hyperbolic | Kind::SingleParabolic) {
        return Err(Error::Unsupported(format!(
            "{:?} symbol has no attracting boundary point",
            c.kind
        )));
    }
    let t0 = (c.wolff_denjoy_point.arg() / TWO_PI).rem_euclid(1.0);
    if w.has_circle_zeros() {
        return Err(Error::InvalidInput("w must not vanish on the circle".into()));
    }
    let at0 = w.modulus_at(t0);
    if (at0 - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!("|w(z0)| = {at0}, expected 1")));
    }
    let mesh = 1 << 14;
    for k in 0..mesh {
        let t = k as f64 / mesh as f64;
        if circle_dist(t, t0) > 1e-3 && w.modulus_at(t) >= 1.0 {
            return Err(Error::InvalidInput(format!("|w| ≥ 1 at t = {t} away from z0")));
        }
    }

    let right = endpoint(b, t0, 1.0, grid)?;
    let left = endpoint(b, t0, -1.0, grid)?;
    if right - left <= 0.0 {
        return Err(Error::BasinUnresolved("the basin arc is empty".into()));
    }
    let residual = |t: f64| {
        let x = (b.boundary_angle(t) - t).rem_euclid(1.0);
        x.min(1.0 - x)
    };
    let endpoint_residuals = [residual(left), residual(right)];

    let samples = 64;
    let tol = if c.kind == Kind::Hyperbolic { 1e-6 } else { 1e-2 };
    let mut converged = 0;
    for i in 1..samples {
        let mut t = left + (right - left) * i as f64 / samples as f64;
        for _ in 0..100_000 {
            if circle_dist(t, t0) < tol {
                break;
            }
            t = b.boundary_angle(t);
        }
        if circle_dist(t, t0) < tol {
            converged += 1;
        }
    }
    let r_inner = w.modulus_at(left).max(w.modulus_at(right));
    Ok(AnnulusReport {
        kind: c.kind,
        t0,
        arc: BasinArc { left, right },
        endpoint_residuals,
        r_inner,
        r_outer: at0,
        mesh_converged: converged as f64 / (samples - 1) as f64,
        certified_by: "citation".into(),
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    fn hyperbolic() -> BlaschkeProduct {
        // (z² + 1/2)/(1 + z²/2): boundary attractor at 1 with B'(1) = 2/3
        let a = 0.5f64.sqrt();
        BlaschkeProduct::new(vec![Complex64::new(0.0, a), Complex64::new(0.0, -a)], 0.0).unwrap()
    }

    fn peaked() -> Weight {
        Weight::polynomial(vec![Complex64::new(0.75, 0.0), Complex64::new(0.25, 0.0)]).unwrap()
    }

    #[test]
    fn hyperbolic_basin() {
        let r = proposition1_annulus(&hyperbolic(), &peaked(), 4096).unwrap();
        assert_eq!(r.kind, Kind::Hyperbolic);
        assert!(r.r_inner < 1.0 && r.r_inner > 0.5);
        assert!(r.endpoint_residuals.iter().all(|&x| x <= 1e-8));
        // remaining fixed points solve z² − z + 1 = 0, i.e. angles ±1/6
        assert!((r.arc.right - 1.0 / 6.0).abs() < 1e-9);
        assert!((r.arc.left + 1.0 / 6.0).abs() < 1e-9);
        assert!(r.mesh_converged > 0.9);
    }

    #[test]
    fn rejects_flat_weight_and_elliptic_symbol() {
        let flat = Weight::constant(Complex64::new(1.0, 0.0));
        assert!(matches!(
            proposition1_annulus(&hyperbolic(), &flat, 4096),
            Err(Error::InvalidInput(_))
        ));
        let square = BlaschkeProduct::power(2).unwrap();
        assert!(matches!(
            proposition1_annulus(&square, &peaked(), 4096),
            Err(Error::Unsupported(_))
        ));
    }
}
