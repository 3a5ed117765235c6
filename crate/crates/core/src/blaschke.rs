//! Finite Blaschke products
//!
//! `B(z) = e^{iθ} ∏ (z − a_j)/(1 − conj(a_j) z)` with every `|a_j| < 1` and
//! degree `d ≥ 2`. Besides evaluation this module locates the Wolff–Denjoy
//! point and sorts `B` into the elliptic / hyperbolic / parabolic classes
//! that decide whether its boundary map is conjugate to `z^d`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;

const POLE_TOL: f64 = 1e-14;
const TWO_PI: f64 = 2.0 * PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr", into = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    rotation: f64,
}

#[derive(Serialize, Deserialize)]
struct BlaschkeRepr {
    #[serde(with = "json::complex_vec")]
    zeros: Vec<Complex64>,
    rotation: f64,
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = Error;

    fn try_from(r: BlaschkeRepr) -> Result<Self> {
        BlaschkeProduct::new(r.zeros, r.rotation)
    }
}

impl From<BlaschkeProduct> for BlaschkeRepr {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeRepr {
            zeros: b.zeros,
            rotation: b.rotation,
        }
    }
}

impl BlaschkeProduct {
    /// Builds `e^{iθ} ∏ (z − a_j)/(1 − conj(a_j) z)`.
    ///
    /// Rejects zeros outside the open disc and degree below two. The rotation
    /// is reduced to `[0, 2π)`.
    pub fn new(zeros: Vec<Complex64>, rotation: f64) -> Result<Self> {
        if zeros.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "degree {} < 2; a Blaschke product needs at least two zeros",
                zeros.len()
            )));
        }
        if !rotation.is_finite() {
            return Err(Error::InvalidInput("rotation must be finite".into()));
        }
        for (j, a) in zeros.iter().enumerate() {
            if !(a.norm() < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "zero a_{} = {} has modulus {} ≥ 1",
                    j + 1,
                    a,
                    a.norm()
                )));
            }
        }
        Ok(Self {
            zeros,
            rotation: rotation.rem_euclid(TWO_PI),
        })
    }

    /// The model map `z ↦ z^d`.
    pub fn power(d: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); d], 0.0)
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// True when every zero sits at the origin, i.e. `B(z) = e^{iθ} z^d`.
    pub fn is_monomial(&self) -> bool {
        self.zeros.iter().all(|a| a.norm_sqr() == 0.0)
    }

    fn prefactor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation)
    }

    fn denominator(a: Complex64, z: Complex64) -> Result<Complex64> {
        let den = Complex64::new(1.0, 0.0) - a.conj() * z;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleProximity(den.norm()));
        }
        Ok(den)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = self.prefactor();
        for &a in &self.zeros {
            acc *= (z - a) / Self::denominator(a, z)?;
        }
        Ok(acc)
    }

    /// `B'(z)` by the product rule; each factor has derivative
    /// `(1 − |a|²)/(1 − conj(a) z)²`. Stays finite when `z` hits a zero.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let d = self.degree();
        let mut values = Vec::with_capacity(d);
        let mut slopes = Vec::with_capacity(d);
        for &a in &self.zeros {
            let den = Self::denominator(a, z)?;
            values.push((z - a) / den);
            slopes.push((1.0 - a.norm_sqr()) / (den * den));
        }
        // prefix/suffix products give ∏_{k≠j} in O(d)
        let mut prefix = vec![Complex64::new(1.0, 0.0); d + 1];
        for j in 0..d {
            prefix[j + 1] = prefix[j] * values[j];
        }
        let mut suffix = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for j in (0..d).rev() {
            sum += slopes[j] * prefix[j] * suffix;
            suffix *= values[j];
        }
        Ok(self.prefactor() * sum)
    }

    /// n-fold composition `B∘…∘B`; `n = 0` is the identity.
    pub fn iterate(&self, z: Complex64, n: usize) -> Result<Complex64> {
        let mut z = z;
        for _ in 0..n {
            z = self.evaluate(z)?;
        }
        Ok(z)
    }

    /// Taylor coefficients `c_0..=c_order` of `B` around `z0`.
    pub fn taylor(&self, z0: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = vec![zero; order + 1];
        acc[0] = self.prefactor();
        let mut factor = vec![zero; order + 1];
        for &a in &self.zeros {
            let c = Self::denominator(a, z0)?;
            let ratio = a.conj() / c;
            // 1/(c − ā h) = Σ (1/c)(ā/c)^k h^k
            let mut s_prev = zero;
            let mut s = Complex64::new(1.0, 0.0) / c;
            for (k, f) in factor.iter_mut().enumerate() {
                *f = (z0 - a) * s + if k > 0 { s_prev } else { zero };
                s_prev = s;
                s *= ratio;
            }
            let mut next = vec![zero; order + 1];
            for i in 0..=order {
                if acc[i] == zero {
                    continue;
                }
                for j in 0..=(order - i) {
                    next[i + j] += acc[i] * factor[j];
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// `arg(B(e^{2πit}))/2π` reduced to `[0, 1)`.
    pub fn boundary_angle(&self, t: f64) -> f64 {
        let z = Complex64::from_polar(1.0, TWO_PI * t);
        // poles lie outside the closed disc, so evaluation on the circle cannot fail
        let b = self.evaluate(z).expect("no pole on the unit circle");
        (b.arg() / TWO_PI).rem_euclid(1.0)
    }

    /// Signed displacement `arg(B(ζ)/ζ)/2π ∈ (−½, ½]` at `ζ = e^{2πit}`.
    fn displacement(&self, t: f64) -> f64 {
        let z = Complex64::from_polar(1.0, TWO_PI * t);
        let b = self.evaluate(z).expect("no pole on the unit circle");
        (b * z.conj()).arg() / TWO_PI
    }

    /// Angles `t ∈ [0,1)` with `B(e^{2πit}) = e^{2πit}`, polished to full
    /// precision. Touching (even-order) roots are found through local minima of
    /// the displacement.
    pub fn boundary_fixed_points(&self, opts: &ClassifyOptions) -> Vec<BoundaryFixedPoint> {
        let n = opts.grid;
        let psi: Vec<f64> = (0..n).map(|k| self.displacement(k as f64 / n as f64)).collect();
        let step = 1.0 / n as f64;
        let mut raw = Vec::new();
        for k in 0..n {
            let (a, b) = (psi[k], psi[(k + 1) % n]);
            let t0 = k as f64 * step;
            if a == 0.0 {
                raw.push(t0);
            } else if a * b < 0.0 && a.abs() < 0.25 && b.abs() < 0.25 {
                raw.push(self.bisect_displacement(t0, t0 + step, opts.bisect_tol));
            }
        }
        for k in 0..n {
            let prev = psi[(k + n - 1) % n];
            let next = psi[(k + 1) % n];
            let here = psi[k];
            let same_sign = prev * here > 0.0 && here * next > 0.0;
            if same_sign && here.abs() < 0.25 && here.abs() <= prev.abs() && here.abs() <= next.abs() {
                let center = k as f64 * step;
                let (t, val) = self.min_abs_displacement(center - step, center + step);
                if val < 1e-7 {
                    raw.push(t);
                }
            }
        }

        let mut out: Vec<BoundaryFixedPoint> = Vec::new();
        for t in raw {
            let seed = Complex64::from_polar(1.0, TWO_PI * t);
            let z = self.polish_fixed_point(seed).unwrap_or(seed);
            let z = z / z.norm();
            let angle = (z.arg() / TWO_PI).rem_euclid(1.0);
            if out.iter().any(|p| circle_gap(p.angle, angle) < 1e-9) {
                continue;
            }
            let deriv_mod = self.derivative(z).map(|d| d.norm()).unwrap_or(f64::NAN);
            out.push(BoundaryFixedPoint {
                angle,
                point: z,
                deriv_mod,
            });
        }
        out.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        out
    }

    fn bisect_displacement(&self, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        let mut f_lo = self.displacement(lo);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            let f_mid = self.displacement(mid);
            if f_mid == 0.0 {
                return mid.rem_euclid(1.0);
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).rem_euclid(1.0)
    }

    fn min_abs_displacement(&self, mut lo: f64, mut hi: f64) -> (f64, f64) {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = |t: f64| self.displacement(t).abs();
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..200 {
            if hi - lo < 1e-15 {
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
        (t.rem_euclid(1.0), f(t))
    }

    /// Derivatives `g^{(k)}(z)`, `k = 0..=order`, of `g(z) = B(z) − z`.
    fn fixed_point_derivatives(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut c = self.taylor(z, order)?;
        c[0] -= z;
        if order >= 1 {
            c[1] -= 1.0;
        }
        let mut fact = 1.0;
        for (k, ck) in c.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *ck *= fact;
        }
        Ok(c)
    }

    /// Newton polish of a root of `B(z) − z`. For a root of multiplicity `m`
    /// Newton runs on `g^{(m−1)}`, whose root is simple; the smallest `m` that
    /// converges to a genuine root with non-degenerate `g^{(m)}` wins.
    fn polish_fixed_point(&self, seed: Complex64) -> Option<Complex64> {
        let mut fallback = None;
        for m in 1..=3 {
            let mut z = seed;
            let mut ok = false;
            for _ in 0..60 {
                let g = self.fixed_point_derivatives(z, m).ok()?;
                if g[m - 1] == Complex64::new(0.0, 0.0) {
                    ok = true;
                    break;
                }
                if g[m].norm() == 0.0 {
                    break;
                }
                let step = g[m - 1] / g[m];
                z -= step;
                if !z.re.is_finite() || !z.im.is_finite() {
                    break;
                }
                if step.norm() < 1e-15 {
                    ok = true;
                    break;
                }
            }
            if !ok || (z - seed).norm() > 1e-4 {
                continue;
            }
            let g = match self.fixed_point_derivatives(z, m) {
                Ok(g) => g,
                Err(_) => continue,
            };
            if g[0].norm() > 1e-11 {
                continue;
            }
            if g[m].norm() > 1e-4 {
                return Some(z);
            }
            fallback.get_or_insert(z);
        }
        fallback
    }

    fn newton_fixed_point(&self, seed: Complex64) -> Option<Complex64> {
        let mut z = seed;
        for _ in 0..100 {
            let g = self.evaluate(z).ok()? - z;
            if g.norm() == 0.0 {
                return Some(z);
            }
            let dg = self.derivative(z).ok()? - 1.0;
            if dg.norm() == 0.0 {
                return None;
            }
            let step = g / dg;
            z -= step;
            if !(z.norm() < 1.0 + 1e-9) {
                return None;
            }
            if step.norm() < 1e-15 {
                return Some(z);
            }
        }
        None
    }

    /// Order of `z0` as a zero of `B(z) − z`: the first derivative of `B(z) − z`
    /// whose modulus exceeds `tol`.
    pub fn fixed_point_multiplicity(&self, z0: Complex64, tol: f64) -> Option<usize> {
        let g = self.fixed_point_derivatives(z0, 6).ok()?;
        (1..g.len()).find(|&k| g[k].norm() > tol)
    }

    pub fn classify(&self) -> Result<Classification> {
        self.classify_with(&ClassifyOptions::default())
    }

    /// Locates the Wolff–Denjoy point and classifies `B`.
    ///
    /// Iterates from the origin; an interior attracting fixed point found by
    /// Newton polish means elliptic. Otherwise the Wolff–Denjoy point is the
    /// boundary fixed point with `|B'(z_0)| ≤ 1`.
    pub fn classify_with(&self, opts: &ClassifyOptions) -> Result<Classification> {
        let mut z = Complex64::new(0.0, 0.0);
        for _ in 0..opts.max_iter {
            let next = self.evaluate(z)?;
            let delta = (next - z).norm();
            z = next;
            if delta < opts.cauchy_tol {
                break;
            }
        }
        let last = z;

        if let Some(z0) = self.newton_fixed_point(last) {
            if z0.norm() < 1.0 - opts.boundary_band {
                let deriv_mod = self.derivative(z0)?.norm();
                if deriv_mod < 1.0 {
                    return Ok(Classification {
                        kind: Kind::Elliptic,
                        wolff_denjoy_point: z0,
                        derivative_modulus: deriv_mod,
                        multiplicity: None,
                    });
                }
            }
        }

        let candidates: Vec<BoundaryFixedPoint> = self
            .boundary_fixed_points(opts)
            .into_iter()
            .filter(|p| p.deriv_mod <= 1.0 + opts.parabolic_band)
            .collect();
        let best = candidates
            .iter()
            .min_by(|a, b| (a.point - last).norm().total_cmp(&(b.point - last).norm()))
            .ok_or(Error::ClassificationAmbiguous {
                deriv_mod: f64::NAN,
                multiplicity: None,
            })?;
        let z0 = best.point;
        let deriv_mod = best.deriv_mod;

        if (deriv_mod - 1.0).abs() <= opts.parabolic_band {
            let multiplicity = self.fixed_point_multiplicity(z0, opts.deriv_zero_tol);
            let kind = match multiplicity {
                Some(2) => Kind::DoublyParabolic,
                Some(3) => Kind::SingleParabolic,
                _ => {
                    return Err(Error::ClassificationAmbiguous {
                        deriv_mod,
                        multiplicity,
                    })
                }
            };
            return Ok(Classification {
                kind,
                wolff_denjoy_point: z0,
                derivative_modulus: deriv_mod,
                multiplicity,
            });
        }
        if deriv_mod > 0.0 && deriv_mod < 1.0 {
            return Ok(Classification {
                kind: Kind::Hyperbolic,
                wolff_denjoy_point: z0,
                derivative_modulus: deriv_mod,
                multiplicity: None,
            });
        }
        Err(Error::ClassificationAmbiguous {
            deriv_mod,
            multiplicity: None,
        })
    }
}

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub max_iter: usize,
    pub cauchy_tol: f64,
    pub parabolic_band: f64,
    pub deriv_zero_tol: f64,
    /// Interior fixed points closer than this to the circle are treated as boundary.
    pub boundary_band: f64,
    /// Grid for bracketing boundary fixed points on the lifted angle map.
    pub grid: usize,
    pub bisect_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            cauchy_tol: 1e-12,
            parabolic_band: 1e-9,
            deriv_zero_tol: 1e-8,
            boundary_band: 1e-6,
            grid: 1 << 12,
            bisect_tol: 1e-13,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryFixedPoint {
    pub angle: f64,
    pub point: Complex64,
    pub deriv_mod: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Elliptic,
    Hyperbolic,
    SingleParabolic,
    DoublyParabolic,
}

impl Kind {
    /// Whether the boundary map is conjugate to `z^d`.
    pub fn conjugate_to_power(self) -> bool {
        matches!(self, Kind::Elliptic | Kind::DoublyParabolic)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    #[serde(rename = "z0", with = "json::complex")]
    pub wolff_denjoy_point: Complex64,
    #[serde(rename = "deriv_mod")]
    pub derivative_modulus: f64,
    pub multiplicity: Option<usize>,
}
