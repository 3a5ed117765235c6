//! d-adic dynamics on ℝ/ℤ.
//!
//! The boundary point `e^{2πit}` is carried by its angle `t`. Under
//! `φ(t) = d·t mod 1` rational angles stay rational, so periodic orbits,
//! preimages and backward chains are computed in exact integer arithmetic.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Largest period accepted by [`periodic_orbits`].
pub const MAX_PERIOD: usize = 20;

/// A point of the circle ℝ/ℤ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    /// Reduced rational in `[0, 1)`.
    Exact(Rational),
    /// Float in `[0, 1)`.
    Approx(f64),
}

fn reduce_unit(r: Rational) -> Rational {
    r - r.floor()
}

impl Angle {
    pub fn exact(p: i128, q: i128) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("angle denominator is zero".into()));
        }
        Ok(Angle::Exact(reduce_unit(Rational::new(p, q))))
    }

    pub fn from_rational(r: Rational) -> Self {
        Angle::Exact(reduce_unit(r))
    }

    pub fn approx(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidInput("angle must be finite".into()));
        }
        let mut r = t.rem_euclid(1.0);
        if r >= 1.0 {
            r = 0.0;
        }
        Ok(Angle::Approx(r))
    }

    pub fn zero() -> Self {
        Angle::Exact(Rational::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact(_))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match *self {
            Angle::Exact(r) => Some(r),
            Angle::Approx(_) => None,
        }
    }

    /// Correctly rounded value; equal rationals give bit-identical floats.
    pub fn to_f64(&self) -> f64 {
        match *self {
            Angle::Exact(r) => rational_to_f64(r),
            Angle::Approx(t) => t,
        }
    }

    /// Shortest arc length to `other`, in turns.
    pub fn circle_distance(&self, other: &Angle) -> f64 {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => {
                let d = reduce_unit(*a - *b);
                let d = d.min(Rational::one() - d);
                rational_to_f64(d)
            }
            _ => circle_gap(self.to_f64(), other.to_f64()),
        }
    }

    pub fn same_point(&self, other: &Angle, tol: f64) -> bool {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => a == b,
            _ => self.circle_distance(other) <= tol,
        }
    }

    pub fn cmp_value(&self, other: &Angle) -> Ordering {
        match (self, other) {
            (Angle::Exact(a), Angle::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

pub(crate) fn rational_to_f64(r: Rational) -> f64 {
    let (p, q) = (*r.numer(), *r.denom());
    if p.unsigned_abs() < (1u128 << 53) && q.unsigned_abs() < (1u128 << 53) {
        p as f64 / q as f64
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

pub(crate) fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Angle::Approx(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| Error::InvalidInput(format!("bad angle {s:?}")))?;
            let q: i128 = q.trim().parse().map_err(|_| Error::InvalidInput(format!("bad angle {s:?}")))?;
            Angle::exact(p, q)
        } else if let Ok(p) = s.parse::<i128>() {
            Angle::exact(p, 1)
        } else {
            let t: f64 = s.parse().map_err(|_| Error::InvalidInput(format!("bad angle {s:?}")))?;
            Angle::approx(t)
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Angle::Exact(_) => s.serialize_str(&self.to_string()),
            Angle::Approx(t) => s.serialize_f64(*t),
        }
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(t) => Angle::approx(t).map_err(serde::de::Error::custom),
        }
    }
}

fn check_degree(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("degree {d} < 2")));
    }
    Ok(())
}

/// `φ(t) = d·t mod 1`.
pub fn doubling_step(t: &Angle, d: usize) -> Angle {
    match *t {
        Angle::Exact(r) => Angle::Exact(reduce_unit(r * Rational::from_integer(d as i128))),
        Angle::Approx(x) => Angle::Approx(((d as f64) * x).rem_euclid(1.0)),
    }
}

/// The `d` preimages `(t + j)/d`, `j = 0..d`.
pub fn preimages(t: &Angle, d: usize) -> Vec<Angle> {
    (0..d)
        .map(|j| match *t {
            Angle::Exact(r) => Angle::Exact((r + Rational::from_integer(j as i128)) / Rational::from_integer(d as i128)),
            Angle::Approx(x) => Angle::Approx((x + j as f64) / d as f64),
        })
        .collect()
}

/// A finite `φ`-orbit with its smallest period. The uniform probability
/// measure on `points` is the periodic ergodic measure of the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicOrbit {
    period: usize,
    points: Vec<Rational>,
}

impl PeriodicOrbit {
    /// Orbit of an exact angle under `φ`; fails if it is not periodic within
    /// `max_period` steps.
    pub fn of(base: Rational, d: usize, max_period: usize) -> Result<Self> {
        check_degree(d)?;
        let base = reduce_unit(base);
        let dd = Rational::from_integer(d as i128);
        let mut points = vec![base];
        let mut x = reduce_unit(base * dd);
        while x != base {
            if points.len() >= max_period {
                return Err(Error::InvalidInput(format!(
                    "{}/{} is not periodic with period ≤ {max_period}",
                    base.numer(),
                    base.denom()
                )));
            }
            points.push(x);
            x = reduce_unit(x * dd);
        }
        Ok(Self {
            period: points.len(),
            points,
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Orbit points in dynamical order `t, φt, …, φ^{m−1}t`.
    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn base(&self) -> Rational {
        self.points[0]
    }

    pub fn angles(&self) -> Vec<Angle> {
        self.points.iter().map(|&r| Angle::Exact(r)).collect()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.points.contains(r)
    }

    /// Same orbit started at its `i`-th point.
    pub fn rotated(&self, i: usize) -> Self {
        let mut points = self.points.clone();
        points.rotate_left(i % self.period);
        Self {
            period: self.period,
            points,
        }
    }

    /// Mass `1/m` per point.
    pub fn measure_weight(&self) -> f64 {
        1.0 / self.period as f64
    }

    fn sort_key(&self) -> (usize, Rational) {
        (self.period, *self.points.iter().min().expect("orbit is nonempty"))
    }

    /// Runs the order-preservation test of the map on this orbit.
    pub fn order_check(&self) -> OrderCheck {
        let pts = self.angles();
        let mut imgs = pts.clone();
        imgs.rotate_left(1);
        is_order_preserving(&pts, &imgs)
    }
}

impl Serialize for PeriodicOrbit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            period: usize,
            points: Vec<Angle>,
        }
        Repr {
            period: self.period,
            points: self.angles(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicOrbit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            period: usize,
            points: Vec<Angle>,
        }
        let r = Repr::deserialize(d)?;
        let pts: Option<Vec<Rational>> = r.points.iter().map(|a| a.as_rational()).collect();
        let pts = pts.ok_or_else(|| serde::de::Error::custom("orbit points must be exact"))?;
        if pts.len() != r.period || pts.is_empty() {
            return Err(serde::de::Error::custom("period does not match point count"));
        }
        Ok(PeriodicOrbit {
            period: r.period,
            points: pts,
        })
    }
}

/// Caps on periodic orbit enumeration.
#[derive(Clone, Copy, Debug)]
pub struct OrbitLimits {
    pub max_orbits: usize,
    pub max_points: u128,
}

impl Default for OrbitLimits {
    fn default() -> Self {
        Self {
            max_orbits: 250_000,
            max_points: 2_500_000,
        }
    }
}

/// Number of points of period dividing `m`, `d^m − 1`, if it fits the cap.
fn cycle_modulus(d: usize, m: usize) -> Option<u128> {
    (d as u128).checked_pow(m as u32).map(|p| p - 1)
}

pub fn periodic_orbits(d: usize, max_period: usize) -> Result<Vec<PeriodicOrbit>> {
    periodic_orbits_with(d, max_period, OrbitLimits::default())
}

/// All periodic orbits of smallest period `≤ max_period`, sorted by
/// `(period, smallest point)`. Each orbit starts at its smallest point.
pub fn periodic_orbits_with(d: usize, max_period: usize, limits: OrbitLimits) -> Result<Vec<PeriodicOrbit>> {
    check_degree(d)?;
    if max_period == 0 || max_period > MAX_PERIOD {
        return Err(Error::InvalidInput(format!(
            "max_period {max_period} outside 1..={MAX_PERIOD}"
        )));
    }
    let mut total: u128 = 0;
    for m in 1..=max_period {
        let modulus = cycle_modulus(d, m).ok_or_else(|| Error::LimitExceeded(format!("{d}^{m} overflows")))?;
        total += modulus;
        if total > limits.max_points {
            return Err(Error::LimitExceeded(format!(
                "period ≤ {max_period} at degree {d} needs more than {} points",
                limits.max_points
            )));
        }
    }

    let mut out = Vec::new();
    for m in 1..=max_period {
        let modulus = cycle_modulus(d, m).expect("checked above");
        let dm = d as u128;
        'outer: for j in 0..modulus {
            // j/(d^m − 1) times d is a cyclic shift of its m base-d digits
            let mut x = j;
            let mut cycle = Vec::with_capacity(m);
            cycle.push(j);
            for step in 1..=m {
                x = (x * dm) % modulus;
                if x == j {
                    if step != m {
                        continue 'outer;
                    }
                    break;
                }
                if x < j {
                    continue 'outer;
                }
                cycle.push(x);
            }
            out.push(PeriodicOrbit {
                period: m,
                points: cycle
                    .into_iter()
                    .map(|n| Rational::new(n as i128, modulus as i128))
                    .collect(),
            });
            if out.len() > limits.max_orbits {
                return Err(Error::LimitExceeded(format!(
                    "more than {} orbits of period ≤ {max_period}",
                    limits.max_orbits
                )));
            }
        }
    }
    out.sort_by_key(|o| o.sort_key());
    Ok(out)
}

/// Backward chain `w_1 = u, φ(w_k) = w_{k−1}` whose last element `w_n`
/// agrees with `v` in its first `n − 1` base-`d` digits, so
/// `|w_n − v| ≤ d^{−(n−1)}`.
pub fn backward_orbit_to(u: &Angle, v: &Angle, d: usize, n: usize) -> Result<Vec<Angle>> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::InvalidInput("backward orbit length must be ≥ 1".into()));
    }
    let scale = (d as i128)
        .checked_pow((n - 1) as u32)
        .ok_or_else(|| Error::LimitExceeded(format!("{d}^{} overflows", n - 1)))?;
    let last = match (u, v) {
        (Angle::Exact(u), Angle::Exact(v)) => {
            let digits = (*v * Rational::from_integer(scale)).floor();
            Angle::Exact((*u + digits) / Rational::from_integer(scale))
        }
        _ => {
            let s = scale as f64;
            let digits = (v.to_f64() * s).floor();
            Angle::approx((u.to_f64() + digits) / s)?
        }
    };
    let mut chain = vec![last];
    for _ in 1..n {
        let prev = doubling_step(chain.last().expect("nonempty"), d);
        chain.push(prev);
    }
    chain.reverse();
    Ok(chain)
}

/// Cyclic orientation of three circle points: `+1` counterclockwise, `−1`
/// clockwise, `0` if two coincide.
pub fn orientation(a: &Angle, b: &Angle, c: &Angle) -> i8 {
    if a.same_point(b, 0.0) || b.same_point(c, 0.0) || a.same_point(c, 0.0) {
        return 0;
    }
    let less = match (a, b, c) {
        (Angle::Exact(a), Angle::Exact(b), Angle::Exact(c)) => reduce_unit(*b - *a) < reduce_unit(*c - *a),
        _ => {
            let (a, b, c) = (a.to_f64(), b.to_f64(), c.to_f64());
            (b - a).rem_euclid(1.0) < (c - a).rem_euclid(1.0)
        }
    };
    if less {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderWitness {
    pub triple: [Angle; 3],
    pub image: [Angle; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderCheck {
    pub preserving: bool,
    pub witness: Option<OrderWitness>,
}

/// Whether `points[i] ↦ images[i]` keeps the cyclic order of every triple
/// (degenerate image triples are allowed). The first violating triple in
/// lexicographic index order is returned as witness.
pub fn is_order_preserving(points: &[Angle], images: &[Angle]) -> OrderCheck {
    assert_eq!(points.len(), images.len(), "points and images differ in length");
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let before = orientation(&points[i], &points[j], &points[k]);
                let after = orientation(&images[i], &images[j], &images[k]);
                if after != 0 && after != before {
                    return OrderCheck {
                        preserving: false,
                        witness: Some(OrderWitness {
                            triple: [points[i], points[j], points[k]],
                            image: [images[i], images[j], images[k]],
                        }),
                    };
                }
            }
        }
    }
    OrderCheck {
        preserving: true,
        witness: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderPreservingSelection {
    /// Pairwise disjoint orbits on which `φ` is order preserving.
    pub orbits: Vec<PeriodicOrbit>,
    /// An orbit on which `φ` is not order preserving, if one exists within
    /// the searched periods.
    pub failing: Option<PeriodicOrbit>,
}

pub fn find_order_preserving_orbits(d: usize, count: usize, max_period: usize) -> Result<OrderPreservingSelection> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be ≥ 1".into()));
    }
    let all = periodic_orbits(d, max_period)?;
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    let mut used: HashSet<Rational> = HashSet::new();
    let mut failing = None;
    for orbit in all {
        if orbits.len() == count && failing.is_some() {
            break;
        }
        if orbit.order_check().preserving {
            if orbits.len() < count && orbit.points.iter().all(|p| !used.contains(p)) {
                used.extend(orbit.points.iter().copied());
                orbits.push(orbit);
            }
        } else if failing.is_none() {
            failing = Some(orbit);
        }
    }
    if orbits.len() < count {
        return Err(Error::NotFound {
            requested: count,
            achieved: orbits.len(),
        });
    }
    Ok(OrderPreservingSelection { orbits, failing })
}

/// Samples of the semiconjugacy `h` with `h∘F = d·h` (mod 1), where `F` is
/// the lift of the boundary map of `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiconjugacyTable {
    pub degree: usize,
    #[serde(rename = "N")]
    pub grid: usize,
    /// `h(k/N) − h(0)` for `k = 0..N`.
    pub h: Vec<f64>,
    /// `sup_t dist(d·h(t), h(F(t)))` on the circle, measured on the raw limit.
    pub residual: f64,
    /// Raw `h(0)` subtracted from the stored samples.
    pub offset: f64,
    pub monotone: bool,
    pub warning: Option<String>,
}

impl SemiconjugacyTable {
    /// `h(t)` by linear interpolation, extended by `h(t + 1) = h(t) + 1`.
    pub fn forward(&self, t: f64) -> f64 {
        let n = self.grid;
        let x = t.rem_euclid(1.0) * n as f64;
        let k = (x.floor() as usize).min(n - 1);
        let frac = x - k as f64;
        let a = self.h[k];
        let b = if k + 1 < n { self.h[k + 1] } else { 1.0 };
        a + frac * (b - a) + t.floor()
    }

    /// `h^{-1}(s)` by monotone inversion with linear interpolation.
    pub fn inverse(&self, s: f64) -> f64 {
        let n = self.grid;
        let s = s.rem_euclid(1.0);
        // first index with h[k] > s
        let idx = self.h.partition_point(|&v| v <= s);
        let (k, a) = (idx - 1, self.h[idx - 1]);
        let b = if idx < n { self.h[idx] } else { 1.0 };
        let frac = if b > a { (s - a) / (b - a) } else { 0.0 };
        ((k as f64 + frac) / n as f64).rem_euclid(1.0)
    }
}

struct Lift<'a> {
    b: &'a BlaschkeProduct,
    grid: Vec<f64>,
    degree: usize,
}

impl<'a> Lift<'a> {
    fn new(b: &'a BlaschkeProduct, n: usize) -> Result<Self> {
        let d = b.degree();
        let raw: Vec<f64> = (0..n).map(|k| raw_angle(b, k as f64 / n as f64)).collect();
        let mut grid = Vec::with_capacity(n + 1);
        grid.push(raw[0]);
        for k in 1..=n {
            let next = if k < n { raw[k] } else { raw[0] };
            let prev = raw[k - 1];
            let mut delta = next - prev;
            delta -= delta.round();
            grid.push(grid[k - 1] + delta);
        }
        let winding = grid[n] - grid[0];
        if (winding - d as f64).abs() > 1e-6 {
            return Err(Error::LiftDiscontinuity { winding, degree: d });
        }
        grid[n] = grid[0] + d as f64;
        Ok(Self { b, grid, degree: d })
    }

    /// `F(s)` for `s ∈ [0, 1)`: the branch of `arg B/2π` nearest the
    /// interpolated grid lift.
    fn at_unit(&self, s: f64) -> f64 {
        let n = self.grid.len() - 1;
        let x = s * n as f64;
        let k = (x.floor() as usize).min(n - 1);
        let frac = x - k as f64;
        let guess = self.grid[k] + frac * (self.grid[k + 1] - self.grid[k]);
        let raw = raw_angle(self.b, s);
        raw + (guess - raw).round()
    }

    /// Iterates `x ↦ F(x)` from `x = t` for `iters` steps and returns
    /// `F^iters(t)/d^iters`, keeping integer and fractional parts apart.
    fn limit(&self, t: f64, iters: usize) -> f64 {
        let d = self.degree as i128;
        let mut whole: i128 = t.floor() as i128;
        let mut frac = t - t.floor();
        for _ in 0..iters {
            let y = self.at_unit(frac);
            let fl = y.floor();
            whole = whole * d + fl as i128;
            frac = y - fl;
        }
        let scale = (self.degree as f64).powi(iters as i32);
        whole as f64 / scale + frac / scale
    }
}

fn raw_angle(b: &BlaschkeProduct, t: f64) -> f64 {
    if b.is_monomial() {
        let turn = b.rotation() / (2.0 * std::f64::consts::PI);
        ((b.degree() as f64) * t + turn).rem_euclid(1.0)
    } else {
        b.boundary_angle(t)
    }
}

/// `h = lim F^n/d^n` on an `n`-point grid, with residual and monotonicity checks.
pub fn shub_semiconjugacy(b: &BlaschkeProduct, n: usize, iters: usize) -> Result<SemiconjugacyTable> {
    let d = b.degree();
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!("grid size {n} must be a power of two ≥ 16")));
    }
    if (iters as f64) * (d as f64).log2() > 110.0 {
        return Err(Error::LimitExceeded(format!("{iters} iterations overflow the integer lift at degree {d}")));
    }
    let warning = match b.classify() {
        Ok(c) if c.kind.conjugate_to_power() => None,
        Ok(c) => Some(format!(
            "{:?} map: the limit is a semiconjugacy without injectivity guarantee",
            c.kind
        )),
        Err(e) => Some(format!("classification failed ({e}); conjugacy not guaranteed")),
    };
    let lift = Lift::new(b, n)?;
    let raw: Vec<f64> = (0..n).map(|k| lift.limit(k as f64 / n as f64, iters)).collect();
    let offset = raw[0];
    let h: Vec<f64> = raw.iter().map(|v| v - offset).collect();

    let mut residual: f64 = 0.0;
    for (k, &hk) in raw.iter().enumerate() {
        let t = k as f64 / n as f64;
        let image = lift.at_unit(t);
        let lhs = d as f64 * hk;
        let rhs = lift.limit(image, iters);
        residual = residual.max(circle_gap(lhs, rhs));
    }
    let monotone = h.windows(2).all(|w| w[1] >= w[0] - 1e-12) && h[n - 1] <= 1.0 + 1e-12;
    Ok(SemiconjugacyTable {
        degree: d,
        grid: n,
        h,
        residual,
        offset,
        monotone,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i128, r: i128) -> Angle {
        Angle::exact(p, r).unwrap()
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_step(&q(1, 3), 2), q(2, 3));
        assert_eq!(doubling_step(&q(2, 3), 2), q(1, 3));
        let mut t = q(1, 7);
        for _ in 0..3 {
            t = doubling_step(&t, 2);
        }
        assert_eq!(t, q(1, 7));
    }

    #[test]
    fn preimage_examples() {
        assert_eq!(preimages(&q(0, 1), 2), vec![q(0, 1), q(1, 2)]);
        assert_eq!(preimages(&q(1, 3), 2), vec![q(1, 6), q(2, 3)]);
    }

    #[test]
    fn small_orbit_lists() {
        let o = periodic_orbits(2, 2).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o[0].angles(), vec![q(0, 1)]);
        assert_eq!(o[1].angles(), vec![q(1, 3), q(2, 3)]);
        let o = periodic_orbits(3, 1).unwrap();
        let pts: Vec<Angle> = o.iter().flat_map(|o| o.angles()).collect();
        assert_eq!(pts, vec![q(0, 1), q(1, 2)]);
    }

    #[test]
    fn period_guards() {
        assert!(matches!(periodic_orbits(2, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(periodic_orbits(2, 21), Err(Error::InvalidInput(_))));
        assert!(matches!(periodic_orbits(10, 8), Err(Error::LimitExceeded(_))));
        let tight = OrbitLimits {
            max_orbits: 3,
            max_points: 1000,
        };
        assert!(matches!(periodic_orbits_with(2, 5, tight), Err(Error::LimitExceeded(_))));
    }

    #[test]
    fn orbit_of_and_serialization() {
        let o = PeriodicOrbit::of(Rational::new(1, 7), 2, 10).unwrap();
        assert_eq!(o.period(), 3);
        let v = serde_json::to_value(&o).unwrap();
        assert_eq!(v, serde_json::json!({"period": 3, "points": ["1/7", "2/7", "4/7"]}));
        let back: PeriodicOrbit = serde_json::from_value(v).unwrap();
        assert_eq!(back, o);
        assert!(PeriodicOrbit::of(Rational::new(1, 6), 2, 10).is_err());
    }

    #[test]
    fn order_examples() {
        let pair = PeriodicOrbit::of(Rational::new(1, 3), 2, 4).unwrap();
        assert!(pair.order_check().preserving);
        let seven = PeriodicOrbit::of(Rational::new(1, 7), 2, 4).unwrap();
        assert!(seven.order_check().preserving);
        let five = PeriodicOrbit::of(Rational::new(1, 5), 2, 4).unwrap();
        let check = five.order_check();
        assert!(!check.preserving);
        assert_eq!(check.witness.unwrap().image, [q(2, 5), q(4, 5), q(3, 5)]);
    }

    #[test]
    fn order_selection() {
        let sel = find_order_preserving_orbits(2, 1, 1).unwrap();
        assert_eq!(sel.orbits[0].angles(), vec![q(0, 1)]);
        assert!(sel.failing.is_none());
        let sel = find_order_preserving_orbits(2, 2, 4).unwrap();
        assert_eq!(sel.orbits.len(), 2);
        assert_eq!(sel.failing.unwrap().base(), Rational::new(1, 5));
        assert!(matches!(
            find_order_preserving_orbits(2, 50, 3),
            Err(Error::NotFound { requested: 50, .. })
        ));
    }

    #[test]
    fn backward_chain_examples() {
        let chain = backward_orbit_to(&q(1, 2), &q(1, 7), 2, 12).unwrap();
        assert_eq!(chain.len(), 12);
        assert_eq!(chain[0], q(1, 2));
        for k in 1..12 {
            assert_eq!(doubling_step(&chain[k], 2), chain[k - 1]);
        }
        assert!(chain[11].circle_distance(&q(1, 7)) <= 2f64.powi(-11));
        let chain = backward_orbit_to(&q(0, 1), &q(1, 3), 2, 40).unwrap();
        assert!(chain[39].circle_distance(&q(1, 3)) <= 2f64.powi(-39));
    }

    #[test]
    fn power_map_semiconjugacy_is_identity() {
        let b = BlaschkeProduct::power(2).unwrap();
        let table = shub_semiconjugacy(&b, 1024, 30).unwrap();
        assert_eq!(table.residual, 0.0);
        for (k, h) in table.h.iter().enumerate() {
            assert_eq!(*h, k as f64 / 1024.0);
        }
        assert!(table.warning.is_none());
        assert!((table.inverse(0.3) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn angle_parsing() {
        assert_eq!("2/4".parse::<Angle>().unwrap(), q(1, 2));
        assert_eq!("3/2".parse::<Angle>().unwrap(), q(1, 2));
        assert_eq!("0.25".parse::<Angle>().unwrap(), Angle::Approx(0.25));
        assert!("1/0".parse::<Angle>().is_err());
        let a: Angle = serde_json::from_str("\"5/7\"").unwrap();
        assert_eq!(a, q(5, 7));
    }
}
