use std::collections::VecDeque;

use crate::circle::{doubling_step, preimages, Angle, PeriodicOrbit};
use crate::error::{Error, Result};
use crate::radius::{orbit_log_mean, WcoSpec, Weight};

use super::{Anchor, Certificate, CertificateKind, Violation};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma1Options {
    pub depth: usize,
    pub node_cap: u64,
    /// Slack allowed in log space before an inequality counts as violated.
    pub tol: f64,
}

impl Default for Lemma1Options {
    fn default() -> Self {
        Self {
            depth: 10,
            node_cap: 100_000_000,
            tol: 1e-9,
        }
    }
}

/// Tree node: exact unreduced fraction when it fits, float otherwise.
#[derive(Clone, Copy, Debug)]
enum Node {
    Exact(i64, i64),
    Float(f64),
}

const EXACT_LIMIT: i64 = 1 << 53;

impl Node {
    fn from_angle(a: &Angle, d: usize, depth: usize) -> Self {
        if let Some(r) = a.as_rational() {
            let (p, q) = (*r.numer(), *r.denom());
            let mut room = q;
            let mut fits = true;
            for _ in 0..depth {
                room = room.saturating_mul(d as i128);
                if room >= EXACT_LIMIT as i128 {
                    fits = false;
                    break;
                }
            }
            if fits {
                return Node::Exact(p as i64, q as i64);
            }
        }
        Node::Float(a.to_f64())
    }

    fn to_f64(self) -> f64 {
        match self {
            Node::Exact(p, q) => p as f64 / q as f64,
            Node::Float(t) => t,
        }
    }

    fn child(self, j: usize, d: usize) -> Self {
        match self {
            Node::Exact(p, q) => Node::Exact(p + j as i64 * q, q * d as i64),
            Node::Float(t) => Node::Float((t + j as f64) / d as f64),
        }
    }

    fn to_angle(self) -> Angle {
        match self {
            Node::Exact(p, q) => Angle::exact(p as i128, q as i128).expect("positive denominator"),
            Node::Float(t) => Angle::Approx(t.rem_euclid(1.0)),
        }
    }
}

/// Largest depth `≤ want` whose full check visits at most `budget` nodes.
pub fn feasible_depth(d: usize, want: usize, budget: u64) -> usize {
    (1..=want).rev().find(|&k| tree_nodes(d, k) <= budget).unwrap_or(1)
}

pub(crate) fn tree_nodes(d: usize, depth: usize) -> u64 {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..depth {
        level = level.saturating_mul(d as u64);
        total = total.saturating_add(level);
    }
    total.saturating_mul(depth as u64 + 1)
}

pub fn lemma1_criterion(spec: &WcoSpec, lambda_abs: f64, k: &Angle, depth: usize) -> Result<Certificate> {
    lemma1_with(
        spec,
        lambda_abs,
        k,
        Lemma1Options {
            depth,
            ..Lemma1Options::default()
        },
    )
}

/// Finite-depth check of `|w_m(e)|/λ^m ≤ |w_n(k)|/λ^n` over all
/// `0 ≤ m, n ≤ depth` and `e ∈ φ^{−m}(φ^n k)`. Returns an accepting
/// `Lemma1Point` certificate or a `RejectionTree` carrying the first violation.
pub fn lemma1_with(spec: &WcoSpec, lambda_abs: f64, k: &Angle, opts: Lemma1Options) -> Result<Certificate> {
    if !(lambda_abs > 0.0) || !lambda_abs.is_finite() {
        return Err(Error::InvalidInput(format!("|λ| = {lambda_abs} must be positive")));
    }
    if opts.depth < 1 {
        return Err(Error::InvalidInput("depth must be ≥ 1".into()));
    }
    let d = spec.degree();
    let nodes = tree_nodes(d, opts.depth);
    if nodes > opts.node_cap {
        return Err(Error::DepthExceeded {
            nodes,
            cap: opts.node_cap,
        });
    }
    let w = spec.weight();
    let log_l = lambda_abs.ln();

    let mut forward = Vec::with_capacity(opts.depth + 1);
    let mut points = Vec::with_capacity(opts.depth + 1);
    let mut x = *k;
    let mut acc = 0.0;
    for n in 0..=opts.depth {
        forward.push(acc);
        points.push(x);
        if n < opts.depth {
            acc += w.log_modulus_at(x.to_f64()) - log_l;
            x = doubling_step(&x, d);
        }
    }

    let mut margin = f64::INFINITY;
    let reject = |e: Angle, m: usize, n: usize, lhs: f64, rhs: f64| Certificate {
        kind: CertificateKind::RejectionTree,
        radius: lambda_abs,
        anchor: Anchor::Point(*k),
        depth: opts.depth,
        margin: rhs - lhs,
        violation: Some(Violation { e, m, n, lhs, rhs }),
    };
    for n in 0..=opts.depth {
        let rhs = forward[n];
        if 0.0 > rhs + opts.tol {
            return Ok(reject(points[n], 0, n, 0.0, rhs));
        }
        margin = margin.min(rhs);
        let root = Node::from_angle(&points[n], d, opts.depth);
        let mut stack = vec![(root, 0usize, 0.0f64)];
        while let Some((node, m, lhs)) = stack.pop() {
            for j in 0..d {
                let child = node.child(j, d);
                let val = w.log_modulus_at(child.to_f64());
                if val == f64::NEG_INFINITY {
                    continue;
                }
                let l = lhs + val - log_l;
                if l > rhs + opts.tol {
                    return Ok(reject(child.to_angle(), m + 1, n, l, rhs));
                }
                margin = margin.min(rhs - l);
                if m + 1 < opts.depth {
                    stack.push((child, m + 1, l));
                }
            }
        }
    }
    Ok(Certificate {
        kind: CertificateKind::Lemma1Point,
        radius: lambda_abs,
        anchor: Anchor::Point(*k),
        depth: opts.depth,
        margin: if margin.is_finite() { margin } else { 0.0 },
        violation: None,
    })
}

/// Rotation index `s` of the orbit such that every partial sum of
/// `log|w| − log λ` started at `points[s]` is `≥` the empty sum.
pub fn cycle_lemma_start(w: &Weight, orbit: &PeriodicOrbit, lambda_abs: f64) -> usize {
    let log_l = lambda_abs.ln();
    let mut best = (0.0, 0usize);
    let mut acc = 0.0;
    for (i, p) in orbit.angles().iter().enumerate() {
        acc += w.log_modulus_at(p.to_f64()) - log_l;
        if acc < best.0 {
            best = (acc, i + 1);
        }
    }
    best.1 % orbit.period()
}

/// Orbit certificate: the geometric mean over the orbit is `≥ |λ|` and
/// every preimage of an orbit point that is off the orbit is a zero of `w`.
/// The anchor orbit is rotated to start at the cycle-lemma point.
pub fn corollary1_certificate(spec: &WcoSpec, lambda_abs: f64, orbit: &PeriodicOrbit) -> Option<Certificate> {
    let w = spec.weight();
    let d = spec.degree();
    if !(lambda_abs > 0.0) {
        return None;
    }
    let mean = orbit_log_mean(w, orbit);
    let slack = mean - lambda_abs.ln();
    if !(slack >= -1e-9) {
        return None;
    }
    let mut worst = 0.0f64;
    for p in orbit.angles() {
        for e in preimages(&p, d) {
            if e.as_rational().map_or(false, |r| orbit.contains(&r)) {
                continue;
            }
            let m = w.modulus(&e);
            if m > w.zero_tol() {
                return None;
            }
            worst = worst.max(m);
        }
    }
    let start = cycle_lemma_start(w, orbit, lambda_abs);
    Some(Certificate {
        kind: CertificateKind::Corollary1Orbit,
        radius: lambda_abs,
        anchor: Anchor::Orbit(orbit.rotated(start)),
        depth: orbit.period(),
        margin: slack.min(w.zero_tol() - worst),
        violation: None,
    })
}

fn fiber_max(w: &Weight, k: &Angle, d: usize) -> f64 {
    preimages(k, d).iter().map(|e| w.modulus(e)).fold(0.0, f64::max)
}

/// Looks for `k` with `w ≡ 0` on `φ^{−1}(k)`: images of the circle zeros
/// first, then a uniform grid of `grid` points.
pub fn lemma3_zero_check(spec: &WcoSpec, grid: usize) -> Option<Certificate> {
    let w = spec.weight();
    let d = spec.degree();
    if !w.has_circle_zeros() {
        return None;
    }
    let tol = w.zero_tol();
    let mut candidates: Vec<Angle> = w.circle_zeros().iter().map(|z| doubling_step(z, d)).collect();
    candidates.extend((0..grid.max(1)).map(|j| Angle::exact(j as i128, grid.max(1) as i128).expect("grid")));
    candidates.into_iter().find_map(|k| {
        let m = fiber_max(w, &k, d);
        (m <= tol).then(|| Certificate {
            kind: CertificateKind::Lemma3Fiber,
            radius: 0.0,
            anchor: Anchor::Point(k),
            depth: 1,
            margin: tol - m,
            violation: None,
        })
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Reachability {
    pub holds: bool,
    pub depth: usize,
    /// Point from which every zero-free backward chain stays in the
    /// forward images of the zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stuck_at: Option<Angle>,
}

fn contains(set: &[Angle], a: &Angle) -> bool {
    set.iter().any(|b| b.same_point(a, 1e-12))
}

/// Finite-depth check that from every `t_0` some zero-free backward chain
/// reaches a point `t_p` whose whole backward tree avoids the zeros, i.e.
/// `t_p ∉ Z ∪ φ(Z) ∪ … ∪ φ^D(Z)`.
pub fn theorem5_reachability(spec: &WcoSpec, depth: usize) -> Reachability {
    let w = spec.weight();
    let d = spec.degree();
    let zeros = w.circle_zeros().to_vec();
    let mut images: Vec<Angle> = Vec::new();
    for z in &zeros {
        let mut x = *z;
        for _ in 0..depth {
            x = doubling_step(&x, d);
            if contains(&images, &x) {
                break;
            }
            images.push(x);
        }
    }
    let mut bad: Vec<Angle> = zeros.clone();
    for x in &images {
        if !contains(&bad, x) {
            bad.push(*x);
        }
    }
    for t0 in &bad {
        let mut queue = VecDeque::from([(*t0, 0usize)]);
        let mut seen = vec![*t0];
        let mut found = false;
        while let Some((t, level)) = queue.pop_front() {
            if level == depth {
                continue;
            }
            for e in preimages(&t, d) {
                if contains(&zeros, &e) {
                    continue;
                }
                if !contains(&bad, &e) {
                    found = true;
                    break;
                }
                if !contains(&seen, &e) {
                    seen.push(e);
                    queue.push_back((e, level + 1));
                }
            }
            if found {
                break;
            }
        }
        if !found {
            return Reachability {
                holds: false,
                depth,
                stuck_at: Some(*t0),
            };
        }
    }
    // off the bad set any zero-free preimage works, so only full zero fibers block
    if lemma3_zero_check(spec, 0).is_some() {
        return Reachability {
            holds: false,
            depth,
            stuck_at: None,
        };
    }
    Reachability {
        holds: true,
        depth,
        stuck_at: None,
    }
}
