use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::Kind;
use crate::circle::{periodic_orbits, preimages, Angle, PeriodicOrbit, Rational};
use crate::error::{Error, Result};
use crate::radius::{default_max_period, orbit_log_mean, spectral_radius, RadiusEstimate, WcoSpec};

use super::certify::{
    corollary1_certificate, feasible_depth, cycle_lemma_start, lemma1_with, lemma3_zero_check, theorem5_reachability, Lemma1Options,
    Reachability,
};
use super::{Anchor, Certificate, CertificateKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub max_period: Option<usize>,
    /// Tree depth for rejections.
    pub depth: usize,
    /// Tree depth for the `Lemma1Point` checks behind accepted radii.
    pub certify_depth: usize,
    pub reach_depth: usize,
    /// Radii to probe on the scan path; defaults to midpoints between the
    /// accepted radii (and between 0 and the smallest one).
    pub probe_radii: Option<Vec<f64>>,
    pub anchor_max_den: Option<u32>,
    pub lemma3_grid: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            max_period: None,
            depth: 10,
            certify_depth: 10,
            reach_depth: 32,
            probe_radii: None,
            anchor_max_den: None,
            lemma3_grid: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Accept,
    Reject,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub radius: f64,
    pub verdict: Verdict,
    pub kind: Option<CertificateKind>,
    pub depth: usize,
    pub margin: Option<f64>,
    pub reason: String,
    pub anchors_tested: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    Disc { radius: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumPath {
    Theorem4,
    Theorem5,
    Scan,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub rho: f64,
    pub rho_upper_est: f64,
    pub usf_radii: Vec<f64>,
    pub includes_zero: bool,
    pub full_spectrum: Region,
    pub lsf_equals_spectrum: bool,
    pub path: SpectrumPath,
    pub certificates: Vec<Certificate>,
    pub rejected: Vec<ScanRow>,
    pub undecided: Vec<ScanRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reachability: Option<Reachability>,
    pub max_period: usize,
    pub depth: usize,
}

/// All reduced `p/q` with `q ≤ max_den`, plus the circle zeros of the weight.
pub fn rejection_anchors(spec: &WcoSpec, max_den: u32) -> Vec<Angle> {
    let mut out = Vec::new();
    for q in 1..=max_den.max(1) as i128 {
        for p in 0..q {
            let r = Rational::new(p, q);
            if *r.denom() == q {
                out.push(Angle::from_rational(r));
            }
        }
    }
    for z in spec.weight().circle_zeros() {
        if !out.iter().any(|a| a.same_point(z, 0.0)) {
            out.push(*z);
        }
    }
    out
}

/// Node budget for the accept-side tree checks.
const CERTIFY_BUDGET: u64 = 2_000_000;

fn default_max_den(d: usize) -> u32 {
    let full = (d as u64).saturating_pow(6).saturating_sub(1);
    full.min(63) as u32
}

/// Orbits passing the zero-preimage half of the orbit certificate, with
/// their log geometric means.
struct Context {
    estimate: RadiusEstimate,
    candidates: Vec<(PeriodicOrbit, f64)>,
    anchors: Vec<Angle>,
    depth: usize,
    certify_depth: usize,
}

fn context(spec: &WcoSpec, opts: &SpectrumOptions) -> Result<Context> {
    let d = spec.degree();
    let max_period = opts.max_period.unwrap_or_else(|| default_max_period(d));
    let estimate = spectral_radius(spec, max_period)?;
    let w = spec.weight();
    let candidates = if w.has_circle_zeros() {
        periodic_orbits(d, max_period)?
            .into_par_iter()
            .filter(|o| {
                o.angles().iter().all(|p| {
                    preimages(p, d).iter().all(|e| {
                        e.as_rational().map_or(false, |r| o.contains(&r)) || w.modulus(e) <= w.zero_tol()
                    })
                })
            })
            .map(|o| {
                let m = orbit_log_mean(w, &o);
                (o, m)
            })
            .filter(|(_, m)| m.is_finite())
            .collect()
    } else {
        Vec::new()
    };
    let anchors = rejection_anchors(spec, opts.anchor_max_den.unwrap_or_else(|| default_max_den(d)));
    Ok(Context {
        estimate,
        candidates,
        anchors,
        depth: opts.depth,
        certify_depth: feasible_depth(d, opts.certify_depth, CERTIFY_BUDGET),
    })
}

fn lemma1_opts(depth: usize) -> Lemma1Options {
    Lemma1Options {
        depth,
        ..Lemma1Options::default()
    }
}

/// Accepting certificates for radius `r`: orbit certificate plus a
/// `Lemma1Point` check at the cycle-lemma point, or a `Lemma1Point` at the
/// maximizing orbit.
fn try_accept(spec: &WcoSpec, ctx: &Context, r: f64) -> Result<Option<Vec<Certificate>>> {
    let log_r = r.ln();
    for (orbit, mean) in &ctx.candidates {
        if *mean < log_r - 1e-9 {
            continue;
        }
        if let Some(c1) = corollary1_certificate(spec, r, orbit) {
            let Anchor::Orbit(rot) = &c1.anchor else { unreachable!() };
            let k = rot.angles()[0];
            let l1 = lemma1_with(spec, r, &k, lemma1_opts(ctx.certify_depth))?;
            if l1.accepts() {
                return Ok(Some(vec![c1, l1]));
            }
        }
    }
    let top = &ctx.estimate.orbit;
    if r <= ctx.estimate.rho_lower * (1.0 + 1e-9) && ctx.estimate.rho_lower > 0.0 {
        let s = cycle_lemma_start(spec.weight(), top, r);
        let k = top.angles()[s];
        let l1 = lemma1_with(spec, r, &k, lemma1_opts(ctx.certify_depth))?;
        if l1.accepts() {
            return Ok(Some(vec![l1]));
        }
    }
    Ok(None)
}

fn verdict(spec: &WcoSpec, ctx: &Context, r: f64) -> Result<ScanRow> {
    let row = |verdict, kind, margin, reason: &str, anchors_tested, certificate| ScanRow {
        radius: r,
        verdict,
        kind,
        depth: ctx.depth,
        margin,
        reason: reason.to_string(),
        anchors_tested,
        certificate,
    };
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("radius {r} must be positive")));
    }
    if r > ctx.estimate.rho_grid_upper * (1.0 + 1e-9) && r > ctx.estimate.rho_lower * (1.0 + 1e-9) {
        return Ok(row(Verdict::Reject, None, None, "above spectral radius estimate", 0, None));
    }
    if let Some(certs) = try_accept(spec, ctx, r)? {
        let first = certs[0].clone();
        return Ok(row(
            Verdict::Accept,
            Some(first.kind),
            Some(certs.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min)),
            "certified",
            0,
            Some(first),
        ));
    }
    let results: Vec<Certificate> = ctx
        .anchors
        .par_iter()
        .map(|k| lemma1_with(spec, r, k, lemma1_opts(ctx.depth)))
        .collect::<Result<_>>()?;
    if let Some(acc) = results.iter().find(|c| c.accepts()) {
        return Ok(row(
            Verdict::Accept,
            Some(CertificateKind::Lemma1Point),
            Some(acc.margin),
            "lemma1 holds at an anchor to the tested depth",
            results.len(),
            Some(acc.clone()),
        ));
    }
    let weakest = results
        .iter()
        .max_by(|a, b| a.margin.total_cmp(&b.margin))
        .cloned();
    match weakest {
        Some(c) => Ok(row(
            Verdict::Reject,
            Some(CertificateKind::RejectionTree),
            Some(c.margin),
            "violation at every anchor",
            results.len(),
            Some(c),
        )),
        None => Ok(row(Verdict::Undecided, None, None, "no anchors", 0, None)),
    }
}

/// Verdict for a single radius.
pub fn radius_verdict(spec: &WcoSpec, r: f64, opts: &SpectrumOptions) -> Result<ScanRow> {
    let ctx = context(spec, opts)?;
    verdict(spec, &ctx, r)
}

fn merge_radii(mut radii: Vec<f64>) -> Vec<f64> {
    radii.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for r in radii {
        match out.last() {
            Some(&last) if (r - last).abs() <= 1e-9 * r.max(1e-300) => {}
            _ => out.push(r),
        }
    }
    out
}

fn check_reducible(spec: &WcoSpec) -> Result<()> {
    if let Some((b, _)) = spec.original() {
        let c = b.classify()?;
        if matches!(c.kind, Kind::Hyperbolic | Kind::SingleParabolic) {
            return Err(Error::Unsupported(format!(
                "{:?} symbol: no reduction to z^d, use the annulus command",
                c.kind
            )));
        }
    }
    Ok(())
}

pub fn assemble_spectrum(spec: &WcoSpec, opts: &SpectrumOptions) -> Result<SpectrumResult> {
    check_reducible(spec)?;
    let ctx = context(spec, opts)?;
    let est = &ctx.estimate;
    let rho = est.rho_lower;
    let w = spec.weight();
    let zero_cert = lemma3_zero_check(spec, opts.lemma3_grid);
    let includes_zero = zero_cert.is_some();
    let reach = w.has_circle_zeros().then(|| theorem5_reachability(spec, opts.reach_depth));

    let direct = match &reach {
        None => Some(SpectrumPath::Theorem4),
        Some(r) if r.holds && !includes_zero => Some(SpectrumPath::Theorem5),
        _ => None,
    };
    if let Some(path) = direct {
        let s = cycle_lemma_start(w, &est.orbit, rho);
        let k = est.orbit.angles()[s];
        let mut certificates = Vec::new();
        if rho > 0.0 {
            let l1 = lemma1_with(spec, rho, &k, lemma1_opts(ctx.certify_depth))?;
            if l1.accepts() {
                certificates.push(l1);
            }
        }
        return Ok(SpectrumResult {
            rho,
            rho_upper_est: est.rho_grid_upper,
            usf_radii: vec![rho],
            includes_zero: false,
            full_spectrum: Region::Disc { radius: rho },
            lsf_equals_spectrum: true,
            path,
            certificates,
            rejected: Vec::new(),
            undecided: Vec::new(),
            reachability: reach,
            max_period: est.max_period,
            depth: opts.depth,
        });
    }

    let mut certificates: Vec<Certificate> = Vec::new();
    let mut radii = Vec::new();
    let mut means: Vec<f64> = ctx.candidates.iter().map(|(_, m)| m.exp()).collect();
    means.push(rho);
    for r in merge_radii(means) {
        if r <= 0.0 {
            continue;
        }
        if let Some(certs) = try_accept(spec, &ctx, r)? {
            radii.push(r);
            certificates.extend(certs);
        }
    }
    if !radii.iter().any(|r| (r - rho).abs() <= 1e-9 * rho) && rho > 0.0 {
        // ρ·𝕋 lies in the boundary of σ(T), hence in σ_a.p.(T)
        radii.push(rho);
    }
    let radii = merge_radii(radii);
    if let Some(c) = zero_cert {
        certificates.push(c);
    }

    let probes = opts.probe_radii.clone().unwrap_or_else(|| {
        let mut p = Vec::new();
        let mut prev = 0.0;
        for &r in &radii {
            if prev > 0.0 || !includes_zero {
                p.push(0.5 * (prev + r));
            }
            prev = r;
        }
        p
    });
    let rows: Vec<ScanRow> = probes.iter().map(|&r| verdict(spec, &ctx, r)).collect::<Result<_>>()?;
    let mut rejected = Vec::new();
    let mut undecided = Vec::new();
    let mut radii = radii;
    for row in rows {
        match row.verdict {
            Verdict::Reject => rejected.push(row),
            Verdict::Undecided => undecided.push(row),
            Verdict::Accept => {
                radii.push(row.radius);
                if let Some(c) = row.certificate.clone() {
                    certificates.push(c);
                }
            }
        }
    }
    Ok(SpectrumResult {
        rho,
        rho_upper_est: est.rho_grid_upper,
        usf_radii: merge_radii(radii),
        includes_zero,
        full_spectrum: Region::Disc { radius: rho },
        lsf_equals_spectrum: !includes_zero,
        path: SpectrumPath::Scan,
        certificates,
        rejected,
        undecided,
        reachability: reach,
        max_period: est.max_period,
        depth: opts.depth,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub accepted: Vec<f64>,
    pub rho_lower: f64,
    pub rho_upper_est: f64,
    pub depth: usize,
}

impl ScanReport {
    pub fn decisive(&self) -> bool {
        self.rows.iter().any(|r| r.verdict != Verdict::Undecided)
    }
}

/// ACCEPT / REJECT / UNDECIDED for each radius of `radii`.
pub fn conjecture1_scan(spec: &WcoSpec, radii: &[f64], depth: usize, opts: &SpectrumOptions) -> Result<ScanReport> {
    check_reducible(spec)?;
    let opts = SpectrumOptions {
        depth,
        ..opts.clone()
    };
    let ctx = context(spec, &opts)?;
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows: Vec<ScanRow> = sorted.iter().map(|&r| verdict(spec, &ctx, r)).collect::<Result<_>>()?;
    let accepted = rows
        .iter()
        .filter(|r| r.verdict == Verdict::Accept)
        .map(|r| r.radius)
        .collect();
    Ok(ScanReport {
        rows,
        accepted,
        rho_lower: ctx.estimate.rho_lower,
        rho_upper_est: ctx.estimate.rho_grid_upper,
        depth,
    })
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::radius::Weight;

    fn spec(d: usize) -> WcoSpec {
        let w = Weight::polynomial(vec![Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0)]).unwrap();
        WcoSpec::model(d, w).unwrap()
    }

    #[test]
    fn odd_degree_gives_unit_disc() {
        let r = assemble_spectrum(&spec(3), &SpectrumOptions::default()).unwrap();
        assert_eq!(r.path, SpectrumPath::Theorem5);
        assert!((r.usf_radii[0] - 1.0).abs() < 1e-12);
        assert!(!r.includes_zero);
    }

    #[test]
    fn doubling_gives_sqrt3_over_2() {
        let r = assemble_spectrum(&spec(2), &SpectrumOptions::default()).unwrap();
        assert_eq!(r.usf_radii.len(), 1);
        assert!((r.usf_radii[0] - 3f64.sqrt() / 2.0).abs() < 1e-9);
        assert_eq!(r.full_spectrum, Region::Disc { radius: r.rho });
    }

    #[test]
    fn anchors_are_reduced() {
        let a = rejection_anchors(&spec(2), 4);
        // 0, 1/2, 1/3, 2/3, 1/4, 3/4
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn radius_above_estimate_is_rejected() {
        let row = radius_verdict(&spec(2), 0.95, &SpectrumOptions::default()).unwrap();
        assert_eq!(row.verdict, Verdict::Reject);
    }
}
