//! Membership certificates for `σ_a.p.(T) = σ_usf(T)` and spectrum assembly.
//!
//! Every verdict is about a radius `|λ|`; the spectra are rotation invariant.

mod annulus;
mod assemble;
mod build;
mod certify;
mod example6;

use serde::{Deserialize, Serialize};

use crate::circle::{Angle, PeriodicOrbit};

pub use annulus::{proposition1_annulus, AnnulusReport, BasinArc};
pub use assemble::{
    assemble_spectrum, conjecture1_scan, radius_verdict, rejection_anchors, Region, ScanReport, ScanRow,
    SpectrumOptions, SpectrumPath, SpectrumResult, Verdict,
};
pub use build::{
    select_disjoint_orbits, theorem11_build_weight, theorem6_build_weight, BuildOptions, Theorem11Report,
};
pub use certify::{
    corollary1_certificate, cycle_lemma_start, feasible_depth, lemma1_criterion, lemma1_with, lemma3_zero_check,
    theorem5_reachability, Lemma1Options, Reachability,
};
pub use example6::{verify_example6, Example6Report, Example6Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    Lemma1Point,
    Corollary1Orbit,
    Lemma3Fiber,
    RejectionTree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Point(Angle),
    Orbit(PeriodicOrbit),
}

/// `φ^m(e) = φ^n(k)` with `|w_m(e)|/λ^m > |w_n(k)|/λ^n`; both sides in log form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub e: Angle,
    pub m: usize,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub radius: f64,
    pub anchor: Anchor,
    pub depth: usize,
    /// Smallest slack among the checked inequalities (negative on a violation).
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

impl Certificate {
    pub fn accepts(&self) -> bool {
        self.kind != CertificateKind::RejectionTree
    }
}
