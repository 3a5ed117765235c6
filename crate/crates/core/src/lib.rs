//! Semi-Fredholm spectra of weighted composition operators
//! `(Tf)(z) = w(z) f(B(z))` on the disc algebra, where `B` is a finite
//! Blaschke product.
//!
//! Every spectral question is reduced to the boundary dynamics of
//! `t ↦ d·t mod 1`:
//!
//! - [`blaschke`]: evaluation, derivatives and dynamical classification of `B`.
//! - [`circle`]: exact d-adic dynamics on ℝ/ℤ and the semiconjugacy `h∘B = h^d`.
//! - [`radius`]: the spectral radius as an ergodic optimization over periodic orbits.
//! - [`engine`]: membership certificates, rejection trees and spectrum assembly.
//! - [`outer`]: synthesis of disc-algebra weights with prescribed boundary modulus.

pub mod blaschke;
pub mod circle;
pub mod engine;
pub mod error;
pub mod outer;
pub mod radius;

mod json;

pub use blaschke::{BlaschkeProduct, Classification, Kind};
pub use circle::{Angle, PeriodicOrbit, SemiconjugacyTable};
pub use engine::{Certificate, CertificateKind, SpectrumResult};
pub use error::{Error, Result};
pub use outer::{AnalyticWeight, ModulusProfile};
pub use radius::{Weight, WcoSpec};

pub use num_complex::Complex64;
