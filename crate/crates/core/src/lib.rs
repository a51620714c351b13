//! Spectral toolkit for the anisotropic discrete Maxwell operator on the
//! cubic lattice Z³.
//!
//! The operator under study is `Ĥ^D = D̂ Ĥ₀` acting on `ℓ²(Z³; C⁶)`, where
//! `D̂ = diag(ε, μ)` holds a constant diagonal permittivity/permeability pair
//! and `Ĥ₀` is the isotropic discrete curl pair. Passing to Fourier series
//! turns `Ĥ^D` into multiplication by a `6×6` symbol `H^D(x)` on the 3-torus,
//! whose spectrum is governed by the dispersion branches `τ^±(z)` of the
//! variable `z = sin² x`.
//!
//! The crate provides:
//!
//! * [`media`] — material parameters `(ε, μ)`, derived quantities
//!   `(β, α, γ, g)`, the `B₀/B₃/B₁₂` classification, and the `(A0)`
//!   normalization.
//! * [`trigpoly`] — sparse trigonometric (Laurent) polynomials on the
//!   3-torus with float or exact-rational coefficients, including the
//!   directional support height `N_ξ^max` and adjugates over the
//!   polynomial ring.
//! * [`symbol`] — pointwise symbol matrices and their numeric spectral
//!   decompositions (the brute-force oracle for every closed form).
//! * [`dispersion`] — closed-form dispersion quantities, the quadric model
//!   of the Fermi variety in `z`, and extremal levels `λ±`.
//! * [`fermi`] — real Fermi-surface sampling on the torus and singular-point
//!   location.
//! * [`eigenmode`] — the explicit mode that defeats the Rellich property in
//!   the critical regime, with its residual and decay diagnostics.
//! * [`lattice`] — finitely supported fields on Z³, the nearest-neighbor
//!   stencil realization of the operator, local perturbations, and Besov
//!   diagnostics.
//! * [`ucp`] — unique-continuation machinery: half-space covers, degree
//!   certificates, the pairing identity, and finite-box null tests.

pub mod dispersion;
pub mod eigenmode;
mod error;
pub mod fermi;
pub mod fourier;
pub mod lattice;
pub mod linalg;
pub mod media;
pub mod rational;
pub mod symbol;
pub mod trigpoly;
pub mod ucp;

pub use error::{Error, Result};
pub use media::{Media, DerivedParams, MediaClass, NormalizedMedia};
