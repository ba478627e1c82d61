//! Numerical toolkit for pseudoabelian integrals and their one-variable
//! calculus: J-series built from compensator binomials, structured Mellin
//! transforms with entire-kernel projection operators, Rolle-type zero
//! counting on sectors, and a planar Darbouxian foliation engine that traces
//! ovals and integrates rational 1-forms along them.
//!
//! The numeric core is generic over the scalar type through [`float::Real`]
//! (`f32`/`f64`); concrete `f64` aliases are exported at the crate root.

pub mod float;
pub mod foliation;
pub mod io;
pub mod jseries;
pub mod mellin;
pub mod quad;
pub mod sweep;
pub mod zerocount;

pub use float::Real;

/// `f64` spectrum.
pub type Spectrum64 = jseries::Spectrum<f64>;
/// `f64` J-series.
pub type JSeries64 = jseries::JSeries<f64>;
/// `f64` point of the universal cover.
pub type SectorPoint64 = jseries::SectorPoint<f64>;
/// `f64` structured Mellin transform.
pub type MellinRep64 = mellin::MellinRep<f64>;
/// `f64` entire kernel.
pub type Kernel64 = mellin::Kernel<f64>;
/// `f64` inversion contour description.
pub type ContourSpec64 = mellin::ContourSpec<f64>;
/// `f64` Darbouxian system.
pub type DarbouxSystem64 = foliation::DarbouxSystem<f64>;
/// `f64` admissible rational 1-form.
pub type AdmissibleForm64 = foliation::AdmissibleForm<f64>;
/// `f64` traced closed level curve.
pub type Oval64 = foliation::Oval<f64>;
