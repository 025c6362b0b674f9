//! Gaussian-state simulator for mechanical squeezing generated by the
//! dynamical instability of a linearized optomechanical system.
//!
//! The crate evolves two-mode Gaussian states (cavity + mechanics) under the
//! linearized Hamiltonian with cavity decay and displacement noise, computes
//! the unstable-regime normal form and the associated reduced model for the
//! squeezed normal mode, evaluates closed-form asymptotics of the minimal
//! mechanical variance, and maps physical coherent-scattering setups
//! (levitated nanoparticle + microcavity) onto the model rates.
//!
//! Conventions used throughout:
//! * `hbar = 1`; all model rates are dimensionless multiples of a scenario
//!   reference frequency (`unit_scale`).
//! * Quadrature ordering `(X_a, P_a, X_b, P_b)` with `X = (o + o^dag)/sqrt(2)`,
//!   `P = i (o^dag - o)/sqrt(2)`; vacuum variance is 1/2.
//! * Cavity decay convention `d<a^dag a>/dt = -kappa <a^dag a>`; displacement
//!   noise convention `d<b^dag b>/dt = Gamma`.

pub mod constants;
pub mod design;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod model;
pub mod normalform;
pub mod reduced;

pub use design::{DerivedRates, PhysicalSetup};
pub use dynamics::DriftDiffusion;
pub use error::Error;
pub use metrics::SqueezingReport;
pub use model::{GaussianState, InitialConditions, SystemParams, ThermalBathParams};
pub use normalform::NormalForm;
pub use reduced::{ReducedMoments, ReducedRates};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
