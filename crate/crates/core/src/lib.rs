//! Integrating-factor Runge-Kutta time integrators for semi-discrete
//! gradient flows, with steady-state preserving corrections and a numerical
//! certifier for original-energy dissipation.
//!
//! The pieces, bottom up:
//!
//! - [`tableau`]: Butcher tableaus of the underlying explicit methods.
//! - [`scalarfun`]: scalar coefficient functions of the spectral argument,
//!   including the telescopic and nonlinear-translation corrections.
//! - [`specop`]: the periodic difference Laplacian in diagonal Fourier
//!   form; applies any scalar function of `-tau*L_kappa` to grid data.
//! - [`models`]: double-well and Flory-Huggins reaction terms and the
//!   discrete energies.
//! - [`stepper`]: raw and corrected one-step maps plus trajectory
//!   integration with energy diagnostics.
//! - [`analyzer`]: differentiation matrices, leading-minor scans over
//!   `z <= 0` and the stage energy-law check on simulation data.
//!
//! Scans and sweeps use data parallelism through rayon when the default
//! `parallel` feature is enabled; disable default features for a fully
//! sequential build.

pub mod analyzer;
pub mod models;
pub mod par;
pub mod scalarfun;
pub mod specop;
pub mod stepper;
pub mod tableau;

pub use analyzer::{certify, diff_matrix, stage_energy_check, sym_minors, Definiteness};
pub use models::{energy, modified_energy_if1, EnergyTrace, Model};
pub use scalarfun::CorrectionKind;
pub use specop::{build_operator, Grid, GridFunction, SpectralOperator};
pub use stepper::{integrate, step_corrected, step_raw, SchemeSpec, StepResult, Stepper};
pub use tableau::{registry_get, validate, ButcherTableau};
