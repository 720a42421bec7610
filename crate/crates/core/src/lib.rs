//! Quantum speed limits for open-system dynamics.
//!
//! States evolve under a time-dependent Lindblad generator; the crate
//! integrates trajectories, evaluates entropy, information and coherence
//! along them, and reports the minimal evolution times those changes imply.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod functionals;
pub mod models;
pub mod qmath;

pub use bounds::{ActionKind, BoundKind, BoundReport, TrajectoryProfile};
pub use dynamics::{evolve, evolve_with_clip, DensityMatrix, Lindbladian, Modulation, Trajectory};
pub use error::{Error, Result};
pub use functionals::ReferenceBasis;
pub use models::{ModelKind, ModelParams};
pub use qmath::{CMatrix, HermitianMatrix, NormKind, C64};
