//! Conceptor calculus for discrete-time recurrent tanh networks.
//!
//! A reservoir driven by a pattern visits a characteristic ellipsoid of
//! states. A *conceptor* is the positive semidefinite matrix (singular
//! values in `[0, 1]`) that captures this ellipsoid; inserted into the
//! state-update loop it singles out the corresponding dynamics again.
//! This crate provides the full calculus on top of that idea:
//!
//! - [`signals`] — seedable pattern generators, noise, phase-aligned NRMSE
//! - [`reservoir`] — creating and driving random tanh reservoirs
//! - [`conceptor`] — conceptors from state correlations, aperture, quota,
//!   similarity, online adaptation, aperture-selection criteria
//! - [`logic`] — Boolean operations, Löwner abstraction ordering,
//!   constructive witnesses, incremental model extension
//! - [`loading`] — storing patterns into a reservoir and retrieving or
//!   morphing them under conceptor control
//! - [`memory`] — incremental storage with redundancy exploitation and
//!   quota monitoring
//! - [`autoconceptor`] — conceptors adapted online inside the loop they
//!   constrain; cue-triggered content-addressable recall
//! - [`rfc`] — random feature conceptors (elementwise conception weights)
//! - [`recognition`] — evidence-combining temporal pattern classifier
//! - [`hierarchy`] — 3-layer trust-mediated denoising and classification

pub mod autoconceptor;
pub mod conceptor;
pub mod error;
pub mod hierarchy;
pub mod linalg;
pub mod loading;
pub mod logic;
pub mod memory;
pub mod recognition;
pub mod reservoir;
pub mod rfc;
pub mod rng;
pub mod signals;

pub use conceptor::{Conceptor, Correlation};
pub use error::{Error, Result};
// re-exported once the module lands
// pub use loading::LoadedSystem;
pub use reservoir::{Reservoir, StateHarvest};
pub use signals::{PatternSpec, Signal};

/// Relative singular-value cutoff: values below `RANK_EPS * s_max` are
/// treated as exact zeros in rank and pseudoinverse decisions.
pub const RANK_EPS: f64 = 1e-10;

/// Tolerance for PSD repair and for the Löwner ordering test.
pub const PSD_EPS: f64 = 1e-10;

/// Singular values at or above `1 - UNIT_EPS` count as exact ones in
/// identity-space computations.
pub const UNIT_EPS: f64 = 1e-10;
