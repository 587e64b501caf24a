//! Curvature invariants, radial expansions, identity-space calculus and spectral models
//! for Heisenberg-type groups and their Damek-Ricci extensions.

pub mod cli;
pub mod clifford;
pub mod error;
pub mod geometry;
pub mod heatinv;
pub mod invariants;
pub mod radial;
pub mod report;
pub mod sampling;
pub mod sis;
pub mod spectra;

pub use error::{Error, Result};
