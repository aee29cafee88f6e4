//! Two-spin correlators, quantum Fisher information and quantum coherence in
//! the ground state of the periodic XY chain with Dzyaloshinsky-Moriya
//! coupling in a transverse field.

pub mod app;
pub mod chain;
pub mod config;
pub mod error;
pub mod measures;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod state;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use measures::{measures_at, Measure, MeasureSet};
pub use model::{CorrelationSet, ModelParams};
pub use quadrature::QuadratureSpec;
