//! Ensemble Monte Carlo transport for electrons in monolayer graphene with
//! phonon and screened electron-electron scattering under Pauli blocking.
//!
//! Units throughout: energy in eV, length in nm, time in ps.

pub mod analysis;
pub mod ee;
pub mod engine;
pub mod error;
pub mod grid;
pub mod io;
pub mod material;
pub mod phonon;
pub mod screening;
pub mod vec2;

pub use ee::{EeKernel, EeRateParams};
pub use engine::{run, run_with, Mode, RunOptions, RunOutput, SimConfig, Simulation, TimeSeries};
pub use io::RunConfig;
pub use error::{Error, Result};
pub use grid::{CellOccupancy, GridSpec, OccupancyField, OccupancyGrid};
pub use material::{Band, MaterialParams, Particle, TableParams};
pub use phonon::{PhononChannel, PhononRateTable, PhononRates};
pub use screening::ScreeningParams;
pub use vec2::Vec2;

/// Crate version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
