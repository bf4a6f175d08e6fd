//! Deterministic simulator for the decay of a quasi-1D two-wall scalar
//! profile, tracking wall geometry, gradient energy, an entropy-calibrated
//! gravitational coupling, an effective potential with a floor, and the
//! kinetic-sector sound speed, and classifying each instant into one of
//! three regimes (thin wall, breakdown, cosmological constant).
//!
//! The crate is pure computation: no I/O, no global state, no randomness.
//! Identical configurations produce bitwise-identical trajectories.

pub mod config;
pub mod entropy;
pub mod error;
pub mod evolution;
pub mod field_profile;
pub mod potential;
pub mod quad;
pub mod soundspeed;

pub use config::{NumericsConfig, OutputConfig, OutputFormat, RunConfig, MAX_GRID_STEPS};
pub use entropy::{EntropyCalibration, EntropyMode, FieldSplit};
pub use error::{Error, Result};
pub use evolution::{
    grid_steps, run_simulation, summarize, ParamSchedule, Regime, RegimeThresholds, RunSummary,
    SimulationRecord, CSV_HEADER,
};
pub use field_profile::{FieldProfileParams, WallDiagnostics};
pub use potential::{BlendMode, BlendSpec, PotentialSpec};
pub use quad::QuadratureSettings;
pub use soundspeed::{KineticFamily, KineticState, SoundSpeed};
