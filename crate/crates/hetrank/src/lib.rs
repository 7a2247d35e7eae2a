//! Simulator and analytical models for multi-user OFDMA scheduling over
//! receivers that mix a full-band analog beamforming chain with a digital
//! beamforming chain confined to a per-user sub-band.
//!
//! The crate provides:
//! - [`config`]: scenario parameters and their invariants;
//! - [`subband`]: the sub-band arithmetic tying users to resource blocks;
//! - [`traffic`]: seeded, reproducible per-user traffic generation;
//! - [`scheduler`]: the slot-by-slot proportional-fairness simulator;
//! - [`analytics`]: closed-form throughput estimates and capacity bounds;
//! - [`costmodel`]: component counting, power and cost comparisons;
//! - [`signaling`]: bit-exact codecs for the capability/configuration
//!   signaling extensions.

pub mod analytics;
pub mod config;
pub mod costmodel;
pub mod scheduler;
pub mod signaling;
pub mod subband;
pub mod traffic;

pub use config::{ConfigError, Mode, SystemConfig};
pub use scheduler::{run_simulation, RunMetrics, SimulationState};
